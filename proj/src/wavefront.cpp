#include "trafficsym/wavefront.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "trafficsym/error.hpp"

namespace trafficsym {

namespace {

constexpr double kBlowUp = 1e12;
constexpr double kBracketLow = 1e6;
constexpr int kShockSubPanels = 8;

double path_speed(const AmplitudeProblem& prob, double x, double t) {
  return prob.background.at(x, t).u + std::sqrt(prob.A);
}

double rk4_path_step(const AmplitudeProblem& prob, double x, double t, double h) {
  const double k1 = path_speed(prob, x, t);
  const double k2 = path_speed(prob, x + 0.5 * h * k1, t + 0.5 * h);
  const double k3 = path_speed(prob, x + 0.5 * h * k2, t + 0.5 * h);
  const double k4 = path_speed(prob, x + h * k3, t + h);
  return x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Running quadrature state at a node: I = int Psi, F = int E.
struct Node {
  double t, x, psi, I, F;
  double E() const { return std::exp(-I); }
};

Node advance_panel(const AmplitudeProblem& prob, const Node& a, double H) {
  const double xm = rk4_path_step(prob, a.x, a.t, 0.5 * H);
  const double tm = a.t + 0.5 * H;
  const double x1 = rk4_path_step(prob, xm, tm, 0.5 * H);
  const double t1 = a.t + H;
  const double pm = psi_along(prob, xm, tm);
  const double p1 = psi_along(prob, x1, t1);

  // Half-panel Simpson-type rule supplies E at the midpoint.
  const double Im = a.I + H / 24.0 * (5 * a.psi + 8 * pm - p1);
  const double I1 = a.I + H / 6.0 * (a.psi + 4 * pm + p1);
  const double F1 = a.F + H / 6.0 * (a.E() + 4 * std::exp(-Im) + std::exp(-I1));
  return {t1, x1, p1, I1, F1};
}

Node advance_to(const AmplitudeProblem& prob, Node a, double t_target, int panels) {
  const double H = (t_target - a.t) / panels;
  for (int k = 0; k < panels; ++k) a = advance_panel(prob, a, H);
  return a;
}

}  // namespace

void AmplitudeProblem::validate() const {
  if (!(A > 0.0) || !std::isfinite(A)) throw std::invalid_argument("wavefront needs A > 0");
  if (!background.eval) throw std::invalid_argument("wavefront needs a background sampler");
  if (!std::isfinite(x0) || !std::isfinite(t0) || !std::isfinite(pi0)) {
    throw std::invalid_argument("wavefront origin and amplitude must be finite");
  }
  if (!background.contains(x0, t0)) throw DomainError("origin outside background domain");
}

CharacteristicPath characteristic_path(const AmplitudeProblem& prob, double t_end, double dt) {
  prob.validate();
  if (!(t_end > prob.t0)) throw std::invalid_argument("t_end must exceed t0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  CharacteristicPath p;
  double t = prob.t0, x = prob.x0;
  p.t.push_back(t);
  p.x.push_back(x);
  const long steps = static_cast<long>(std::ceil((t_end - prob.t0) / dt - 1e-9));
  for (long k = 1; k <= steps; ++k) {
    const double tn = k == steps ? t_end : prob.t0 + k * dt;
    x = rk4_path_step(prob, x, t, tn - t);
    t = tn;
    p.t.push_back(t);
    p.x.push_back(x);
  }
  return p;
}

double psi_along(const AmplitudeProblem& prob, double x, double t) {
  const StatePoint v = prob.background.at(x, t);
  const Partials d = prob.background.has_partials()
                         ? prob.background.partials(x, t)
                         : finite_difference_partials(prob.background, x, t, 4,
                                                      default_fd_step(x, t));
  const double psi = 0.5 * (std::sqrt(prob.A) * d.rho_x / v.rho + 5.0 * d.u_x);
  if (!std::isfinite(psi)) throw NumericalError("Psi is not finite along the path");
  return psi;
}

AmplitudeSolution amplitude_quadrature(const AmplitudeProblem& prob, double t_end, int n) {
  prob.validate();
  if (!(t_end > prob.t0)) throw std::invalid_argument("t_end must exceed t0");
  if (n < 2) throw std::invalid_argument("quadrature needs n >= 2 panels");
  const double H = (t_end - prob.t0) / n;

  AmplitudeSolution sol;
  sol.shock_time = std::numeric_limits<double>::infinity();
  Node cur{prob.t0, prob.x0, psi_along(prob, prob.x0, prob.t0), 0.0, 0.0};
  auto record = [&](const Node& a) {
    sol.times.push_back(a.t);
    sol.x.push_back(a.x);
    sol.psi.push_back(a.psi);
    sol.E.push_back(a.E());
    sol.F.push_back(a.F);
    sol.pi.push_back(prob.pi0 * a.E() / (1.0 + prob.pi0 * a.F));
  };
  record(cur);

  double prev_psi = cur.psi;
  double mid_psi = cur.psi;
  for (int k = 1; k <= n; ++k) {
    const Node next = advance_panel(prob, cur, H);
    if (1.0 + prob.pi0 * next.F <= 0.0) {
      double lo = cur.t, hi = next.t;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const Node m = advance_to(prob, cur, mid, kShockSubPanels);
        if (1.0 + prob.pi0 * m.F > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      sol.shock_time = 0.5 * (lo + hi);
      break;
    }
    prev_psi = cur.psi;
    mid_psi = psi_along(prob, rk4_path_step(prob, cur.x, cur.t, 0.5 * H), cur.t + 0.5 * H);
    cur = next;
    record(cur);
  }

  if (prob.t1_shift) {
    sol.pi_c = 1.0 / (2.0 / 3.0 * (prob.t0 + *prob.t1_shift));
    sol.pi_c_closed_form = true;
  } else {
    // Tail of int E beyond the last node, exact when Psi ~ k / t.
    const double dpsi = (3 * cur.psi - 4 * mid_psi + prev_psi) / H;
    const double denom = cur.psi + dpsi / cur.psi;
    if (cur.psi > 0.0 && denom > 0.0 && std::isfinite(denom)) {
      sol.pi_c = 1.0 / (cur.F + cur.E() / denom);
    } else {
      sol.pi_c = 0.0;  // F grows without bound
    }
  }
  return sol;
}

DirectTrace amplitude_direct(const AmplitudeProblem& prob, double t_end, double dt) {
  prob.validate();
  if (!(t_end > prob.t0)) throw std::invalid_argument("t_end must exceed t0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");

  auto rhs = [&](double t, double x, double p, double& dx, double& dp) {
    dx = path_speed(prob, x, t);
    dp = -p * p - psi_along(prob, x, t) * p;
  };

  DirectTrace tr;
  double t = prob.t0, x = prob.x0, p = prob.pi0;
  double last_small = t;
  tr.times.push_back(t);
  tr.x.push_back(x);
  tr.pi.push_back(p);
  const long outputs = static_cast<long>(std::ceil((t_end - prob.t0) / dt - 1e-9));
  for (long k = 1; k <= outputs; ++k) {
    const double target = k == outputs ? t_end : prob.t0 + k * dt;
    while (t < target) {
      double h = target - t;
      if (p != 0.0) h = std::min(h, 0.05 / std::abs(p));
      double kx1, kp1, kx2, kp2, kx3, kp3, kx4, kp4;
      rhs(t, x, p, kx1, kp1);
      rhs(t + 0.5 * h, x + 0.5 * h * kx1, p + 0.5 * h * kp1, kx2, kp2);
      rhs(t + 0.5 * h, x + 0.5 * h * kx2, p + 0.5 * h * kp2, kx3, kp3);
      rhs(t + h, x + h * kx3, p + h * kp3, kx4, kp4);
      x += h / 6.0 * (kx1 + 2 * kx2 + 2 * kx3 + kx4);
      p += h / 6.0 * (kp1 + 2 * kp2 + 2 * kp3 + kp4);
      t = (target - (t + h) <= 1e-14 * std::max(1.0, std::abs(target))) ? target : t + h;
      if (std::abs(p) <= kBracketLow) last_small = t;
      if (!(std::abs(p) <= kBlowUp)) {
        tr.blew_up = true;
        tr.bracket_lo = last_small;
        tr.bracket_hi = t + (std::isfinite(p) ? 2.0 / std::abs(p) : 0.0);
        return tr;
      }
    }
    tr.times.push_back(t);
    tr.x.push_back(x);
    tr.pi.push_back(p);
  }
  return tr;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::ExpansiveDecay: return "expansive-decay";
    case Regime::SubcriticalDecay: return "subcritical-decay";
    case Regime::SupercriticalShock: return "supercritical-shock";
  }
  return "?";
}

Regime predicted_regime(double pi0, double pi_c) {
  if (pi0 >= 0.0) return Regime::ExpansiveDecay;
  return -pi0 <= pi_c ? Regime::SubcriticalDecay : Regime::SupercriticalShock;
}

}  // namespace trafficsym
