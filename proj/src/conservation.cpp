#include "trafficsym/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trafficsym/error.hpp"

namespace trafficsym {

namespace {

// Values at or below this are treated as round-off in convergence studies.
constexpr double kExactFloor = 1e-9;

struct Generator {
  double Fx, Ft, Frho, Fu;
  double dFx_dx;  // total x-derivative of Fx
};

Generator generator_for(ConservedKind which, double x, double t, double rho) {
  switch (which) {
    case ConservedKind::S1: return {x, t, -rho, 0.0, 1.0};
    case ConservedKind::S2: return {0.0, 1.0, 0.0, 0.0, 0.0};
    case ConservedKind::S3: return {t, 0.0, 0.0, 1.0, 0.0};
    case ConservedKind::S4: return {1.0, 0.0, 0.0, 0.0, 0.0};
    default: throw std::invalid_argument("conserved vector needs one of S1..S4");
  }
}

double multiplier_g(const MultiplierConstants& c, const StatePoint& s) {
  return c.c1 * (s.rho + s.u) + c.c2;
}

double multiplier_h(const MultiplierConstants& c, const ModelParams& p, const StatePoint& s) {
  return c.c1 * s.u - c.c1 * p.A / s.rho + c.c3;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite ") + what);
}

ConvergenceStudy finish_study(ConvergenceStudy st) {
  st.exact = std::all_of(st.values.begin(), st.values.end(),
                         [](double v) { return v <= kExactFloor; });
  for (std::size_t k = 0; k + 1 < st.values.size(); ++k) {
    const double fine = st.values[k + 1];
    st.ratios.push_back(fine > 0.0 ? st.values[k] / fine
                                   : std::numeric_limits<double>::infinity());
  }
  if (st.exact) {
    st.order = std::numeric_limits<double>::quiet_NaN();
  } else if (!st.ratios.empty()) {
    st.order = std::log2(st.ratios.back());
  }
  return st;
}

}  // namespace

std::string conserved_kind_name(ConservedKind k) {
  switch (k) {
    case ConservedKind::Mass: return "mass";
    case ConservedKind::Momentum: return "momentum";
    case ConservedKind::S1: return "S1";
    case ConservedKind::S2: return "S2";
    case ConservedKind::S3: return "S3";
    case ConservedKind::S4: return "S4";
  }
  return "?";
}

BasicConserved basic_conserved(const ModelParams& p, const StatePoint& s) {
  p.validate();
  if (p.D != 0.0) throw std::invalid_argument("mass/momentum pair is derived for D = 0");
  BasicConserved out;
  out.mass = {s.rho, s.rho * s.u, ConservedKind::Mass};
  out.momentum = {s.rho * s.u, s.rho * s.u * s.u + p.A * s.rho, ConservedKind::Momentum};
  return out;
}

SelfAdjointMultipliers self_adjoint_substitution(const MultiplierConstants& c,
                                                 const ModelParams& p, const StatePoint& s) {
  if (!(s.rho > 0.0)) throw DomainError("multipliers need rho > 0");
  SelfAdjointMultipliers m;
  m.h = multiplier_h(c, p, s);
  m.g = multiplier_g(c, s);
  m.l1 = -c.c1;
  m.l2 = -c.c1;
  m.l3 = -c.c1 * p.A / (s.rho * s.rho);
  m.l4 = -c.c1;
  return m;
}

AdjointResidual adjoint_identity_residual(const MultiplierConstants& c, const ModelParams& p,
                                          const SolutionSampler& s, double x, double t,
                                          double h_step) {
  if (!(h_step > 0.0)) throw std::invalid_argument("h_step must be > 0");
  const double hs = h_step;
  const StatePoint v0 = s.at(x, t);
  const StatePoint xp = s.at(x + hs, t), xm = s.at(x - hs, t);
  const StatePoint tp = s.at(x, t + hs), tm = s.at(x, t - hs);
  if (!(v0.rho > 0.0)) throw DomainError("adjoint identity needs rho > 0");

  auto dx = [hs](double fm, double fp) { return (fp - fm) / (2 * hs); };
  auto dxx = [hs](double fm, double f0, double fp) { return (fp - 2 * f0 + fm) / (hs * hs); };

  const double rho = v0.rho, u = v0.u;
  const double rho_x = dx(xm.rho, xp.rho);
  const double rho_xx = dxx(xm.rho, rho, xp.rho);
  const double u_xx = dxx(xm.u, u, xp.u);

  const double g0 = multiplier_g(c, v0);
  const double g_x = dx(multiplier_g(c, xm), multiplier_g(c, xp));
  const double g_xx = dxx(multiplier_g(c, xm), g0, multiplier_g(c, xp));
  const double g_t = dx(multiplier_g(c, tm), multiplier_g(c, tp));
  const double h_x = dx(multiplier_h(c, p, xm), multiplier_h(c, p, xp));
  const double h_t = dx(multiplier_h(c, p, tm), multiplier_h(c, p, tp));

  const double D = p.D, A = p.A;
  const double S1 = (D * g0 * rho * rho_xx - D * g_xx * rho * rho - 2 * D * g0 * rho_x * rho_x +
                     2 * D * g_x * rho * rho_x - rho * rho * rho * (h_x * rho + g_x * u + g_t)) /
                    (rho * rho * rho);
  const double S2 = (-h_x * u * rho * rho - A * g_x * rho + D * g0 * u_xx - h_t * rho * rho) /
                    (rho * rho);

  const Residual R = pde_residual(p, s, x, t);
  const SelfAdjointMultipliers m = self_adjoint_substitution(c, p, v0);
  AdjointResidual out{S1 - (m.l1 * R.r1 + m.l2 * R.r2), S2 - (m.l3 * R.r1 + m.l4 * R.r2)};
  require_finite(out.d1, "adjoint residual d1");
  require_finite(out.d2, "adjoint residual d2");
  return out;
}

ConvergenceStudy adjoint_identity_study(const MultiplierConstants& c, const ModelParams& p,
                                        const SolutionSampler& s, double x, double t,
                                        double h0, int levels) {
  if (levels < 2) throw std::invalid_argument("a study needs at least two levels");
  ConvergenceStudy st;
  for (int k = 0; k < levels; ++k) {
    const double hs = h0 * std::ldexp(1.0, -k);
    const AdjointResidual r = adjoint_identity_residual(c, p, s, x, t, hs);
    st.steps.push_back(hs);
    st.values.push_back(std::max(std::abs(r.d1), std::abs(r.d2)));
  }
  return finish_study(std::move(st));
}

FieldJet field_jet(const SolutionSampler& s, double x, double t) {
  FieldJet j;
  j.v = s.at(x, t);
  const double hs = default_fd_step(x, t);
  auto d4 = [hs](double fm2, double fm1, double fp1, double fp2) {
    return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * hs);
  };
  if (s.has_partials()) {
    j.d = s.partials(x, t);
    auto ux_at = [&](double tt) {
      if (!s.contains(x, tt)) throw DomainError("u_tx stencil leaves the domain");
      return s.partials(x, tt).u_x;
    };
    j.u_tx = d4(ux_at(t - 2 * hs), ux_at(t - hs), ux_at(t + hs), ux_at(t + 2 * hs));
  } else {
    j.d = finite_difference_partials(s, x, t, 4, hs);
    auto ux_at = [&](double tt) {
      return d4(s.at(x - 2 * hs, tt).u, s.at(x - hs, tt).u, s.at(x + hs, tt).u,
                s.at(x + 2 * hs, tt).u);
    };
    j.u_tx = d4(ux_at(t - 2 * hs), ux_at(t - hs), ux_at(t + hs), ux_at(t + 2 * hs));
  }
  require_finite(j.u_tx, "u_tx");
  return j;
}

ConservedVector symmetry_conserved_vector(ConservedKind which, const MultiplierConstants& c,
                                          const ModelParams& p, const SolutionSampler& s,
                                          double x, double t) {
  const FieldJet j = field_jet(s, x, t);
  const double rho = j.v.rho, u = j.v.u;
  const double rho_x = j.d.rho_x, rho_t = j.d.rho_t;
  const double u_x = j.d.u_x, u_t = j.d.u_t, u_xx = j.d.u_xx, u_tx = j.u_tx;
  const double A = p.A, D = p.D;

  const double G = c.c1 * (rho + u) + c.c2;
  const double H = c.c1 * u - A * c.c1 / rho + c.c3;
  const double W = -c.c1 * D * u_x / rho + D * (c.c1 * u + c.c2) * rho_x / (rho * rho);
  const double V = (c.c1 * u + c.c3) * u + (c.c1 * rho + c.c2) * A / rho;

  ConservedVector out;
  switch (which) {
    case ConservedKind::S1: {
      const double a = x * u_x + t * u_t;
      const double b = rho + x * rho_x + t * rho_t;
      out.Ux = D * G / rho * (u_x + x * u_xx + t * u_tx) + a * (W + H * rho + G * u) - b * V;
      out.Ut = -G * a - H * b;
      break;
    }
    case ConservedKind::S2:
      out.Ux = D * G * u_tx / rho + (W - H * rho - G * u) * u_t - rho_t * V;
      out.Ut = -G * u_t - H * rho_t;
      break;
    case ConservedKind::S3:
      out.Ux = D * G * t * u_xx / rho - (W + H * rho + G * u) * (1 - t * u_x) - t * rho_x * V;
      out.Ut = G * (1 - t * u_x) - H * t * rho_x;
      break;
    case ConservedKind::S4:
      out.Ux = D * G * u_xx / rho + (W - H * rho - G * u) * u_x - rho_x * V;
      out.Ut = -G * u_x - H * rho_x;
      break;
    default: throw std::invalid_argument("conserved vector needs one of S1..S4");
  }
  require_finite(out.Ux, "Ux");
  require_finite(out.Ut, "Ut");
  return out;
}

ConservedVector derived_conserved_vector(ConservedKind which, const MultiplierConstants& c,
                                         const ModelParams& p, const SolutionSampler& s,
                                         double x, double t) {
  const FieldJet j = field_jet(s, x, t);
  const Generator F = generator_for(which, x, t, j.v.rho);
  const double rho = j.v.rho, u = j.v.u;
  const double A = p.A, D = p.D;

  const double g = multiplier_g(c, j.v);
  const double h = multiplier_h(c, p, j.v);
  const Residual R = pde_residual(p, j.v, j.d);
  const double L = h * R.r1 + g * R.r2;

  // Partial derivatives of L with respect to the jet variables.
  const double L_rho_x = h * u + g * A / rho;
  const double L_u_x = h * rho + g * u;
  const double L_u_xx = -g * D / rho;
  const double L_rho_t = h;
  const double L_u_t = g;

  const double g_x = c.c1 * (j.d.rho_x + j.d.u_x);
  const double Dx_L_u_xx = -D * (g_x / rho - g * j.d.rho_x / (rho * rho));

  const double w1 = F.Frho - F.Fx * j.d.rho_x - F.Ft * j.d.rho_t;
  const double w2 = F.Fu - F.Fx * j.d.u_x - F.Ft * j.d.u_t;
  const double Dx_w2 = -F.dFx_dx * j.d.u_x - F.Fx * j.d.u_xx - F.Ft * j.u_tx;

  ConservedVector out;
  out.Ux = F.Fx * L + w1 * L_rho_x + w2 * L_u_x - w2 * Dx_L_u_xx + L_u_xx * Dx_w2;
  out.Ut = F.Ft * L + w1 * L_rho_t + w2 * L_u_t;
  require_finite(out.Ux, "Ux");
  require_finite(out.Ut, "Ut");
  return out;
}

double divergence_residual(ConservedKind which, const MultiplierConstants& c,
                           const ModelParams& p, const SolutionSampler& s, double x, double t,
                           double h_step, VectorRoute route) {
  if (!(h_step > 0.0)) throw std::invalid_argument("h_step must be > 0");
  for (const auto& [px, pt] : {std::pair{x + h_step, t}, std::pair{x - h_step, t},
                               std::pair{x, t + h_step}, std::pair{x, t - h_step}}) {
    if (!s.contains(px, pt)) throw DomainError("divergence stencil leaves the domain");
  }
  auto vec = [&](double xx, double tt) {
    return route == VectorRoute::Printed ? symmetry_conserved_vector(which, c, p, s, xx, tt)
                                         : derived_conserved_vector(which, c, p, s, xx, tt);
  };
  const double dUx = (vec(x + h_step, t).Ux - vec(x - h_step, t).Ux) / (2 * h_step);
  const double dUt = (vec(x, t + h_step).Ut - vec(x, t - h_step).Ut) / (2 * h_step);
  return dUx + dUt;
}

ConvergenceStudy divergence_study(ConservedKind which, const MultiplierConstants& c,
                                  const ModelParams& p, const SolutionSampler& s,
                                  const std::vector<std::pair<double, double>>& pts, double h0,
                                  int levels, VectorRoute route) {
  if (levels < 2) throw std::invalid_argument("a study needs at least two levels");
  if (pts.empty()) throw std::invalid_argument("divergence study needs points");
  ConvergenceStudy st;
  for (int k = 0; k < levels; ++k) {
    const double hs = h0 * std::ldexp(1.0, -k);
    double worst = 0.0;
    for (const auto& [x, t] : pts) {
      worst = std::max(worst, std::abs(divergence_residual(which, c, p, s, x, t, hs, route)));
    }
    st.steps.push_back(hs);
    st.values.push_back(worst);
  }
  return finish_study(std::move(st));
}

double kink_ode_oracle(const KinkParams& k, double A, double x_fixed, double t) {
  if (!(A > 0.0)) throw std::invalid_argument("kink ODE needs A > 0");
  const auto [M, dM] = kink_profile(k, x_fixed);
  if (M == 0.0) throw DomainError("kink profile vanishes at x");
  CatalogEntry e = make_entry(k);
  e.model.A = A;
  const StatePoint v = eval(e, x_fixed, t);
  const double N = v.rho * v.u;
  // dN/dt of N = -sqrt(A) M tanh(sqrt(A) (M'/M) (c1 + t)).
  const double c = std::sqrt(A);
  const double th = std::tanh(c * dM / M * (k.c1 + t));
  const double dN = -A * dM * (1.0 - th * th);
  return M * M * dN - N * N * dM + A * M * M * dM;
}

}  // namespace trafficsym
