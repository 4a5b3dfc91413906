#include "trafficsym/catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "trafficsym/error.hpp"
#include "trafficsym/io.hpp"

namespace trafficsym {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kFdRelStep = 0.02;
constexpr int kFdLevels = 4;

struct KinkDerivs {
  double m, d1, d2, d3;
};

KinkDerivs kink_shape_derivs(const KinkParams& k, double x) {
  switch (k.shape) {
    case KinkShape::Sin: {
      const double s = std::sin(x), c = std::cos(x);
      return {s, c, -s, -c};
    }
    case KinkShape::Cos: {
      const double s = std::sin(x), c = std::cos(x);
      return {c, -s, -c, s};
    }
    case KinkShape::Sec: {
      const double sec = 1.0 / std::cos(x), tn = std::tan(x);
      return {sec, sec * tn, sec * (tn * tn + sec * sec),
              sec * tn * (tn * tn + 5.0 * sec * sec)};
    }
    case KinkShape::Gauss: {
      const double g = std::exp(-x * x);
      return {g, -2.0 * x * g, (4.0 * x * x - 2.0) * g, (12.0 * x - 8.0 * x * x * x) * g};
    }
    case KinkShape::Custom: {
      const double nan = std::nan("");
      return {k.M(x), k.dM(x), k.d2M ? k.d2M(x) : nan, k.d3M ? k.d3M(x) : nan};
    }
  }
  return {};
}

double kink_value(const KinkParams& k, double x) {
  return k.shape == KinkShape::Custom ? k.M(x) : kink_shape_derivs(k, x).m;
}

std::string fmt(double v) { return io::format_double(v); }

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Raw closed forms; callers check the domain.
StatePoint eval_raw(const CatalogEntry& e, double x, double t) {
  const double A = e.model.A;
  return std::visit(
      Overloaded{
          [&](const T1Params& q) -> StatePoint {
            return {q.p2 / (t + q.b), (x + q.p1) / (t + q.b)};
          },
          [&](const T2Params& q) -> StatePoint {
            const double s = x + q.b;
            const double r = std::sqrt(s * s - 4.0 * A * t * t);
            return {2.0 * q.p1 / (r - s), (s + r) / (2.0 * t)};
          },
          [&](const T3Params& q) -> StatePoint {
            const double expo = (t * std::log(t) - x - q.b) / (t * A);
            return {q.p1 / t * std::exp(expo), (x + q.b) / t + 1.0};
          },
          [&](const T4Params& q) -> StatePoint {
            return {q.p1 / std::sqrt(A), q.b + std::sqrt(A)};
          },
          [&](const P522Params& q) -> StatePoint {
            const double lin = q.e3 * t + q.e4;
            const double rq = std::sqrt(2.0 * q.e3 * q.p2 + lin * lin - 2.0 * q.e2 * q.e3 * x);
            return {q.p1 / rq, q.e3 * t / q.e2 + (q.e4 - rq) / q.e2};
          },
          [&](const E3ZeroParams& q) -> StatePoint {
            const double sig = q.e1 * x + q.e4, th = q.e1 * t + q.e2;
            const double r = std::sqrt(sig * sig - 4.0 * A * th * th);
            return {2.0 * q.p1 / (r - sig), (sig + r) / (2.0 * th)};
          },
          [&](const KinkParams& q) -> StatePoint {
            const double c = std::sqrt(A);
            if (q.shape == KinkShape::Custom) {
              const double m = q.M(x);
              return {m, -c * std::tanh(c * q.dM(x) * (q.c1 + t) / m)};
            }
            const KinkDerivs k = kink_shape_derivs(q, x);
            return {k.m, -c * std::tanh(c * k.d1 * (q.c1 + t) / k.m)};
          },
          [&](const ControlParams&) -> StatePoint { return {x + 2.0, 1.0}; },
      },
      e.kind);
}

Partials partials_raw(const CatalogEntry& e, double x, double t) {
  const double A = e.model.A;
  Partials d;
  std::visit(
      Overloaded{
          [&](const T1Params& q) {
            const double tb = t + q.b;
            d.rho_t = -q.p2 / (tb * tb);
            d.u_t = -(x + q.p1) / (tb * tb);
            d.u_x = 1.0 / tb;
          },
          [&](const T2Params& q) {
            // Special case of the E3ZERO derivatives with e1 = 1, theta = t.
            const double s = x + q.b;
            const double r = std::sqrt(s * s - 4.0 * A * t * t);
            const double rho = 2.0 * q.p1 / (r - s), u = (s + r) / (2.0 * t);
            d.rho_x = rho / r;
            d.rho_t = 8.0 * q.p1 * A * t / (r * (r - s) * (r - s));
            d.u_x = u / r;
            d.u_t = -2.0 * A / r - u / t;
            d.u_xx = u * (r - s) / (r * r * r);
          },
          [&](const T3Params& q) {
            const StatePoint v = eval_raw(e, x, t);
            d.rho_x = -v.rho / (t * A);
            d.rho_t = v.rho * (-1.0 / t + 1.0 / (t * A) + (x + q.b) / (t * t * A));
            d.u_x = 1.0 / t;
            d.u_t = -(x + q.b) / (t * t);
          },
          [&](const T4Params&) {},
          [&](const P522Params& q) {
            const double lin = q.e3 * t + q.e4;
            const double Q = 2.0 * q.e3 * q.p2 + lin * lin - 2.0 * q.e2 * q.e3 * x;
            const double rq = std::sqrt(Q), q32 = Q * rq;
            d.rho_x = q.p1 * q.e2 * q.e3 / q32;
            d.rho_t = -q.p1 * q.e3 * lin / q32;
            d.u_x = q.e3 / rq;
            d.u_t = q.e3 / q.e2 - q.e3 * lin / (q.e2 * rq);
            d.u_xx = q.e2 * q.e3 * q.e3 / q32;
          },
          [&](const E3ZeroParams& q) {
            const double sig = q.e1 * x + q.e4, th = q.e1 * t + q.e2;
            const double r = std::sqrt(sig * sig - 4.0 * A * th * th);
            const double rho = 2.0 * q.p1 / (r - sig), u = (sig + r) / (2.0 * th);
            d.rho_x = q.e1 * rho / r;
            d.rho_t = q.e1 * 8.0 * q.p1 * A * th / (r * (r - sig) * (r - sig));
            d.u_x = q.e1 * u / r;
            d.u_t = q.e1 * (-2.0 * A / r - u / th);
            d.u_xx = q.e1 * q.e1 * u * (r - sig) / (r * r * r);
          },
          [&](const KinkParams& q) {
            const KinkDerivs k = kink_shape_derivs(q, x);
            const double c = std::sqrt(A), s = q.c1 + t;
            const double g = k.d1 / k.m;
            const double gp = k.d2 / k.m - g * g;
            const double gpp = k.d3 / k.m - k.d2 * k.d1 / (k.m * k.m) - 2.0 * g * gp;
            const double th = std::tanh(c * g * s);
            const double sech2 = 1.0 - th * th;
            d.rho_x = k.d1;
            d.rho_t = 0.0;
            d.u_x = -A * s * gp * sech2;
            d.u_t = -A * g * sech2;
            d.u_xx = -A * s * sech2 * (gpp - 2.0 * c * s * gp * gp * th);
          },
          [&](const ControlParams&) { d.rho_x = 1.0; },
      },
      e.kind);
  d.source = PartialsSource::Analytic;
  return d;
}

}  // namespace

std::pair<double, double> kink_profile(const KinkParams& k, double x) {
  if (k.shape == KinkShape::Custom) {
    if (!k.M || !k.dM) throw std::invalid_argument("custom kink shape needs M and M'");
    return {k.M(x), k.dM(x)};
  }
  const KinkDerivs d = kink_shape_derivs(k, x);
  return {d.m, d.d1};
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Verified: return "VERIFIED";
    case Status::PaperClaimed: return "PAPER-CLAIMED";
    case Status::Refuted: return "REFUTED";
  }
  return "?";
}

std::string kink_shape_name(KinkShape s) {
  switch (s) {
    case KinkShape::Sin: return "sin";
    case KinkShape::Sec: return "sec";
    case KinkShape::Cos: return "cos";
    case KinkShape::Gauss: return "gauss";
    case KinkShape::Custom: return "custom";
  }
  return "?";
}

std::string entry_name(const CatalogEntry& e) {
  return std::visit(Overloaded{
                        [](const T1Params&) { return std::string("T1"); },
                        [](const T2Params&) { return std::string("T2"); },
                        [](const T3Params&) { return std::string("T3"); },
                        [](const T4Params&) { return std::string("T4"); },
                        [](const P522Params&) { return std::string("P522"); },
                        [](const E3ZeroParams&) { return std::string("E3ZERO"); },
                        [](const KinkParams&) { return std::string("KINK"); },
                        [](const ControlParams&) { return std::string("CONTROL"); },
                    },
                    e.kind);
}

std::string entry_id(const CatalogEntry& e) {
  std::map<std::string, std::string> kv;
  kv["A"] = fmt(e.model.A);
  kv["D"] = fmt(e.model.D);
  std::visit(Overloaded{
                 [&](const T1Params& q) {
                   kv["p1"] = fmt(q.p1);
                   kv["p2"] = fmt(q.p2);
                   kv["b"] = fmt(q.b);
                 },
                 [&](const T2Params& q) {
                   kv["p1"] = fmt(q.p1);
                   kv["b"] = fmt(q.b);
                 },
                 [&](const T3Params& q) {
                   kv["p1"] = fmt(q.p1);
                   kv["b"] = fmt(q.b);
                 },
                 [&](const T4Params& q) {
                   kv["p1"] = fmt(q.p1);
                   kv["b"] = fmt(q.b);
                 },
                 [&](const P522Params& q) {
                   kv["p1"] = fmt(q.p1);
                   kv["p2"] = fmt(q.p2);
                   kv["e2"] = fmt(q.e2);
                   kv["e3"] = fmt(q.e3);
                   kv["e4"] = fmt(q.e4);
                 },
                 [&](const E3ZeroParams& q) {
                   kv["p1"] = fmt(q.p1);
                   kv["e1"] = fmt(q.e1);
                   kv["e2"] = fmt(q.e2);
                   kv["e4"] = fmt(q.e4);
                 },
                 [&](const KinkParams& q) {
                   kv["mshape"] = kink_shape_name(q.shape);
                   kv["c1"] = fmt(q.c1);
                 },
                 [&](const ControlParams&) {},
             },
             e.kind);
  std::string id = entry_name(e);
  char sep = '?';
  for (const auto& [k, v] : kv) {
    id += sep;
    id += k + "=" + v;
    sep = '&';
  }
  return id;
}

CatalogEntry make_entry(const EntryKind& kind) {
  CatalogEntry e;
  e.kind = kind;
  if (std::holds_alternative<P522Params>(kind)) e.model.A = 0.0;
  return e;
}

std::vector<CatalogEntry> default_catalog() {
  std::vector<CatalogEntry> out;
  out.push_back(make_entry(T1Params{}));
  out.push_back(make_entry(T2Params{}));
  out.push_back(make_entry(T3Params{}));
  out.push_back(make_entry(T4Params{}));
  out.push_back(make_entry(P522Params{}));
  out.push_back(make_entry(E3ZeroParams{}));
  struct KinkDefault {
    KinkShape shape;
    double A, c1;
  };
  for (const KinkDefault& k : {KinkDefault{KinkShape::Sin, 1.0, 1.0},
                               KinkDefault{KinkShape::Sec, 5.0, -1.0},
                               KinkDefault{KinkShape::Cos, 5.0, -6.0},
                               KinkDefault{KinkShape::Gauss, 5.0, -6.0}}) {
    KinkParams q;
    q.shape = k.shape;
    q.c1 = k.c1;
    CatalogEntry e = make_entry(q);
    e.model.A = k.A;
    out.push_back(e);
  }
  out.push_back(make_entry(ControlParams{}));
  return out;
}

void check_constraints(const CatalogEntry& e) {
  try {
    e.model.validate();
  } catch (const std::invalid_argument& ex) {
    throw DomainError(ex.what());
  }
  const std::string name = entry_name(e);
  const bool needs_inviscid = !std::holds_alternative<T1Params>(e.kind) &&
                              !std::holds_alternative<ControlParams>(e.kind);
  if (needs_inviscid && e.model.D != 0.0) {
    throw DomainError(name + " requires D = 0");
  }
  if (std::holds_alternative<P522Params>(e.kind)) {
    if (e.model.A != 0.0) throw DomainError("P522 requires A = 0");
    if (std::get<P522Params>(e.kind).e2 == 0.0) throw DomainError("P522 requires e2 != 0");
  }
  const bool needs_positive_A = std::holds_alternative<T3Params>(e.kind) ||
                                std::holds_alternative<T4Params>(e.kind) ||
                                std::holds_alternative<KinkParams>(e.kind);
  if (needs_positive_A && !(e.model.A > 0.0)) throw DomainError(name + " requires A > 0");
  if (const auto* k = std::get_if<KinkParams>(&e.kind)) {
    if (k->shape == KinkShape::Custom && (!k->M || !k->dM)) {
      throw DomainError("custom KINK shape needs M and M'");
    }
  }
}

bool in_domain(const CatalogEntry& e, double x, double t) {
  if (!std::isfinite(x) || !std::isfinite(t)) return false;
  const double A = e.model.A;
  const bool shape_ok = std::visit(
      Overloaded{
          [&](const T1Params& q) { return t + q.b != 0.0; },
          [&](const T2Params& q) {
            const double s = x + q.b;
            const double disc = s * s - 4.0 * A * t * t;
            return t != 0.0 && disc > 0.0 && std::sqrt(disc) - s != 0.0;
          },
          [&](const T3Params& q) { return t > 0.0 && t + q.b != 0.0; },
          [&](const T4Params&) { return true; },
          [&](const P522Params& q) {
            const double lin = q.e3 * t + q.e4;
            return 2.0 * q.e3 * q.p2 + lin * lin - 2.0 * q.e2 * q.e3 * x > 0.0;
          },
          [&](const E3ZeroParams& q) {
            const double sig = q.e1 * x + q.e4, th = q.e1 * t + q.e2;
            const double disc = sig * sig - 4.0 * A * th * th;
            return th != 0.0 && disc > 0.0 && std::sqrt(disc) - sig != 0.0;
          },
          [&](const KinkParams& q) { return kink_value(q, x) != 0.0; },
          [&](const ControlParams&) { return true; },
      },
      e.kind);
  if (!shape_ok) return false;
  const StatePoint v = eval_raw(e, x, t);
  return positive_finite(v.rho) && std::isfinite(v.u);
}

bool has_analytic_partials(const CatalogEntry& e) {
  if (const auto* k = std::get_if<KinkParams>(&e.kind)) {
    return k->shape != KinkShape::Custom || (k->d2M && k->d3M);
  }
  return true;
}

StatePoint eval(const CatalogEntry& e, double x, double t) {
  check_constraints(e);
  if (!in_domain(e, x, t)) {
    throw DomainError(entry_name(e) + ": (" + fmt(x) + ", " + fmt(t) + ") outside domain");
  }
  return eval_raw(e, x, t);
}

Partials analytic_partials(const CatalogEntry& e, double x, double t) {
  check_constraints(e);
  if (!has_analytic_partials(e)) {
    throw std::invalid_argument(entry_name(e) + " has no analytic partials");
  }
  if (!in_domain(e, x, t)) {
    throw DomainError(entry_name(e) + ": (" + fmt(x) + ", " + fmt(t) + ") outside domain");
  }
  return partials_raw(e, x, t);
}

SolutionSampler make_sampler(const CatalogEntry& e) {
  check_constraints(e);
  SolutionSampler s;
  s.eval = [e](double x, double t) { return eval_raw(e, x, t); };
  s.domain = [e](double x, double t) { return in_domain(e, x, t); };
  if (has_analytic_partials(e)) {
    s.partials = [e](double x, double t) { return partials_raw(e, x, t); };
  }
  return s;
}

std::vector<std::pair<double, double>> GridSpec::points() const {
  if (nx < 1 || nt < 1) throw std::invalid_argument("grid needs nx, nt >= 1");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt));
  for (int j = 0; j < nt; ++j) {
    const double t = nt == 1 ? t0 : t0 + (t1 - t0) * j / (nt - 1);
    for (int i = 0; i < nx; ++i) {
      const double x = nx == 1 ? x0 : x0 + (x1 - x0) * i / (nx - 1);
      pts.emplace_back(x, t);
    }
  }
  return pts;
}

GridSpec default_region(const CatalogEntry& e) {
  const double A = e.model.A;
  GridSpec g;
  std::visit(
      Overloaded{
          [&](const T1Params& q) {
            g.x0 = -5.0;
            g.x1 = 5.0;
            g.t0 = std::max(0.5, 0.5 - q.b);
            g.t1 = g.t0 + 2.5;
          },
          [&](const T2Params& q) {
            // |x + b| >= 8 sqrt(A) + 2 keeps the root real for t <= 2.
            const double c = std::sqrt(A);
            g.t0 = 0.5;
            g.t1 = 2.0;
            g.x0 = -(8.0 * c + 8.0) - q.b;
            g.x1 = -(8.0 * c + 2.0) - q.b;
          },
          [&](const T3Params&) {
            g.x0 = -2.0;
            g.x1 = 5.0;
            g.t0 = 0.5;
            g.t1 = 3.0;
          },
          [&](const T4Params&) {
            g.x0 = -5.0;
            g.x1 = 5.0;
            g.t0 = 0.5;
            g.t1 = 3.0;
          },
          [&](const P522Params& q) {
            g.t0 = 0.0;
            g.t1 = 2.0;
            const double ee = q.e2 * q.e3;
            if (ee == 0.0) {
              g.x0 = -5.0;
              g.x1 = 2.0;
              return;
            }
            double lo = std::min(std::pow(q.e3 * g.t0 + q.e4, 2), std::pow(q.e3 * g.t1 + q.e4, 2));
            if (q.e3 != 0.0) {
              const double tz = -q.e4 / q.e3;
              if (tz >= g.t0 && tz <= g.t1) lo = 0.0;
            }
            const double edge = (2.0 * q.e3 * q.p2 + lo - 1.0) / (2.0 * ee);
            if (ee > 0.0) {
              g.x1 = edge;
              g.x0 = edge - 7.0;
            } else {
              g.x0 = edge;
              g.x1 = edge + 7.0;
            }
          },
          [&](const E3ZeroParams& q) {
            g.t0 = 0.0;
            if (q.e1 > 0.0) g.t0 = std::max(0.0, (1.0 - q.e2) / q.e1);
            if (q.e1 < 0.0) g.t0 = std::max(0.0, (q.e2 - 1.0) / -q.e1 - 1.0);
            g.t1 = g.t0 + 1.0;
            if (q.e1 == 0.0) {
              g.x0 = -1.0;
              g.x1 = 1.0;
              return;
            }
            const double thmax =
                std::max(std::abs(q.e1 * g.t0 + q.e2), std::abs(q.e1 * g.t1 + q.e2));
            const double c = std::sqrt(A);
            const double s0 = -(2.0 * c * thmax + 8.0), s1 = -(2.0 * c * thmax + 2.0);
            const double xa = (s0 - q.e4) / q.e1, xb = (s1 - q.e4) / q.e1;
            g.x0 = std::min(xa, xb);
            g.x1 = std::max(xa, xb);
          },
          [&](const KinkParams& q) {
            g.t0 = 0.0;
            g.t1 = 2.0;
            switch (q.shape) {
              case KinkShape::Sin:
                g.x0 = 0.2;
                g.x1 = 2.9;
                break;
              case KinkShape::Sec:
              case KinkShape::Cos:
                g.x0 = -1.2;
                g.x1 = 1.2;
                break;
              case KinkShape::Gauss:
                g.x0 = -3.0;
                g.x1 = 3.0;
                break;
              case KinkShape::Custom:
                g.x0 = -1.0;
                g.x1 = 1.0;
                break;
            }
          },
          [&](const ControlParams&) {
            g.x0 = -1.0;
            g.x1 = 3.0;
            g.t0 = 0.0;
            g.t1 = 1.0;
          },
      },
      e.kind);
  return g;
}

VerifyReport verify_sampler(const SolutionSampler& s, const ModelParams& p,
                            const std::vector<std::pair<double, double>>& pts, double tol,
                            VerifyMode mode, int fd_order) {
  if (fd_order != 2 && fd_order != 4) throw std::invalid_argument("fd order must be 2 or 4");
  p.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (mode == VerifyMode::AnalyticOnly && !s.has_partials()) {
    throw std::invalid_argument("sampler has no analytic partials");
  }
  VerifyReport rep;
  rep.analytic = mode != VerifyMode::FiniteDifferenceOnly && s.has_partials();
  rep.fd_order = fd_order;

  std::vector<std::pair<double, double>> inside;
  inside.reserve(pts.size());
  for (const auto& pt : pts) {
    if (s.contains(pt.first, pt.second)) {
      inside.push_back(pt);
    } else {
      ++rep.skipped;
    }
  }
  if (inside.empty()) throw std::invalid_argument("verification region is empty");
  rep.points = inside.size();

  if (rep.analytic) {
    for (const auto& [x, t] : inside) {
      const Residual r = pde_residual(p, s.eval(x, t), s.partials(x, t));
      rep.max_r1 = std::max(rep.max_r1, std::abs(r.r1));
      rep.max_r2 = std::max(rep.max_r2, std::abs(r.r2));
    }
  }

  // FD refinement study. A point joins only if every level's stencil
  // stays inside the domain.
  if (mode != VerifyMode::AnalyticOnly) {
    std::vector<double> m1(kFdLevels, 0.0), m2(kFdLevels, 0.0);
    std::size_t used = 0;
    for (const auto& [x, t] : inside) {
      const double scale = std::max({1.0, std::abs(x), std::abs(t)});
      std::array<Residual, kFdLevels> rs{};
      bool ok = true;
      for (int k = 0; k < kFdLevels && ok; ++k) {
        const double h = kFdRelStep * std::ldexp(1.0, -k) * scale;
        try {
          const Partials d = finite_difference_partials(s, x, t, fd_order, h);
          rs[static_cast<std::size_t>(k)] = pde_residual(p, s.eval(x, t), d);
        } catch (const DomainError&) {
          ok = false;
        }
      }
      if (!ok) continue;
      ++used;
      for (int k = 0; k < kFdLevels; ++k) {
        m1[static_cast<std::size_t>(k)] =
            std::max(m1[static_cast<std::size_t>(k)], std::abs(rs[static_cast<std::size_t>(k)].r1));
        m2[static_cast<std::size_t>(k)] =
            std::max(m2[static_cast<std::size_t>(k)], std::abs(rs[static_cast<std::size_t>(k)].r2));
      }
    }
    if (used > 0) {
      for (int k = 0; k < kFdLevels; ++k) {
        rep.fd_rel_step.push_back(kFdRelStep * std::ldexp(1.0, -k));
        rep.fd_max_r1.push_back(m1[static_cast<std::size_t>(k)]);
        rep.fd_max_r2.push_back(m2[static_cast<std::size_t>(k)]);
      }
      for (int k = 0; k + 1 < kFdLevels; ++k) {
        const double coarse = std::max(m1[static_cast<std::size_t>(k)], m2[static_cast<std::size_t>(k)]);
        const double fine =
            std::max(m1[static_cast<std::size_t>(k + 1)], m2[static_cast<std::size_t>(k + 1)]);
        rep.ratios.push_back(fine > 0.0 ? coarse / fine : INFINITY);
      }
      rep.observed_order = std::log2(rep.ratios.front());
    } else if (!rep.analytic) {
      throw std::invalid_argument("no finite-difference stencil fits inside the region");
    }
    if (!rep.analytic && used > 0) {
      rep.max_r1 = m1.back();
      rep.max_r2 = m2.back();
    }
  }

  const bool have_fd = !rep.ratios.empty();
  const double fd_finest =
      have_fd ? std::max(rep.fd_max_r1.back(), rep.fd_max_r2.back()) : INFINITY;
  const bool floor_persists =
      have_fd && fd_finest > tol &&
      std::all_of(rep.ratios.begin(), rep.ratios.end(), [](double r) { return r < std::sqrt(2.0); });

  if (rep.analytic) {
    if (rep.max_residual() <= tol) {
      rep.status = Status::Verified;
    } else if (floor_persists) {
      rep.status = Status::Refuted;
    } else {
      rep.status = Status::PaperClaimed;
    }
  } else {
    if (fd_finest <= tol || (rep.observed_order >= fd_order - 1.5 && fd_finest <= 1e-6)) {
      rep.status = Status::Verified;
    } else if (rep.observed_order < 0.5 && fd_finest > tol) {
      rep.status = Status::Refuted;
    } else {
      rep.status = Status::PaperClaimed;
    }
  }
  return rep;
}

VerifyReport verify_entry(const CatalogEntry& e, const GridSpec& region, double tol,
                          VerifyMode mode, int fd_order) {
  const SolutionSampler s = make_sampler(e);
  VerifyReport rep = verify_sampler(s, e.model, region.points(), tol, mode, fd_order);
  if (std::holds_alternative<T2Params>(e.kind)) {
    rep.note = "same family as E3ZERO with e1=1, e2=0, e4=b";
  } else if (std::holds_alternative<E3ZeroParams>(e.kind)) {
    rep.note = "generalises T2 (e1=1, e2=0, e4=b)";
  } else if (std::holds_alternative<KinkParams>(e.kind)) {
    const double floor_r1 = rep.fd_max_r1.empty() ? rep.max_r1 : rep.fd_max_r1.back();
    rep.note = "measured R1 residual floor " + fmt(floor_r1) + " (max |r1| with " +
               (rep.analytic ? "analytic" : "FD") + " partials " + fmt(rep.max_r1) + ")";
  }
  return rep;
}

std::pair<double, double> reduced_ode_residual_T3(double p1, double A, double tau, double D) {
  if (!(A > 0.0)) throw std::invalid_argument("reduced T3 system needs A > 0");
  const double ratio = 1.0;  // l2 / l1
  const double Z = tau + 1.0, dZ = 1.0, d2Z = 0.0;
  const double Y = p1 * std::exp(-tau / A), dY = -Y / A;
  const double g1 = Y * (dZ - 1.0) + dY * (Z - ratio - tau);
  const double g2 = ratio + dZ * (Z - ratio - tau) + (A * dY - D * d2Z) / Y;
  return {g1, g2};
}

}  // namespace trafficsym
