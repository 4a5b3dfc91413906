#include "trafficsym/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trafficsym/error.hpp"

namespace trafficsym {

void ModelParams::validate() const {
  if (!(A >= 0.0) || !std::isfinite(A)) {
    throw std::invalid_argument("speed variance A must be finite and >= 0");
  }
  if (!(D >= 0.0) || !std::isfinite(D)) {
    throw std::invalid_argument("viscosity D must be finite and >= 0");
  }
  if (relaxation_R != 0.0) {
    throw std::invalid_argument("relaxation R must be 0 (homogeneous model only)");
  }
}

StatePoint SolutionSampler::at(double x, double t) const {
  if (!contains(x, t)) {
    throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(t) +
                      ") outside sampler domain");
  }
  return eval(x, t);
}

double pressure(const ModelParams& p, const StatePoint& s, double u_x) {
  return p.A * s.rho - p.D * u_x;
}

namespace {

void require_positive_A(const ModelParams& p) {
  if (!(p.A > 0.0)) {
    throw std::invalid_argument("characteristic structure requires A > 0");
  }
}

}  // namespace

std::array<double, 2> characteristic_speeds(const ModelParams& p, const StatePoint& s) {
  require_positive_A(p);
  const double c = std::sqrt(p.A);
  return {s.u - c, s.u + c};
}

Eigenvectors characteristic_eigenvectors(const ModelParams& p, const StatePoint& s) {
  require_positive_A(p);
  if (!(s.rho > 0.0)) {
    throw std::invalid_argument("eigenvectors require rho > 0");
  }
  const double c = std::sqrt(p.A);
  return Eigenvectors{
      {-c / s.rho, 1.0},
      {-s.rho / c, 1.0},
      {c / s.rho, 1.0},
      {s.rho / c, 1.0},
  };
}

std::array<std::array<double, 2>, 2> characteristic_matrix(const ModelParams& p,
                                                           const StatePoint& s) {
  if (!(s.rho > 0.0)) {
    throw std::invalid_argument("characteristic matrix requires rho > 0");
  }
  return {{{s.u, s.rho}, {p.A / s.rho, s.u}}};
}

double default_fd_step(double x, double t) {
  return 1e-3 * std::max({1.0, std::abs(x), std::abs(t)});
}

Partials finite_difference_partials(const SolutionSampler& s, double x, double t,
                                    int order, double h) {
  if (order != 2 && order != 4) {
    throw std::invalid_argument("finite-difference order must be 2 or 4");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite-difference step must be > 0");
  }
  auto at = [&](double xx, double tt) { return s.at(xx, tt); };

  Partials d;
  d.source = PartialsSource::FiniteDifference;
  d.fd_order = order;
  d.fd_step = h;

  const StatePoint c = at(x, t);
  if (order == 2) {
    const StatePoint xp = at(x + h, t), xm = at(x - h, t);
    const StatePoint tp = at(x, t + h), tm = at(x, t - h);
    d.rho_x = (xp.rho - xm.rho) / (2 * h);
    d.u_x = (xp.u - xm.u) / (2 * h);
    d.rho_t = (tp.rho - tm.rho) / (2 * h);
    d.u_t = (tp.u - tm.u) / (2 * h);
    d.u_xx = (xp.u - 2 * c.u + xm.u) / (h * h);
  } else {
    const StatePoint xp = at(x + h, t), xm = at(x - h, t);
    const StatePoint xp2 = at(x + 2 * h, t), xm2 = at(x - 2 * h, t);
    const StatePoint tp = at(x, t + h), tm = at(x, t - h);
    const StatePoint tp2 = at(x, t + 2 * h), tm2 = at(x, t - 2 * h);
    auto d1 = [h](double fm2, double fm1, double fp1, double fp2) {
      return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
    };
    d.rho_x = d1(xm2.rho, xm.rho, xp.rho, xp2.rho);
    d.u_x = d1(xm2.u, xm.u, xp.u, xp2.u);
    d.rho_t = d1(tm2.rho, tm.rho, tp.rho, tp2.rho);
    d.u_t = d1(tm2.u, tm.u, tp.u, tp2.u);
    d.u_xx = (-xp2.u + 16 * xp.u - 30 * c.u + 16 * xm.u - xm2.u) / (12 * h * h);
  }
  for (double v : {d.rho_x, d.u_x, d.rho_t, d.u_t, d.u_xx}) {
    if (!std::isfinite(v)) throw NumericalError("non-finite finite-difference derivative");
  }
  return d;
}

Residual pde_residual(const ModelParams& p, const StatePoint& s, const Partials& d) {
  if (!(s.rho > 0.0)) {
    throw DomainError("density must be positive, got " + std::to_string(s.rho));
  }
  Residual r;
  r.r1 = s.rho * d.u_x + d.rho_x * s.u + d.rho_t;
  r.r2 = d.u_t + s.u * d.u_x + p.A * d.rho_x / s.rho - p.D * d.u_xx / s.rho;
  return r;
}

Residual pde_residual(const ModelParams& p, const SolutionSampler& s, double x, double t,
                      DerivativeMethod method) {
  const StatePoint state = s.at(x, t);
  Partials d;
  const bool analytic = method.kind == DerivativeMethod::Kind::Analytic ||
                        (method.kind == DerivativeMethod::Kind::Auto && s.has_partials());
  if (analytic) {
    if (!s.has_partials()) {
      throw std::invalid_argument("sampler has no analytic partials");
    }
    d = s.partials(x, t);
    for (double v : {d.rho_x, d.u_x, d.rho_t, d.u_t, d.u_xx}) {
      if (!std::isfinite(v)) throw NumericalError("non-finite analytic derivative");
    }
  } else {
    const double h = method.step > 0.0 ? method.step : default_fd_step(x, t);
    d = finite_difference_partials(s, x, t, method.order, h);
  }
  return pde_residual(p, state, d);
}

}  // namespace trafficsym
