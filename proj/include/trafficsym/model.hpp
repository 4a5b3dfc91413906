#pragma once

// Governing system of the viscous macroscopic traffic model:
//
//   R1 = rho u_x + rho_x u + rho_t
//   R2 = u_t + u u_x + A rho_x / rho - D u_xx / rho
//
// with traffic pressure P = A rho - D u_x and relaxation switched off.

#include <array>
#include <functional>

namespace trafficsym {

struct ModelParams {
  double A = 1.0;  ///< speed variance
  double D = 0.0;  ///< viscosity; 0 selects the inviscid model
  double relaxation_R = 0.0;
  double relaxation_tau = 0.0;

  /// Throws std::invalid_argument unless A >= 0, D >= 0 and R == 0.
  /// A = 0 is accepted for pressureless solutions; operations that need
  /// distinct characteristics reject it separately.
  void validate() const;
};

struct StatePoint {
  double rho = 0.0;
  double u = 0.0;
};

enum class PartialsSource { Analytic, FiniteDifference };

struct Partials {
  double rho_t = 0.0;
  double rho_x = 0.0;
  double u_t = 0.0;
  double u_x = 0.0;
  double u_xx = 0.0;
  PartialsSource source = PartialsSource::Analytic;
  int fd_order = 0;      ///< 2 or 4 when source is FiniteDifference
  double fd_step = 0.0;  ///< h > 0 when source is FiniteDifference
};

/// A field (x,t) -> (rho,u), optionally with closed-form first partials and
/// u_xx. Wherever `domain` holds, `eval` returns finite values with rho > 0.
struct SolutionSampler {
  std::function<StatePoint(double x, double t)> eval;
  std::function<Partials(double x, double t)> partials;
  std::function<bool(double x, double t)> domain;

  bool has_partials() const { return static_cast<bool>(partials); }
  bool contains(double x, double t) const { return !domain || domain(x, t); }
  /// Evaluates after checking the domain; throws DomainError outside it.
  StatePoint at(double x, double t) const;
};

struct Residual {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// How pde_residual obtains derivatives.
struct DerivativeMethod {
  enum class Kind { Auto, Analytic, FiniteDifference };
  Kind kind = Kind::Auto;
  int order = 4;
  double step = 0.0;  ///< 0 selects h = 1e-3 * max(1, |x|, |t|)

  static DerivativeMethod automatic() { return {}; }
  static DerivativeMethod analytic() { return {Kind::Analytic, 0, 0.0}; }
  static DerivativeMethod finite_difference(int order, double step = 0.0) {
    return {Kind::FiniteDifference, order, step};
  }
};

double pressure(const ModelParams& p, const StatePoint& s, double u_x);

/// lambda1 = u - sqrt(A), lambda2 = u + sqrt(A).
std::array<double, 2> characteristic_speeds(const ModelParams& p, const StatePoint& s);

struct Eigenvectors {
  std::array<double, 2> l1, r1, l2, r2;
};

/// Left/right eigenvectors of B = [[u, rho], [A/rho, u]].
Eigenvectors characteristic_eigenvectors(const ModelParams& p, const StatePoint& s);

/// The flux Jacobian B of the quasilinear form H_t + B H_x = 0.
std::array<std::array<double, 2>, 2> characteristic_matrix(const ModelParams& p,
                                                           const StatePoint& s);

double default_fd_step(double x, double t);

/// Central finite-difference partials of order 2 or 4. Every stencil point
/// must lie in the sampler's domain.
Partials finite_difference_partials(const SolutionSampler& s, double x, double t,
                                    int order, double h);

/// Residual from explicit state and partials.
Residual pde_residual(const ModelParams& p, const StatePoint& s, const Partials& d);

/// Residual of the sampler at (x,t). Raw signed values.
Residual pde_residual(const ModelParams& p, const SolutionSampler& s, double x, double t,
                      DerivativeMethod d = DerivativeMethod::automatic());

}  // namespace trafficsym
