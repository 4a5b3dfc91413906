#pragma once

// Weak-discontinuity (C1-wave) amplitude along the fast characteristic
// dx/dt = u + sqrt(A). The amplitude obeys the Bernoulli equation
//   dpi/dt = -pi^2 - Psi(t) pi,   Psi = (sqrt(A) rho_x / rho + 5 u_x) / 2,
// whose solution is pi = pi0 E / (1 + pi0 F), E = exp(-int Psi), F = int E.

#include <optional>
#include <string>
#include <vector>

#include "trafficsym/model.hpp"

namespace trafficsym {

struct AmplitudeProblem {
  SolutionSampler background;
  double A = 1.0;
  double x0 = 0.0;
  double t0 = 1.0;
  double pi0 = 0.0;
  /// Set when Psi = 5 / (2 (t + shift)) exactly (T1 background with b = shift);
  /// enables the closed-form critical amplitude.
  std::optional<double> t1_shift;

  void validate() const;
};

struct CharacteristicPath {
  std::vector<double> t, x;
};

/// Fixed-step RK4 of dx/dt = u(x,t) + sqrt(A) from (x0, t0); the last step is
/// clipped to land on t_end. Throws DomainError if the path leaves the domain.
CharacteristicPath characteristic_path(const AmplitudeProblem& prob, double t_end, double dt);

/// Psi at a point of the background, from analytic partials when available.
double psi_along(const AmplitudeProblem& prob, double x, double t);

struct AmplitudeSolution {
  std::vector<double> times, x, psi, E, F, pi;
  double pi_c = 0.0;
  /// +infinity when 1 + pi0 F stays positive on [t0, t_end].
  double shock_time = 0.0;
  bool pi_c_closed_form = false;
};

/// Composite Simpson on n panels. The trace stops at the last node before a
/// shock; the shock time itself is located by bisection.
AmplitudeSolution amplitude_quadrature(const AmplitudeProblem& prob, double t_end, int n);

struct DirectTrace {
  std::vector<double> times, x, pi;
  bool blew_up = false;
  double bracket_lo = 0.0;  ///< blow-up lies in [bracket_lo, bracket_hi]
  double bracket_hi = 0.0;
};

/// RK4 of the coupled (x, pi) system; output on t0 + k dt, internal steps
/// shortened to 0.05 / |pi| as the amplitude grows. Stops once |pi| > 1e12.
DirectTrace amplitude_direct(const AmplitudeProblem& prob, double t_end, double dt);

enum class Regime { ExpansiveDecay, SubcriticalDecay, SupercriticalShock };

std::string regime_name(Regime r);

/// Regime predicted by pi0 against the critical amplitude (|pi0| = pi_c
/// counts as subcritical: F reaches 1 / pi_c only as t -> infinity).
Regime predicted_regime(double pi0, double pi_c);

}  // namespace trafficsym
