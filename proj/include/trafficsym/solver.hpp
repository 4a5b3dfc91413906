#pragma once

// First-order finite-volume integrator for the conservative form
//   rho_t + m_x = 0,   m_t + (m^2/rho + A rho)_x = D u_xx,   m = rho u,
// with forward-Euler time stepping.

#include <limits>
#include <string>
#include <vector>

#include "trafficsym/model.hpp"

namespace trafficsym {

struct Grid {
  double x0 = 0.0;
  double dx = 1.0;
  int nx = 8;

  /// nx uniform cells covering [x0, x1].
  static Grid span(double x0, double x1, int nx);
  double center(int i) const { return x0 + (i + 0.5) * dx; }
  double length() const { return nx * dx; }
  void validate() const;
};

struct Field {
  Grid grid;
  double t = 0.0;
  std::vector<double> rho, u;

  std::vector<double> momentum() const;
  double total_mass() const;
  double total_momentum() const;
};

/// Cell-centre point samples of s at time t.
Field sample_field(const Grid& g, const SolutionSampler& s, double t);

enum class Scheme { LaxFriedrichs, Rusanov };

std::string scheme_name(Scheme s);

enum class BoundaryKind { Periodic, Dirichlet, Outflow };

struct Boundary {
  BoundaryKind kind = BoundaryKind::Periodic;
  SolutionSampler sampler;  ///< Dirichlet only: evaluated at ghost-cell centres

  static Boundary periodic() { return {}; }
  static Boundary outflow() { return {BoundaryKind::Outflow, {}}; }
  static Boundary dirichlet(SolutionSampler s) { return {BoundaryKind::Dirichlet, std::move(s)}; }
};

struct SolverConfig {
  Scheme scheme = Scheme::Rusanov;
  double cfl = 0.45;
  Boundary bc;
  ModelParams params;

  /// Throws std::invalid_argument unless 0 < cfl <= 0.9 and the params are valid.
  void validate() const;
};

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;  ///< time after the step
  double dt = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double max_speed = 0.0;  ///< max(|u| + sqrt(A)) over the cells before the step
};

/// Largest stable step for the field: cfl dx / max(|u| + sqrt(A)), further
/// limited by dx^2 min(rho) / (2 D) when D > 0.
double stable_dt(const Field& f, const SolverConfig& cfg);

/// One conservative update with dt = min(stable_dt, dt_max). Throws
/// PositivityError when a density becomes non-positive and NumericalError
/// when dt underflows 1e-12.
Field step(const Field& f, const SolverConfig& cfg,
           double dt_max = std::numeric_limits<double>::infinity(),
           StepDiagnostics* diag = nullptr);

struct Trajectory {
  std::vector<Field> snapshots;
  std::vector<StepDiagnostics> diagnostics;
};

/// Steps from ic.t to t_end, landing exactly on each snapshot time. An empty
/// snapshot list records t_end only; t_end == ic.t returns the initial field.
Trajectory run(const SolverConfig& cfg, const Field& ic, double t_end,
               std::vector<double> snapshots = {});

struct ErrorNorms {
  double l1_rho = 0.0, linf_rho = 0.0;
  double l1_u = 0.0, linf_u = 0.0;
};

/// Cell values against point values of s at f.t; L1 is sum |diff| dx.
ErrorNorms error_norms(const Field& f, const SolutionSampler& s);

struct ManufacturedSetup {
  double x0 = -5.0, x1 = 5.0;
  double t0 = 1.0, t1 = 2.0;
};

struct ConvergenceResult {
  std::vector<int> nx;
  std::vector<ErrorNorms> errors;
  double order_rho = 0.0;  ///< least-squares slope of log L1 error vs log dx
  double order_u = 0.0;
  bool exact = false;     ///< all errors at round-off; orders are NaN
  bool monotone = true;   ///< L1 errors strictly decrease with refinement
};

/// Runs the manufactured solution s from setup.t0 to setup.t1 on each grid
/// with Dirichlet data from s (unless cfg.bc is periodic) and fits the order.
/// grids needs at least three entries, each double the previous.
ConvergenceResult convergence_order(SolverConfig cfg, const SolutionSampler& s,
                                    const std::vector<int>& grids,
                                    const ManufacturedSetup& setup = {});

}  // namespace trafficsym
