#include "trafficsym/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trafficsym/error.hpp"
#include "trafficsym/io.hpp"

namespace trafficsym {

namespace {

constexpr int kGhost = 2;
constexpr double kMinDt = 1e-12;

struct Conserved {
  double rho, m;
};

struct Flux {
  double f_rho, f_m;
};

Flux physical_flux(const Conserved& U, double A) {
  const double u = U.m / U.rho;
  return {U.m, U.m * u + A * U.rho};
}

double signal_speed(double u, double A) { return std::abs(u) + std::sqrt(A); }

// Conserved states with kGhost ghost cells on each side.
std::vector<Conserved> with_ghosts(const Field& f, const Boundary& bc) {
  const int n = f.grid.nx;
  std::vector<Conserved> U(static_cast<std::size_t>(n + 2 * kGhost));
  for (int i = 0; i < n; ++i) {
    U[static_cast<std::size_t>(i + kGhost)] = {f.rho[static_cast<std::size_t>(i)],
                                               f.rho[static_cast<std::size_t>(i)] *
                                                   f.u[static_cast<std::size_t>(i)]};
  }
  for (int k = 1; k <= kGhost; ++k) {
    const std::size_t left = static_cast<std::size_t>(kGhost - k);
    const std::size_t right = static_cast<std::size_t>(kGhost + n - 1 + k);
    switch (bc.kind) {
      case BoundaryKind::Periodic:
        U[left] = U[static_cast<std::size_t>(kGhost + n - k)];
        U[right] = U[static_cast<std::size_t>(kGhost + k - 1)];
        break;
      case BoundaryKind::Outflow:
        U[left] = U[static_cast<std::size_t>(kGhost)];
        U[right] = U[static_cast<std::size_t>(kGhost + n - 1)];
        break;
      case BoundaryKind::Dirichlet: {
        const StatePoint l = bc.sampler.at(f.grid.center(-k), f.t);
        const StatePoint r = bc.sampler.at(f.grid.center(n - 1 + k), f.t);
        U[left] = {l.rho, l.rho * l.u};
        U[right] = {r.rho, r.rho * r.u};
        break;
      }
    }
  }
  return U;
}

double max_signal_speed(const Field& f, double A) {
  double s = 0.0;
  for (double u : f.u) s = std::max(s, signal_speed(u, A));
  return s;
}

void check_field(const Field& f) {
  f.grid.validate();
  const std::size_t n = static_cast<std::size_t>(f.grid.nx);
  if (f.rho.size() != n || f.u.size() != n) {
    throw std::invalid_argument("field arrays do not match the grid");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(f.rho[i]) || !std::isfinite(f.u[i])) {
      throw NumericalError("non-finite field value in cell " + std::to_string(i));
    }
    if (!(f.rho[i] > 0.0)) {
      throw PositivityError(static_cast<int>(i), f.t, "non-positive density in initial field");
    }
  }
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Grid Grid::span(double x0, double x1, int nx) {
  if (!(x1 > x0)) throw std::invalid_argument("grid needs x1 > x0");
  Grid g{x0, (x1 - x0) / nx, nx};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (nx < 8) throw std::invalid_argument("grid needs at least 8 cells");
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0)) {
    throw std::invalid_argument("grid spacing must be finite and > 0");
  }
}

std::vector<double> Field::momentum() const {
  std::vector<double> m(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) m[i] = rho[i] * u[i];
  return m;
}

double Field::total_mass() const {
  double s = 0.0;
  for (double r : rho) s += r;
  return s * grid.dx;
}

double Field::total_momentum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) s += rho[i] * u[i];
  return s * grid.dx;
}

Field sample_field(const Grid& g, const SolutionSampler& s, double t) {
  g.validate();
  Field f;
  f.grid = g;
  f.t = t;
  f.rho.resize(static_cast<std::size_t>(g.nx));
  f.u.resize(static_cast<std::size_t>(g.nx));
  for (int i = 0; i < g.nx; ++i) {
    const StatePoint v = s.at(g.center(i), t);
    f.rho[static_cast<std::size_t>(i)] = v.rho;
    f.u[static_cast<std::size_t>(i)] = v.u;
  }
  return f;
}

std::string scheme_name(Scheme s) {
  return s == Scheme::Rusanov ? "rusanov" : "lax-friedrichs";
}

void SolverConfig::validate() const {
  params.validate();
  if (!(cfl > 0.0 && cfl <= 0.9)) throw std::invalid_argument("cfl must lie in (0, 0.9]");
  if (bc.kind == BoundaryKind::Dirichlet && !bc.sampler.eval) {
    throw std::invalid_argument("Dirichlet boundary needs a sampler");
  }
}

double stable_dt(const Field& f, const SolverConfig& cfg) {
  const double speed = max_signal_speed(f, cfg.params.A);
  double dt = speed > 0.0 ? cfg.cfl * f.grid.dx / speed
                          : std::numeric_limits<double>::infinity();
  if (cfg.params.D > 0.0) {
    const double min_rho = *std::min_element(f.rho.begin(), f.rho.end());
    dt = std::min(dt, f.grid.dx * f.grid.dx * min_rho / (2.0 * cfg.params.D));
  }
  return dt;
}

Field step(const Field& f, const SolverConfig& cfg, double dt_max, StepDiagnostics* diag) {
  cfg.validate();
  check_field(f);
  const double A = cfg.params.A, D = cfg.params.D;
  const int n = f.grid.nx;
  const double dx = f.grid.dx;

  const double dt = std::min(stable_dt(f, cfg), dt_max);
  if (!(dt >= kMinDt)) {
    throw NumericalError("time step underflow (dt = " + io::format_double(dt) + ")");
  }

  const std::vector<Conserved> U = with_ghosts(f, cfg.bc);
  double alpha_global = 0.0;
  if (cfg.scheme == Scheme::LaxFriedrichs) {
    for (const Conserved& c : U) alpha_global = std::max(alpha_global, signal_speed(c.m / c.rho, A));
  }

  // Interface j sits between extended cells j and j+1; interior faces run
  // from kGhost-1 to kGhost+n-1.
  std::vector<Flux> F(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const Conserved& L = U[static_cast<std::size_t>(kGhost - 1 + k)];
    const Conserved& R = U[static_cast<std::size_t>(kGhost + k)];
    const Flux fl = physical_flux(L, A), fr = physical_flux(R, A);
    const double uL = L.m / L.rho, uR = R.m / R.rho;
    const double alpha = cfg.scheme == Scheme::Rusanov
                             ? std::max(signal_speed(uL, A), signal_speed(uR, A))
                             : alpha_global;
    Flux flux{0.5 * (fl.f_rho + fr.f_rho) - 0.5 * alpha * (R.rho - L.rho),
              0.5 * (fl.f_m + fr.f_m) - 0.5 * alpha * (R.m - L.m)};
    if (D > 0.0) flux.f_m -= D * (uR - uL) / dx;
    F[static_cast<std::size_t>(k)] = flux;
  }

  Field out;
  out.grid = f.grid;
  out.t = f.t + dt;
  out.rho.resize(static_cast<std::size_t>(n));
  out.u.resize(static_cast<std::size_t>(n));
  const double lam = dt / dx;
  for (int i = 0; i < n; ++i) {
    const Conserved& c = U[static_cast<std::size_t>(kGhost + i)];
    const Flux& fm = F[static_cast<std::size_t>(i)];
    const Flux& fp = F[static_cast<std::size_t>(i + 1)];
    const double rho = c.rho - lam * (fp.f_rho - fm.f_rho);
    const double m = c.m - lam * (fp.f_m - fm.f_m);
    if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(m)) {
      throw PositivityError(i, out.t,
                            "density lost positivity in cell " + std::to_string(i) + " at t=" +
                                io::format_double(out.t));
    }
    out.rho[static_cast<std::size_t>(i)] = rho;
    out.u[static_cast<std::size_t>(i)] = m / rho;
  }

  if (diag) {
    diag->t = out.t;
    diag->dt = dt;
    diag->mass = out.total_mass();
    diag->momentum = out.total_momentum();
    diag->max_speed = max_signal_speed(f, A);
  }
  return out;
}

Trajectory run(const SolverConfig& cfg, const Field& ic, double t_end,
               std::vector<double> snapshots) {
  cfg.validate();
  check_field(ic);
  if (!(t_end >= ic.t)) throw std::invalid_argument("t_end must be >= t0");
  Trajectory tr;
  if (t_end == ic.t) {
    tr.snapshots.push_back(ic);
    return tr;
  }
  if (snapshots.empty()) snapshots.push_back(t_end);
  std::sort(snapshots.begin(), snapshots.end());
  for (double s : snapshots) {
    if (s < ic.t || s > t_end) throw std::invalid_argument("snapshot time outside [t0, t_end]");
  }

  Field cur = ic;
  long nstep = 0;
  std::size_t next = 0;
  while (next < snapshots.size() && snapshots[next] == cur.t) {
    tr.snapshots.push_back(cur);
    ++next;
  }
  while (next < snapshots.size()) {
    const double target = snapshots[next];
    StepDiagnostics d;
    cur = step(cur, cfg, target - cur.t, &d);
    // Land exactly on the target despite rounding in t + dt.
    if (target - cur.t <= 1e-13 * std::max(1.0, std::abs(target))) cur.t = target;
    d.t = cur.t;
    d.step = ++nstep;
    tr.diagnostics.push_back(d);
    while (next < snapshots.size() && snapshots[next] <= cur.t) {
      tr.snapshots.push_back(cur);
      ++next;
    }
  }
  return tr;
}

ErrorNorms error_norms(const Field& f, const SolutionSampler& s) {
  ErrorNorms e;
  for (int i = 0; i < f.grid.nx; ++i) {
    const StatePoint v = s.at(f.grid.center(i), f.t);
    const double dr = std::abs(f.rho[static_cast<std::size_t>(i)] - v.rho);
    const double du = std::abs(f.u[static_cast<std::size_t>(i)] - v.u);
    e.l1_rho += dr;
    e.l1_u += du;
    e.linf_rho = std::max(e.linf_rho, dr);
    e.linf_u = std::max(e.linf_u, du);
  }
  e.l1_rho *= f.grid.dx;
  e.l1_u *= f.grid.dx;
  return e;
}

ConvergenceResult convergence_order(SolverConfig cfg, const SolutionSampler& s,
                                    const std::vector<int>& grids,
                                    const ManufacturedSetup& setup) {
  if (grids.size() < 3) throw std::invalid_argument("convergence study needs >= 3 grids");
  for (std::size_t i = 1; i < grids.size(); ++i) {
    if (grids[i] != 2 * grids[i - 1]) {
      throw std::invalid_argument("each grid must double the previous one");
    }
  }
  if (cfg.bc.kind != BoundaryKind::Periodic) cfg.bc = Boundary::dirichlet(s);

  ConvergenceResult res;
  std::vector<double> ldx, lr, lu;
  for (int nx : grids) {
    const Grid g = Grid::span(setup.x0, setup.x1, nx);
    const Trajectory tr = run(cfg, sample_field(g, s, setup.t0), setup.t1);
    const ErrorNorms e = error_norms(tr.snapshots.back(), s);
    res.nx.push_back(nx);
    res.errors.push_back(e);
    ldx.push_back(std::log(g.dx));
    lr.push_back(std::log(e.l1_rho));
    lu.push_back(std::log(e.l1_u));
  }
  res.exact = std::all_of(res.errors.begin(), res.errors.end(), [](const ErrorNorms& e) {
    return e.l1_rho <= 1e-12 && e.l1_u <= 1e-12;
  });
  for (std::size_t i = 1; i < res.errors.size(); ++i) {
    if (!(res.errors[i].l1_rho < res.errors[i - 1].l1_rho) ||
        !(res.errors[i].l1_u < res.errors[i - 1].l1_u)) {
      res.monotone = false;
    }
  }
  if (res.exact) {
    res.order_rho = res.order_u = std::numeric_limits<double>::quiet_NaN();
  } else {
    res.order_rho = lsq_slope(ldx, lr);
    res.order_u = lsq_slope(ldx, lu);
  }
  return res;
}

}  // namespace trafficsym
