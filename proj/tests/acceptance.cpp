// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "support/gen.hpp"
#include "trafficsym/catalog.hpp"
#include "trafficsym/conservation.hpp"
#include "trafficsym/io.hpp"
#include "trafficsym/lie.hpp"
#include "trafficsym/solver.hpp"
#include "trafficsym/wavefront.hpp"

using namespace trafficsym;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return io::format_double(v); }

Outcome lie_tables() {
  const auto t0 = Clock::now();
  using lie::LieCoeffs;
  auto e = [](int i) { return LieCoeffs::basis(i); };
  const LieCoeffs z{};
  const LieCoeffs table[4][4] = {{z, e(2) * -1.0, z, e(4) * -1.0},
                                 {e(2), z, e(4), z},
                                 {z, e(4) * -1.0, z, z},
                                 {e(4), z, z, z}};
  int comm_ok = 0, adj_ok = 0, jac_ok = 0;
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      if (lie::commutator(e(i), e(j)) == table[i - 1][j - 1]) ++comm_ok;
      // First order everywhere; exact wherever ad(S_i)^2 S_j = 0.
      const bool terminates =
          (lie::commutator(e(i), lie::commutator(e(i), e(j)))).is_zero();
      bool ok = true;
      for (double eps : {1e-3, 0.5, -1.2}) {
        const Eigen::Matrix4d K = lie::adjoint_exp_matrix(i, eps);
        const LieCoeffs row{{K(j - 1, 0), K(j - 1, 1), K(j - 1, 2), K(j - 1, 3)}};
        const LieCoeffs first = e(j) - lie::commutator(e(i), e(j)) * eps;
        if (terminates) {
          ok = ok && (row - first).max_abs() <= 1e-15;
        } else {
          ok = ok && (row - first).max_abs() <= eps * eps;
          ok = ok && (row - lie::adjoint_series(i, j, eps, 40)).max_abs() <= 1e-13;
        }
      }
      if (ok) ++adj_ok;
      for (int k = 1; k <= 4; ++k) {
        const LieCoeffs jac = lie::commutator(e(i), lie::commutator(e(j), e(k))) +
                              lie::commutator(e(j), lie::commutator(e(k), e(i))) +
                              lie::commutator(e(k), lie::commutator(e(i), e(j)));
        if (jac.is_zero()) ++jac_ok;
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = comm_ok == 16 && adj_ok == 16 && jac_ok == 64 && secs < 1.0;
  return {pass, "commutators " + std::to_string(comm_ok) + "/16, adjoint rows " +
                    std::to_string(adj_ok) + "/16, Jacobi " + std::to_string(jac_ok) +
                    "/64, " + fmt(secs) + " s"};
}

Outcome killing() {
  testing::Gen g(2024);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const lie::LieCoeffs w = g.lie_element();
    worst = std::max(worst, std::abs(lie::killing_form(w, w) - 2 * w[0] * w[0]));
  }
  return {worst <= 1e-12, "max |K(w,w) - 2 w1^2| = " + fmt(worst) + " over 100 vectors"};
}

Outcome invariants() {
  using lie::LieCoeffs;
  const std::pair<LieCoeffs, lie::InvariantTuple> rows[] = {
      {LieCoeffs{{0, 0, 1, 1}}, {0, 0, 1, 1, 0, 0}},
      {LieCoeffs{{1, 0, 0, 1}}, {2, 1, 0, 1, 0, 0}},
      {LieCoeffs{{1, 0, 1, 1}}, {2, 1, 1, 1, 0, 0}},
      {LieCoeffs{{0, 1, 0, 1}}, {0, 0, 0, 1, 1, 0}},
  };
  int ok = 0;
  for (const auto& [w, expect] : rows) ok += lie::invariant_tuple(w) == expect;
  return {ok == 4, std::to_string(ok) + "/4 rows match"};
}

Outcome catalog(std::map<std::string, double>& floors) {
  std::ostringstream d;
  bool pass = true;
  for (const CatalogEntry& e : default_catalog()) {
    const std::string name = entry_name(e);
    const VerifyReport r = verify_entry(e, default_region(e), 1e-10);
    if (name == "CONTROL") {
      pass = pass && r.status == Status::Refuted;
    } else if (name == "KINK") {
      pass = pass && r.status != Status::Verified && r.note.find("floor") != std::string::npos;
      d << " KINK[" << kink_shape_name(std::get<KinkParams>(e.kind).shape)
        << "]=" << status_name(r.status) << " floor " << fmt(r.max_r1) << ";";
    } else {
      const bool ok = r.status == Status::Verified && r.analytic && r.max_residual() <= 1e-10 &&
                      r.points == 101u * 101u;
      pass = pass && ok;
      floors[entry_id(e)] = r.max_residual();
      d << " " << name << (ok ? " ok" : " FAILED") << ";";
    }
  }
  return {pass, d.str()};
}

Outcome group_actions(const std::map<std::string, double>& floors) {
  int total = 0, ok = 0;
  double worst_ratio = 0.0;
  for (const CatalogEntry& e : default_catalog()) {
    const auto it = floors.find(entry_id(e));
    if (it == floors.end()) continue;
    // T4 and exact polynomial cases have a zero floor; round-off sets the scale then.
    const double floor = std::max(it->second, 1e-13);
    GridSpec g = default_region(e);
    g.nx = g.nt = 41;
    for (int i = 1; i <= 4; ++i) {
      for (double eps : {-0.3, 0.3}) {
        const SolutionSampler moved = lie::group_transform(i, eps, make_sampler(e));
        std::vector<std::pair<double, double>> pts;
        for (const auto& [x, t] : g.points()) {
          const auto m = lie::group_map_point(i, eps, x, t);
          pts.emplace_back(m[0], m[1]);
        }
        const VerifyReport r = verify_sampler(moved, e.model, pts, 10 * floor, VerifyMode::AnalyticOnly);
        ++total;
        worst_ratio = std::max(worst_ratio, r.max_residual() / floor);
        if (r.status == Status::Verified && r.max_residual() <= 10 * floor) ++ok;
      }
    }
  }
  return {ok == total && total > 0, std::to_string(ok) + "/" + std::to_string(total) +
                                        " transformed samplers re-verify; worst residual/floor " +
                                        fmt(worst_ratio)};
}

Outcome solver() {
  const auto t0 = Clock::now();
  SolverConfig cfg;
  const CatalogEntry t1 = make_entry(T1Params{1, 2, 1});
  cfg.params = t1.model;
  cfg.bc = Boundary::dirichlet(make_sampler(t1));
  const ConvergenceResult r1 = convergence_order(cfg, make_sampler(t1), {50, 100, 200, 400});
  const CatalogEntry t3 = make_entry(T3Params{2, 1});
  cfg.params = t3.model;
  cfg.bc = Boundary::dirichlet(make_sampler(t3));
  ManufacturedSetup s3;
  s3.x0 = -2.0;
  const ConvergenceResult r3 = convergence_order(cfg, make_sampler(t3), {50, 100, 200, 400}, s3);
  auto in_band = [](double v) { return v >= 0.8 && v <= 1.3; };
  bool orders = in_band(r1.order_rho) && in_band(r1.order_u) && in_band(r3.order_rho) &&
                in_band(r3.order_u);

  SolverConfig per;
  per.params = {1.0, 0.0};
  Field f;
  f.grid = Grid::span(0, 1, 100);
  for (int i = 0; i < 100; ++i) {
    const double x = f.grid.center(i);
    f.rho.push_back(1.0 + 0.2 * std::sin(2 * M_PI * x));
    f.u.push_back(0.5 + 0.2 * std::cos(2 * M_PI * x));
  }
  double dm = 0.0, dq = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double m = f.total_mass(), q = f.total_momentum();
    f = step(f, per);
    dm = std::max(dm, std::abs(f.total_mass() - m));
    dq = std::max(dq, std::abs(f.total_momentum() - q));
  }
  const double secs = seconds_since(t0);
  const bool pass = orders && dm <= 1e-12 && dq <= 1e-12 && secs < 30.0;
  return {pass, "T1 orders " + fmt(r1.order_rho) + "/" + fmt(r1.order_u) + ", T3 orders " +
                    fmt(r3.order_rho) + "/" + fmt(r3.order_u) + "; per-step drift mass " + fmt(dm) +
                    ", momentum " + fmt(dq) + "; " + fmt(secs) + " s"};
}

Outcome conservation() {
  const CatalogEntry e = make_entry(T1Params{1, 2, 1});
  const SolutionSampler s = make_sampler(e);
  std::vector<std::pair<double, double>> pts;
  for (double x : {-2.0, -0.5, 0.5, 2.0}) {
    for (double t : {0.5, 1.5, 2.5}) pts.emplace_back(x, t);
  }
  const MultiplierConstants cs[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  double min_order = INFINITY;
  int ok = 0, total = 0;
  for (ConservedKind k : {ConservedKind::S2, ConservedKind::S4}) {
    for (const MultiplierConstants& c : cs) {
      const ConvergenceStudy st = divergence_study(k, c, e.model, s, pts, 0.1);
      ++total;
      if (st.exact) {
        ++ok;
      } else if (st.order >= 1.9) {
        ++ok;
        min_order = std::min(min_order, st.order);
      } else {
        min_order = std::min(min_order, st.order);
      }
    }
  }
  const CatalogEntry ctl = make_entry(ControlParams{});
  const ConvergenceStudy neg = divergence_study(ConservedKind::S4, {0, 1, 0}, ctl.model,
                                                make_sampler(ctl), {{0.0, 0.5}, {1.0, 0.5}}, 0.1);
  const bool floor = !neg.exact && neg.values.back() > 1e-3;
  return {ok == total && floor, std::to_string(ok) + "/" + std::to_string(total) +
                                    " rows converge (min order " + fmt(min_order) +
                                    "); control floor " + fmt(neg.values.back())};
}

Outcome wavefront() {
  auto problem = [](double pi0) {
    AmplitudeProblem p;
    p.background = make_sampler(make_entry(T1Params{0, 1, 1}));
    p.x0 = 1.0;
    p.t0 = 1.0;
    p.pi0 = pi0;
    p.t1_shift = 1.0;
    return p;
  };
  const AmplitudeSolution base = amplitude_quadrature(problem(0.5), 20.0, 2000);
  AmplitudeProblem numeric = problem(0.5);
  numeric.t1_shift.reset();
  const double pi_c_num = amplitude_quadrature(numeric, 200.0, 20000).pi_c;
  const bool pi_c_ok = std::abs(base.pi_c - 0.75) <= 1e-6 && std::abs(pi_c_num - 0.75) <= 1e-6;

  const double expect = std::pow(2.0, 5.0 / 3.0) - 1.0;
  const double shock = amplitude_quadrature(problem(-1.5), 20.0, 2000).shock_time;
  const DirectTrace dshock = amplitude_direct(problem(-1.5), 20.0, 0.01);
  const bool shock_ok = std::abs(shock - expect) <= 1e-4 && dshock.blew_up &&
                        dshock.bracket_lo <= expect + 1e-4 && dshock.bracket_hi >= expect - 1e-4;

  double gap = 0.0;
  bool regimes = true;
  for (double pi0 : {0.25, 0.5, 1.0, 2.0, -0.25, -0.5, -0.7}) {
    const AmplitudeSolution q = amplitude_quadrature(problem(pi0), 20.0, 2000);
    const DirectTrace d = amplitude_direct(problem(pi0), 20.0, 19.0 / 2000);
    if (d.blew_up || d.pi.size() != q.pi.size()) return {false, "direct run blew up"};
    for (std::size_t k = 0; k < q.pi.size(); ++k) gap = std::max(gap, std::abs(q.pi[k] - d.pi[k]));
    const Regime r = predicted_regime(pi0, q.pi_c);
    // Decay regimes: no shock and the amplitude shrinks toward zero.
    regimes = regimes && r != Regime::SupercriticalShock && std::isinf(q.shock_time) &&
              std::abs(q.pi.back()) < std::abs(pi0) &&
              (pi0 > 0 ? r == Regime::ExpansiveDecay : r == Regime::SubcriticalDecay);
  }
  for (double pi0 : {-1.0, -1.5}) {
    const AmplitudeSolution q = amplitude_quadrature(problem(pi0), 20.0, 2000);
    regimes = regimes && predicted_regime(pi0, q.pi_c) == Regime::SupercriticalShock &&
              std::isfinite(q.shock_time) && amplitude_direct(problem(pi0), 20.0, 0.01).blew_up;
  }
  const bool pass = pi_c_ok && shock_ok && gap <= 1e-6 && regimes;
  return {pass, "pi_c " + fmt(base.pi_c) + " (numeric " + fmt(pi_c_num) + "), shock " + fmt(shock) +
                    " vs " + fmt(expect) + ", quadrature-direct gap " + fmt(gap) +
                    ", regimes " + (regimes ? "ok" : "wrong")};
}

int call(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run_cli(args, o, e);
  if (out) *out = o.str();
  return code;
}

Outcome figures(const fs::path& dir) {
  if (call({"figures", "--out", dir.string()}) != 0) return {false, "figures command failed"};
  int present = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().filename().string().rfind("fig", 0) == 0) ++present;
  }
  // Figure 1 surface: rho strictly decreasing in t, u strictly increasing in x.
  std::map<std::pair<double, double>, std::pair<double, double>> surf;
  std::istringstream in(io::read_file((dir / "fig01_T1.csv").string()));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    double v[4];
    std::istringstream row(line);
    std::string cell;
    for (double& x : v) {
      std::getline(row, cell, ',');
      x = io::parse_double(cell);
    }
    surf[{v[0], v[1]}] = {v[2], v[3]};
  }
  bool rho_dec = true, u_inc = true;
  std::map<double, std::vector<std::pair<double, double>>> by_x, by_t;
  for (const auto& [xt, val] : surf) {
    by_x[xt.first].emplace_back(xt.second, val.first);
    by_t[xt.second].emplace_back(xt.first, val.second);
  }
  for (auto& [x, col] : by_x) {
    std::sort(col.begin(), col.end());
    for (std::size_t k = 1; k < col.size(); ++k) rho_dec = rho_dec && col[k].second < col[k - 1].second;
  }
  for (auto& [t, row] : by_t) {
    std::sort(row.begin(), row.end());
    for (std::size_t k = 1; k < row.size(); ++k) u_inc = u_inc && row[k].second > row[k - 1].second;
  }
  const bool pass = present == 10 && surf.size() == 101u * 101u && rho_dec && u_inc;
  return {pass, std::to_string(present) + "/10 figure files; T1 rho decreasing in t: " +
                    (rho_dec ? "yes" : "no") + ", u increasing in x: " + (u_inc ? "yes" : "no")};
}

Outcome determinism(const fs::path& dir) {
  const std::vector<std::vector<std::string>> runs = {
      {"verify", "T3?p1=2&b=1", "--out", (dir / "verify").string()},
      {"simulate", "--ic", "T1?p1=1&p2=2&b=1", "--nx", "100", "--t0", "1", "--t-end", "1.5",
       "--snap", "1.25", "--out", (dir / "simulate").string()},
      {"wavefront", "--background", "T1?p1=0&p2=1&b=1", "--x0", "1", "--pi0", "-1.5", "--out",
       (dir / "wavefront").string()},
      {"conserve", "--entry", "T1?p1=1&p2=2&b=1", "--which", "S2", "--out",
       (dir / "conserve").string()},
      {"figures", "--out", (dir / "figures").string()},
  };
  int ok = 0;
  for (const auto& args : runs) {
    call(args);
    const fs::path m = fs::path(args.back()) / "manifest.json";
    if (fs::exists(m) && call({"replay", m.string()}) == 0) ++ok;
  }
  return {ok == static_cast<int>(runs.size()),
          std::to_string(ok) + "/" + std::to_string(runs.size()) + " manifests replay identically"};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "trafficsym-acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  std::map<std::string, double> floors;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Lie tables", lie_tables},
      {"Killing form", killing},
      {"Invariant functions", invariants},
      {"Catalog verification", [&] { return catalog(floors); }},
      {"Group actions", [&] { return group_actions(floors); }},
      {"Solver", solver},
      {"Conservation", conservation},
      {"Wavefront", wavefront},
      {"Figure data", [&] { return figures(work / "figures"); }},
      {"Determinism", [&] { return determinism(work / "replay"); }},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str());
  }
  fs::remove_all(work);
  return failures == 0 ? 0 : 1;
}
