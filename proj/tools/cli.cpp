#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "trafficsym/catalog.hpp"
#include "trafficsym/conservation.hpp"
#include "trafficsym/entry_spec.hpp"
#include "trafficsym/error.hpp"
#include "trafficsym/io.hpp"
#include "trafficsym/lie.hpp"
#include "trafficsym/solver.hpp"
#include "trafficsym/wavefront.hpp"

namespace trafficsym::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

#ifdef TRAFFICSYM_VERSION
constexpr const char* kVersion = TRAFFICSYM_VERSION;
#else
constexpr const char* kVersion = "unknown";
#endif

// Integral doubles print as integers, non-finite ones as null.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  if (v == std::floor(v) && std::abs(v) < 1e15) return static_cast<long long>(v);
  return v;
}

json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json coeffs_json(const lie::LieCoeffs& c) { return num_array({c[0], c[1], c[2], c[3]}); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<double> parse_list(const std::string& s, std::size_t expected, const char* what) {
  std::vector<double> v;
  for (const std::string& item : split(s, ',')) v.push_back(io::parse_double(item));
  if (expected && v.size() != expected) {
    throw UsageError(std::string(what) + " needs " + std::to_string(expected) +
                     " comma-separated numbers, got '" + s + "'");
  }
  return v;
}

lie::LieCoeffs parse_coeffs(const std::string& s) {
  const std::vector<double> v = parse_list(s, 4, "Lie algebra element");
  return lie::LieCoeffs{{v[0], v[1], v[2], v[3]}};
}

// "a:b:n" (or "a:b" when n is not wanted).
struct Range {
  double lo, hi;
  int n;
};

Range parse_range(const std::string& s, bool need_n, const char* what) {
  const std::vector<std::string> parts = split(s, ':');
  if (parts.size() != (need_n ? 3u : 2u) && !(parts.size() == 3 && !need_n)) {
    throw UsageError(std::string(what) + " expects " + (need_n ? "lo:hi:n" : "lo:hi") +
                     ", got '" + s + "'");
  }
  Range r{io::parse_double(parts[0]), io::parse_double(parts[1]), 0};
  if (parts.size() == 3) {
    const double n = io::parse_double(parts[2]);
    if (n < 1 || n != std::floor(n)) throw UsageError(std::string(what) + ": n must be >= 1");
    r.n = static_cast<int>(n);
  }
  if (!(r.hi >= r.lo)) throw UsageError(std::string(what) + ": need lo <= hi");
  return r;
}

json grid_json(const GridSpec& g) {
  return {{"x0", num(g.x0)}, {"x1", num(g.x1)}, {"nx", g.nx},
          {"t0", num(g.t0)}, {"t1", num(g.t1)}, {"nt", g.nt}};
}

json report_json(const VerifyReport& r) {
  json fd = json::array();
  for (std::size_t k = 0; k < r.fd_rel_step.size(); ++k) {
    fd.push_back({{"rel_step", num(r.fd_rel_step[k])},
                  {"max_r1", num(r.fd_max_r1[k])},
                  {"max_r2", num(r.fd_max_r2[k])}});
  }
  return {{"status", status_name(r.status)},
          {"analytic_partials", r.analytic},
          {"max_r1", num(r.max_r1)},
          {"max_r2", num(r.max_r2)},
          {"points", r.points},
          {"skipped", r.skipped},
          {"fd_order", r.fd_order},
          {"fd_study", fd},
          {"ratios", num_array(r.ratios)},
          {"observed_order", num(r.observed_order)},
          {"note", r.note}};
}

int status_exit(Status s) {
  switch (s) {
    case Status::Verified: return kVerified;
    case Status::Refuted: return kRefuted;
    case Status::PaperClaimed: return kInconclusive;
  }
  return kInconclusive;
}

// Output bookkeeping shared by every subcommand.
struct Context {
  std::vector<std::string> argv;
  std::ostringstream stdout_buf;
  std::string out_dir;
  std::string manifest_path;
  std::string command;
  json params = json::object();
  std::map<std::string, std::string> outputs;  // name -> sha256

  void emit(const std::string& name, const std::string& bytes) {
    if (out_dir.empty()) {
      stdout_buf << bytes;
      return;
    }
    io::write_file((fs::path(out_dir) / name).string(), bytes);
    outputs[name] = io::sha256_hex(bytes);
  }

  void print_json(const json& j) { stdout_buf << j.dump() << '\n'; }
};

std::optional<double> opt_value(const CLI::Option* o, double v) {
  return (o && o->count() > 0) ? std::optional<double>(v) : std::nullopt;
}

GridSpec region_for(const CatalogEntry& e, const std::string& xs, const std::string& ts) {
  GridSpec g = default_region(e);
  if (!xs.empty()) {
    const Range r = parse_range(xs, true, "--x");
    g.x0 = r.lo;
    g.x1 = r.hi;
    g.nx = r.n;
  }
  if (!ts.empty()) {
    const Range r = parse_range(ts, true, "--t");
    g.t0 = r.lo;
    g.t1 = r.hi;
    g.nt = r.n;
  }
  return g;
}

std::string surface_csv(const CatalogEntry& e, const GridSpec& g) {
  io::CsvTable tab({"x", "t", "rho", "u"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [x, t] : g.points()) {
    if (in_domain(e, x, t)) {
      const StatePoint v = eval(e, x, t);
      tab.add_row({x, t, v.rho, v.u});
    } else {
      tab.add_row({x, t, nan, nan});
    }
  }
  return tab.str();
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  std::string entry, xs, ts, mode = "auto";
  double A = 1, D = 0, tol = 1e-10;
  int fd_order = 4;
  CLI::Option *oA = nullptr, *oD = nullptr;
};

int cmd_verify(Context& ctx, const VerifyOpts& o) {
  const CatalogEntry e = parse_entry_spec(o.entry, opt_value(o.oA, o.A), opt_value(o.oD, o.D));
  const GridSpec g = region_for(e, o.xs, o.ts);
  VerifyMode mode = VerifyMode::Auto;
  if (o.mode == "analytic") mode = VerifyMode::AnalyticOnly;
  if (o.mode == "fd") mode = VerifyMode::FiniteDifferenceOnly;
  ctx.params = {{"entry", entry_id(e)}, {"region", grid_json(g)}, {"tol", num(o.tol)},
                {"fd_order", o.fd_order}, {"mode", o.mode}};
  const VerifyReport r = verify_entry(e, g, o.tol, mode, o.fd_order);
  json rep = report_json(r);
  rep["entry"] = entry_id(e);
  rep["region"] = grid_json(g);
  rep["tol"] = num(o.tol);
  if (!ctx.out_dir.empty()) ctx.emit("report.json", rep.dump(2) + "\n");
  ctx.print_json(rep);
  return status_exit(r.status);
}

// -------------------------------------------------------------- simulate

struct SimulateOpts {
  std::string ic, scheme = "rusanov", bc, xs, snap, format = "csv";
  std::vector<std::string> surface;
  int nx = 200;
  double cfl = 0.45, t0 = 0, t_end = 0, A = 1, D = 0;
  CLI::Option *oA = nullptr, *oD = nullptr, *ot0 = nullptr, *otend = nullptr;
};

bool looks_like_csv(const std::string& s) {
  return s.size() > 4 && s.substr(s.size() - 4) == ".csv";
}

Field field_from_csv(const std::string& path, double t0) {
  const std::string text = io::read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty IC file " + path);
  const std::vector<std::string> header = split(line, ',');
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("IC file lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = col("x"), cr = col("rho"), cu = col("u");
  std::vector<double> xs, rho, u;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != header.size()) throw ParseError("ragged row in " + path);
    xs.push_back(io::parse_double(cells[cx]));
    rho.push_back(io::parse_double(cells[cr]));
    u.push_back(io::parse_double(cells[cu]));
  }
  if (xs.size() < 8) throw ParseError("IC file needs at least 8 cells");
  const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (std::abs(xs[i] - xs[i - 1] - dx) > 1e-9 * std::max(1.0, std::abs(dx))) {
      throw ParseError("IC cell centres must be uniformly spaced");
    }
  }
  Field f;
  f.grid = Grid{xs.front() - 0.5 * dx, dx, static_cast<int>(xs.size())};
  f.grid.validate();
  f.t = t0;
  f.rho = rho;
  f.u = u;
  return f;
}

int cmd_simulate(Context& ctx, const SimulateOpts& o) {
  const bool from_csv = looks_like_csv(o.ic);
  std::optional<CatalogEntry> entry;
  if (!from_csv) entry = parse_entry_spec(o.ic, opt_value(o.oA, o.A), opt_value(o.oD, o.D));

  if (!o.surface.empty()) {
    if (!entry) throw UsageError("--surface needs a catalog entry as --ic");
    GridSpec g = default_region(*entry);
    for (const std::string& spec : o.surface) {
      const auto colon = spec.find(':');
      const std::string axis = spec.substr(0, colon);
      if (colon == std::string::npos || (axis != "x" && axis != "t")) {
        throw UsageError("--surface expects x:lo:hi:n and t:lo:hi:n, got '" + spec + "'");
      }
      const Range r = parse_range(spec.substr(colon + 1), true, "--surface");
      if (axis == "x") {
        g.x0 = r.lo, g.x1 = r.hi, g.nx = r.n;
      } else {
        g.t0 = r.lo, g.t1 = r.hi, g.nt = r.n;
      }
    }
    ctx.params = {{"ic", entry_id(*entry)}, {"surface", grid_json(g)}};
    ctx.emit("surface.csv", surface_csv(*entry, g));
    return 0;
  }

  SolverConfig cfg;
  cfg.cfl = o.cfl;
  if (o.scheme == "rusanov") {
    cfg.scheme = Scheme::Rusanov;
  } else if (o.scheme == "lax-friedrichs" || o.scheme == "lxf") {
    cfg.scheme = Scheme::LaxFriedrichs;
  } else {
    throw UsageError("unknown scheme '" + o.scheme + "'");
  }
  if (entry) {
    cfg.params = entry->model;
  } else {
    cfg.params.A = o.A;
    cfg.params.D = o.D;
  }
  const std::string bc = o.bc.empty() ? (entry ? "dirichlet" : "outflow") : o.bc;
  if (bc == "periodic") {
    cfg.bc = Boundary::periodic();
  } else if (bc == "outflow") {
    cfg.bc = Boundary::outflow();
  } else if (bc == "dirichlet") {
    if (!entry) throw UsageError("dirichlet boundary needs a catalog entry as --ic");
    cfg.bc = Boundary::dirichlet(make_sampler(*entry));
  } else {
    throw UsageError("unknown boundary '" + bc + "'");
  }

  Field ic;
  if (entry) {
    const GridSpec reg = default_region(*entry);
    double x0 = reg.x0, x1 = reg.x1;
    if (!o.xs.empty()) {
      const Range r = parse_range(o.xs, false, "--x");
      x0 = r.lo;
      x1 = r.hi;
    }
    const double t0 = o.ot0 && o.ot0->count() ? o.t0 : reg.t0;
    ic = sample_field(Grid::span(x0, x1, o.nx), make_sampler(*entry), t0);
  } else {
    ic = field_from_csv(o.ic, o.t0);
  }
  const double t_end = o.otend && o.otend->count() ? o.t_end : ic.t + 1.0;
  std::vector<double> snaps;
  if (!o.snap.empty()) snaps = parse_list(o.snap, 0, "--snap");
  if (!snaps.empty() && std::find(snaps.begin(), snaps.end(), t_end) == snaps.end()) {
    snaps.push_back(t_end);
  }

  ctx.params = {{"ic", entry ? entry_id(*entry) : o.ic},
                {"scheme", scheme_name(cfg.scheme)},
                {"bc", bc},
                {"nx", ic.grid.nx},
                {"x0", num(ic.grid.x0)},
                {"dx", num(ic.grid.dx)},
                {"cfl", num(cfg.cfl)},
                {"A", num(cfg.params.A)},
                {"D", num(cfg.params.D)},
                {"t0", num(ic.t)},
                {"t_end", num(t_end)},
                {"snapshots", num_array(snaps)}};

  const Trajectory tr = run(cfg, ic, t_end, snaps);

  if (o.format == "json") {
    json traj = json::array();
    for (const Field& f : tr.snapshots) {
      json xs = json::array();
      for (int i = 0; i < f.grid.nx; ++i) xs.push_back(num(f.grid.center(i)));
      traj.push_back({{"t", num(f.t)}, {"x", xs}, {"rho", num_array(f.rho)}, {"u", num_array(f.u)}});
    }
    ctx.emit("trajectory.json", traj.dump(2) + "\n");
  } else if (o.format == "csv") {
    io::CsvTable tab({"t", "x", "rho", "u"});
    for (const Field& f : tr.snapshots) {
      for (int i = 0; i < f.grid.nx; ++i) {
        tab.add_row({f.t, f.grid.center(i), f.rho[static_cast<std::size_t>(i)],
                     f.u[static_cast<std::size_t>(i)]});
      }
    }
    ctx.emit("trajectory.csv", tab.str());
  } else {
    throw UsageError("unknown format '" + o.format + "'");
  }

  if (!ctx.out_dir.empty()) {
    json diag = json::array();
    for (const StepDiagnostics& d : tr.diagnostics) {
      diag.push_back({{"step", d.step}, {"t", num(d.t)}, {"dt", num(d.dt)},
                      {"mass", num(d.mass)}, {"momentum", num(d.momentum)},
                      {"max_speed", num(d.max_speed)}});
    }
    ctx.emit("diagnostics.json", diag.dump(2) + "\n");
    const Field& last = tr.snapshots.back();
    json summary = {{"steps", tr.diagnostics.size()},
                    {"t_final", num(last.t)},
                    {"mass_initial", num(ic.total_mass())},
                    {"mass_final", num(last.total_mass())}};
    if (entry) {
      const ErrorNorms e = error_norms(last, make_sampler(*entry));
      summary["errors"] = {{"l1_rho", num(e.l1_rho)}, {"linf_rho", num(e.linf_rho)},
                           {"l1_u", num(e.l1_u)}, {"linf_u", num(e.linf_u)}};
    }
    ctx.print_json(summary);
  }
  return 0;
}

// ------------------------------------------------------------------- lie

struct LieOpts {
  std::string a, b, eps, entry, xs, ts, e, branch = "reciprocal";
  int group = 1;
  double eps_scalar = 0, delta = 1, A = 1, D = 0, tol = 1e-10;
  bool verify = false;
  CLI::Option *oA = nullptr, *oD = nullptr, *ob = nullptr;
};

int cmd_lie_commutator(Context& ctx, const LieOpts& o) {
  const lie::LieCoeffs r = lie::commutator(parse_coeffs(o.a), parse_coeffs(o.b));
  ctx.params = {{"a", o.a}, {"b", o.b}};
  ctx.print_json({{"result", coeffs_json(r)}});
  return 0;
}

int cmd_lie_killing(Context& ctx, const LieOpts& o) {
  const lie::LieCoeffs a = parse_coeffs(o.a);
  const lie::LieCoeffs b = (o.ob && o.ob->count()) ? parse_coeffs(o.b) : a;
  ctx.params = {{"a", o.a}, {"b", (o.ob && o.ob->count()) ? o.b : o.a}};
  ctx.print_json({{"K", num(lie::killing_form(a, b))}});
  return 0;
}

int cmd_lie_adjoint(Context& ctx, const LieOpts& o) {
  const lie::LieCoeffs w = parse_coeffs(o.a);
  const std::vector<double> e = parse_list(o.eps, 4, "--eps");
  const lie::AdjointParams p{e[0], e[1], e[2], e[3]};
  const Eigen::Matrix4d K = lie::adjoint_composite(p);
  json m = json::array();
  for (int i = 0; i < 4; ++i) m.push_back(num_array({K(i, 0), K(i, 1), K(i, 2), K(i, 3)}));
  ctx.params = {{"w", o.a}, {"eps", num_array(e)}};
  ctx.print_json({{"result", coeffs_json(lie::adjoint_apply(p, w))}, {"matrix", m}});
  return 0;
}

int cmd_lie_classify(Context& ctx, const LieOpts& o) {
  const lie::LieCoeffs w = parse_coeffs(o.a);
  const lie::Classification c = lie::classify_optimal(w);
  const lie::InvariantTuple inv = lie::invariant_tuple(c.cls.representative());
  ctx.params = {{"w", o.a}};
  ctx.print_json({{"family", lie::family_name(c.cls.family)},
                  {"b", c.cls.b},
                  {"l1", num(c.cls.l1)},
                  {"l2", num(c.cls.l2)},
                  {"representative", coeffs_json(c.cls.representative())},
                  {"eps", num_array({c.eps.eps1, c.eps.eps2, c.eps.eps3, c.eps.eps4})},
                  {"scale", num(c.scale)},
                  {"invariants",
                   {{"K", num(inv.killing)}, {"M", num(inv.M)}, {"N", num(inv.N)},
                    {"P", inv.P}, {"Q", inv.Q}, {"R", inv.R}}}});
  return 0;
}

int cmd_lie_transform(Context& ctx, const LieOpts& o) {
  const CatalogEntry e = parse_entry_spec(o.entry, opt_value(o.oA, o.A), opt_value(o.oD, o.D));
  if (o.group < 1 || o.group > 4) throw UsageError("--group must be 1..4");
  const SolutionSampler moved = lie::group_transform(o.group, o.eps_scalar, make_sampler(e));
  const GridSpec g = region_for(e, o.xs, o.ts);
  ctx.params = {{"entry", entry_id(e)}, {"group", o.group}, {"eps", num(o.eps_scalar)},
                {"region", grid_json(g)}, {"verify", o.verify}};
  json res = {{"entry", entry_id(e)}, {"group", o.group}, {"eps", num(o.eps_scalar)}};
  std::vector<std::pair<double, double>> pts;
  for (const auto& [x, t] : g.points()) {
    const auto m = lie::group_map_point(o.group, o.eps_scalar, x, t);
    pts.emplace_back(m[0], m[1]);
  }
  int code = 0;
  if (o.verify) {
    const VerifyReport r = verify_sampler(moved, e.model, pts, o.tol);
    res["verify"] = report_json(r);
    code = status_exit(r.status);
  }
  ctx.print_json(res);
  return code;
}

int cmd_lie_ic(Context& ctx, const LieOpts& o) {
  const std::vector<double> e = parse_list(o.e, 4, "--e");
  const lie::InfinitesimalParams p{e[0], e[1], e[2], e[3]};
  lie::IcBranch br;
  if (o.branch == "reciprocal") {
    br = lie::IcBranch::Reciprocal;
  } else if (o.branch == "power") {
    br = lie::IcBranch::Power;
  } else {
    throw UsageError("--branch must be reciprocal or power");
  }
  const Range r = parse_range(o.xs.empty() ? "0:1:11" : o.xs, true, "--x");
  std::vector<double> xs, vals;
  for (int i = 0; i < r.n; ++i) {
    const double x = r.n == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (r.n - 1);
    xs.push_back(x);
    vals.push_back(lie::invariant_ic(p, o.delta, x, br));
  }
  ctx.params = {{"e", num_array(e)}, {"delta", num(o.delta)}, {"branch", o.branch},
                {"x", {{"lo", num(r.lo)}, {"hi", num(r.hi)}, {"n", r.n}}}};
  ctx.print_json({{"x", num_array(xs)}, {"value", num_array(vals)}});
  return 0;
}

// -------------------------------------------------------------- conserve

struct ConserveOpts {
  std::string entry, which = "S4", c = "1,0,0", route = "printed", xs, ts;
  double A = 1, D = 0, h = 1e-2;
  CLI::Option *oA = nullptr, *oD = nullptr;
};

int cmd_conserve(Context& ctx, const ConserveOpts& o) {
  const CatalogEntry e = parse_entry_spec(o.entry, opt_value(o.oA, o.A), opt_value(o.oD, o.D));
  const SolutionSampler s = make_sampler(e);
  const std::vector<double> cv = parse_list(o.c, 3, "--c");
  const MultiplierConstants c{cv[0], cv[1], cv[2]};
  static const std::map<std::string, ConservedKind> kinds = {
      {"mass", ConservedKind::Mass}, {"momentum", ConservedKind::Momentum},
      {"S1", ConservedKind::S1},     {"S2", ConservedKind::S2},
      {"S3", ConservedKind::S3},     {"S4", ConservedKind::S4}};
  const auto it = kinds.find(o.which);
  if (it == kinds.end()) throw UsageError("--which must be mass, momentum or S1..S4");
  const ConservedKind which = it->second;
  if (o.route != "printed" && o.route != "derived") {
    throw UsageError("--route must be printed or derived");
  }
  const VectorRoute route = o.route == "printed" ? VectorRoute::Printed : VectorRoute::Derived;

  GridSpec g = default_region(e);
  const double mx = 0.05 * (g.x1 - g.x0), mt = 0.05 * (g.t1 - g.t0);
  g.x0 += mx, g.x1 -= mx, g.t0 += mt, g.t1 -= mt;
  g.nx = g.nt = 21;
  if (!o.xs.empty()) {
    const Range r = parse_range(o.xs, true, "--x");
    g.x0 = r.lo, g.x1 = r.hi, g.nx = r.n;
  }
  if (!o.ts.empty()) {
    const Range r = parse_range(o.ts, true, "--t");
    g.t0 = r.lo, g.t1 = r.hi, g.nt = r.n;
  }

  auto vec = [&](double x, double t) -> ConservedVector {
    if (which == ConservedKind::Mass || which == ConservedKind::Momentum) {
      const BasicConserved b = basic_conserved(e.model, s.at(x, t));
      const ConservedPair& p = which == ConservedKind::Mass ? b.mass : b.momentum;
      return {p.C, p.T};
    }
    return route == VectorRoute::Printed ? symmetry_conserved_vector(which, c, e.model, s, x, t)
                                         : derived_conserved_vector(which, c, e.model, s, x, t);
  };

  ctx.params = {{"entry", entry_id(e)}, {"which", o.which}, {"c", num_array(cv)},
                {"route", o.route}, {"h", num(o.h)}, {"grid", grid_json(g)}};
  io::CsvTable tab({"x", "t", "Ux", "Ut", "divergence"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double worst = 0.0;
  std::size_t evaluated = 0, skipped = 0;
  for (const auto& [x, t] : g.points()) {
    try {
      const ConservedVector v = vec(x, t);
      const double div = (vec(x + o.h, t).Ux - vec(x - o.h, t).Ux) / (2 * o.h) +
                         (vec(x, t + o.h).Ut - vec(x, t - o.h).Ut) / (2 * o.h);
      tab.add_row({x, t, v.Ux, v.Ut, div});
      worst = std::max(worst, std::abs(div));
      ++evaluated;
    } catch (const DomainError&) {
      tab.add_row({x, t, nan, nan, nan});
      ++skipped;
    }
  }
  ctx.emit("conserve.csv", tab.str());
  if (!ctx.out_dir.empty()) {
    ctx.print_json({{"entry", entry_id(e)}, {"which", o.which}, {"route", o.route},
                    {"max_abs_divergence", num(worst)}, {"points", evaluated},
                    {"skipped", skipped}});
  }
  return 0;
}

// ------------------------------------------------------------- wavefront

struct WavefrontOpts {
  std::string background;
  double A = 1, D = 0, pi0 = 0, x0 = 0, t0 = 1, t_end = 20;
  int n = 2000;
  CLI::Option *oA = nullptr, *oD = nullptr;
};

int cmd_wavefront(Context& ctx, const WavefrontOpts& o) {
  const CatalogEntry e =
      parse_entry_spec(o.background, opt_value(o.oA, o.A), opt_value(o.oD, o.D));
  const VerifyReport bg = verify_entry(e, default_region(e), 1e-10);
  ctx.params = {{"background", entry_id(e)}, {"pi0", num(o.pi0)}, {"x0", num(o.x0)},
                {"t0", num(o.t0)}, {"t_end", num(o.t_end)}, {"n", o.n}};
  if (bg.status == Status::Refuted) {
    ctx.print_json({{"background", entry_id(e)}, {"background_status", status_name(bg.status)}});
    return kBackgroundRefuted;
  }
  AmplitudeProblem prob;
  prob.background = make_sampler(e);
  prob.A = e.model.A;
  prob.x0 = o.x0;
  prob.t0 = o.t0;
  prob.pi0 = o.pi0;
  if (const auto* t1 = std::get_if<T1Params>(&e.kind)) prob.t1_shift = t1->b;
  const AmplitudeSolution sol = amplitude_quadrature(prob, o.t_end, o.n);

  io::CsvTable tab({"t", "x", "psi", "E", "F", "pi"});
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    tab.add_row({sol.times[k], sol.x[k], sol.psi[k], sol.E[k], sol.F[k], sol.pi[k]});
  }
  const json summary = {{"background", entry_id(e)},
                        {"background_status", status_name(bg.status)},
                        {"pi0", num(o.pi0)},
                        {"pi_c", num(sol.pi_c)},
                        {"pi_c_closed_form", sol.pi_c_closed_form},
                        {"shock_time", num(sol.shock_time)},
                        {"regime", regime_name(predicted_regime(o.pi0, sol.pi_c))}};
  if (ctx.out_dir.empty()) {
    ctx.print_json(summary);
  } else {
    ctx.emit("trace.csv", tab.str());
    ctx.emit("summary.json", summary.dump(2) + "\n");
    ctx.print_json(summary);
  }
  return 0;
}

// --------------------------------------------------------------- catalog

int cmd_catalog_list(Context& ctx, double tol) {
  json arr = json::array();
  for (const CatalogEntry& e : default_catalog()) {
    const VerifyReport r = verify_entry(e, default_region(e), tol);
    arr.push_back({{"id", entry_id(e)},
                   {"name", entry_name(e)},
                   {"status", status_name(r.status)},
                   {"max_r1", num(r.max_r1)},
                   {"max_r2", num(r.max_r2)},
                   {"region", grid_json(default_region(e))},
                   {"note", r.note}});
  }
  ctx.params = {{"tol", num(tol)}};
  ctx.print_json(arr);
  return 0;
}

// --------------------------------------------------------------- figures

std::string pi_sweep_csv(const std::vector<double>& pi0s) {
  const double t0 = 1.0, t_end = 20.0;
  const int n = 1900;
  std::vector<std::string> header{"t"};
  std::vector<AmplitudeSolution> sols;
  for (double p0 : pi0s) {
    header.push_back("pi0=" + io::format_double(p0));
    AmplitudeProblem prob;
    prob.background = make_sampler(make_entry(T1Params{0.0, 1.0, 1.0}));
    prob.A = 1.0;
    prob.x0 = 1.0;
    prob.t0 = t0;
    prob.pi0 = p0;
    prob.t1_shift = 1.0;
    sols.push_back(amplitude_quadrature(prob, t_end, n));
  }
  io::CsvTable tab(header);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= n; ++k) {
    std::vector<double> row{t0 + (t_end - t0) * k / n};
    for (const AmplitudeSolution& s : sols) {
      row.push_back(static_cast<std::size_t>(k) < s.pi.size() ? s.pi[static_cast<std::size_t>(k)]
                                                              : nan);
    }
    tab.add_row(row);
  }
  return tab.str();
}

int cmd_figures(Context& ctx) {
  if (ctx.out_dir.empty()) throw UsageError("figures needs --out DIR");
  struct Fig {
    std::string file;
    CatalogEntry entry;
    std::optional<GridSpec> grid;
  };
  auto kink = [](KinkShape shape, double A, double c1) {
    KinkParams k;
    k.shape = shape;
    k.c1 = c1;
    CatalogEntry e = make_entry(k);
    e.model.A = A;
    return e;
  };
  GridSpec fig1;
  fig1.x0 = -5, fig1.x1 = 5, fig1.t0 = 0.5, fig1.t1 = 3;
  std::vector<Fig> figs = {
      {"fig01_T1.csv", make_entry(T1Params{1, 2, 1}), fig1},
      {"fig02_T2.csv", make_entry(T2Params{2, 1}), std::nullopt},
      {"fig03_T3.csv", make_entry(T3Params{2, 1}), std::nullopt},
      {"fig04_P522.csv", make_entry(P522Params{2, 1, 2, 1, 3}), std::nullopt},
      {"fig05_KINK_sin.csv", kink(KinkShape::Sin, 1, 1), std::nullopt},
      {"fig06_KINK_sec.csv", kink(KinkShape::Sec, 5, -1), std::nullopt},
      {"fig07_KINK_cos.csv", kink(KinkShape::Cos, 5, -6), std::nullopt},
      {"fig08_KINK_gauss.csv", kink(KinkShape::Gauss, 5, -6), std::nullopt},
  };
  json list = json::array();
  for (const Fig& f : figs) {
    const GridSpec g = f.grid ? *f.grid : default_region(f.entry);
    ctx.emit(f.file, surface_csv(f.entry, g));
    list.push_back({{"file", f.file}, {"entry", entry_id(f.entry)}, {"grid", grid_json(g)}});
  }
  const std::vector<double> positive{0.25, 0.5, 1.0, 2.0};
  const std::vector<double> negative{-0.25, -0.5, -0.7, -1.0, -1.5};
  ctx.emit("fig09_pi_positive.csv", pi_sweep_csv(positive));
  ctx.emit("fig10_pi_negative.csv", pi_sweep_csv(negative));
  list.push_back({{"file", "fig09_pi_positive.csv"}, {"pi0", num_array(positive)}});
  list.push_back({{"file", "fig10_pi_negative.csv"}, {"pi0", num_array(negative)}});
  ctx.params = {{"figures", list}};
  ctx.print_json({{"figures", list}});
  return 0;
}

// ---------------------------------------------------------------- replay

std::atomic<int> g_replay_counter{0};

int cmd_replay(Context& ctx, const std::string& manifest_path, std::ostream& err) {
  const json m = json::parse(io::read_file(manifest_path));
  std::vector<std::string> argv = m.at("argv").get<std::vector<std::string>>();
  const fs::path tmp = fs::temp_directory_path() /
                       ("trafficsym-replay-" + io::sha256_hex(manifest_path).substr(0, 12) + "-" +
                        std::to_string(g_replay_counter++));
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if ((argv[i] == "--out" || argv[i] == "--manifest") && i + 1 < argv.size()) {
      argv[i + 1] = (tmp / (argv[i] == "--out" ? "out" : "manifest.json")).string();
    } else if (argv[i].rfind("--out=", 0) == 0) {
      argv[i] = "--out=" + (tmp / "out").string();
    } else if (argv[i].rfind("--manifest=", 0) == 0) {
      argv[i] = "--manifest=" + (tmp / "manifest.json").string();
    }
  }
  std::ostringstream out, errs;
  const int code = run_cli(argv, out, errs);

  json mismatches = json::array();
  if (code != m.value("exit_code", 0)) mismatches.push_back("exit_code");
  if (io::sha256_hex(out.str()) != m.value("stdout_sha256", "")) mismatches.push_back("stdout");
  for (const auto& [name, digest] : m.at("outputs").items()) {
    const fs::path p = tmp / "out" / name;
    const std::string got = fs::exists(p) ? io::sha256_hex(io::read_file(p.string())) : "";
    if (got != digest.get<std::string>()) mismatches.push_back(name);
  }
  fs::remove_all(tmp);
  ctx.params = {{"manifest", manifest_path}};
  const bool ok = mismatches.empty();
  ctx.print_json({{"replayed", argv.empty() ? "" : argv.front()},
                  {"identical", ok},
                  {"mismatches", mismatches}});
  if (!ok) err << "replay mismatch: " << mismatches.dump() << '\n';
  return ok ? 0 : kReplayMismatch;
}

void write_manifest(Context& ctx, int code) {
  if (ctx.out_dir.empty() && ctx.manifest_path.empty()) return;
  json outputs = json::object();
  for (const auto& [name, digest] : ctx.outputs) outputs[name] = digest;
  const json m = {{"argv", ctx.argv},
                  {"command", ctx.command},
                  {"params", ctx.params},
                  {"version", kVersion},
                  {"outputs", outputs},
                  {"stdout_sha256", io::sha256_hex(ctx.stdout_buf.str())},
                  {"exit_code", code}};
  const std::string path = !ctx.manifest_path.empty()
                               ? ctx.manifest_path
                               : (fs::path(ctx.out_dir) / "manifest.json").string();
  io::write_file(path, m.dump(2) + "\n");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.argv = args;

  CLI::App app{"Symmetry, exact-solution and wave analysis for a viscous traffic-flow model",
               "trafficsym"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  app.add_option("--manifest", ctx.manifest_path, "Write the run manifest to this path");

  std::function<int()> action;

  // verify
  VerifyOpts vo;
  CLI::App* verify = app.add_subcommand("verify", "Residual check of a catalog entry");
  verify->add_option("entry", vo.entry, "Entry spec, e.g. T1?p1=1&p2=2&b=1")->required();
  vo.oA = verify->add_option("--A", vo.A, "Speed variance");
  vo.oD = verify->add_option("--D", vo.D, "Viscosity");
  verify->add_option("--x", vo.xs, "x0:x1:nx");
  verify->add_option("--t", vo.ts, "t0:t1:nt");
  verify->add_option("--tol", vo.tol, "Residual tolerance");
  verify->add_option("--fd-order", vo.fd_order, "FD order for the refinement study")
      ->check(CLI::IsMember({2, 4}));
  verify->add_option("--mode", vo.mode)->check(CLI::IsMember({"auto", "analytic", "fd"}));
  verify->add_option("--out", ctx.out_dir, "Output directory");
  verify->callback([&] {
    ctx.command = "verify";
    action = [&] { return cmd_verify(ctx, vo); };
  });

  // simulate
  SimulateOpts so;
  CLI::App* sim = app.add_subcommand("simulate", "Finite-volume run or surface sampling");
  sim->add_option("--ic", so.ic, "Entry spec or CSV file with x,rho,u")->required();
  sim->add_option("--scheme", so.scheme)->check(CLI::IsMember({"rusanov", "lax-friedrichs", "lxf"}));
  sim->add_option("--nx", so.nx);
  sim->add_option("--x", so.xs, "x0:x1");
  sim->add_option("--cfl", so.cfl);
  so.ot0 = sim->add_option("--t0", so.t0);
  so.otend = sim->add_option("--t-end", so.t_end);
  sim->add_option("--bc", so.bc)->check(CLI::IsMember({"periodic", "dirichlet", "outflow"}));
  so.oA = sim->add_option("--A", so.A);
  so.oD = sim->add_option("--D", so.D);
  sim->add_option("--snap", so.snap, "Comma-separated snapshot times");
  sim->add_option("--format", so.format)->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--surface", so.surface, "x:lo:hi:n t:lo:hi:n")->expected(1, 2);
  sim->add_option("--out", ctx.out_dir);
  sim->callback([&] {
    ctx.command = "simulate";
    action = [&] { return cmd_simulate(ctx, so); };
  });

  // lie
  LieOpts lo;
  CLI::App* lie_cmd = app.add_subcommand("lie", "Lie algebra queries");
  lie_cmd->require_subcommand(1);
  CLI::App* comm = lie_cmd->add_subcommand("commutator", "[a, b]");
  comm->add_option("a", lo.a)->required();
  comm->add_option("b", lo.b)->required();
  comm->callback([&] {
    ctx.command = "lie commutator";
    action = [&] { return cmd_lie_commutator(ctx, lo); };
  });
  CLI::App* kill = lie_cmd->add_subcommand("killing", "Killing form K(a, b)");
  kill->add_option("a", lo.a)->required();
  lo.ob = kill->add_option("b", lo.b);
  kill->callback([&] {
    ctx.command = "lie killing";
    action = [&] { return cmd_lie_killing(ctx, lo); };
  });
  CLI::App* adj = lie_cmd->add_subcommand("adjoint", "w K4 K3 K2 K1");
  adj->add_option("w", lo.a)->required();
  adj->add_option("--eps", lo.eps, "eps1,eps2,eps3,eps4")->required();
  adj->callback([&] {
    ctx.command = "lie adjoint";
    action = [&] { return cmd_lie_adjoint(ctx, lo); };
  });
  CLI::App* cls = lie_cmd->add_subcommand("classify", "Optimal-system class of w");
  cls->add_option("w", lo.a)->required();
  cls->callback([&] {
    ctx.command = "lie classify";
    action = [&] { return cmd_lie_classify(ctx, lo); };
  });
  CLI::App* tr = lie_cmd->add_subcommand("transform", "Apply G_i(eps) to a catalog entry");
  tr->add_option("--entry", lo.entry)->required();
  tr->add_option("--group", lo.group)->required();
  tr->add_option("--eps", lo.eps_scalar)->required();
  lo.oA = tr->add_option("--A", lo.A);
  lo.oD = tr->add_option("--D", lo.D);
  tr->add_option("--x", lo.xs);
  tr->add_option("--t", lo.ts);
  tr->add_option("--tol", lo.tol);
  tr->add_flag("--verify", lo.verify);
  tr->callback([&] {
    ctx.command = "lie transform";
    action = [&] { return cmd_lie_transform(ctx, lo); };
  });
  CLI::App* icc = lie_cmd->add_subcommand("ic", "Invariant initial profile");
  icc->add_option("--e", lo.e, "e1,e2,e3,e4")->required();
  icc->add_option("--delta", lo.delta);
  icc->add_option("--branch", lo.branch);
  icc->add_option("--x", lo.xs, "x0:x1:n");
  icc->callback([&] {
    ctx.command = "lie ic";
    action = [&] { return cmd_lie_ic(ctx, lo); };
  });

  // conserve
  ConserveOpts co;
  CLI::App* cons = app.add_subcommand("conserve", "Conserved vectors and their divergence");
  cons->add_option("--entry", co.entry)->required();
  cons->add_option("--which", co.which);
  cons->add_option("--c", co.c, "c1,c2,c3");
  cons->add_option("--route", co.route);
  co.oA = cons->add_option("--A", co.A);
  co.oD = cons->add_option("--D", co.D);
  cons->add_option("--x", co.xs);
  cons->add_option("--t", co.ts);
  cons->add_option("--step", co.h, "Central-difference step");
  cons->add_option("--out", ctx.out_dir);
  cons->callback([&] {
    ctx.command = "conserve";
    action = [&] { return cmd_conserve(ctx, co); };
  });

  // wavefront
  WavefrontOpts wo;
  CLI::App* wave = app.add_subcommand("wavefront", "C1-wave amplitude along the fast characteristic");
  wave->add_option("--background", wo.background)->required();
  wo.oA = wave->add_option("--A", wo.A);
  wo.oD = wave->add_option("--D", wo.D);
  wave->add_option("--pi0", wo.pi0);
  wave->add_option("--x0", wo.x0);
  wave->add_option("--t0", wo.t0);
  wave->add_option("--t-end", wo.t_end);
  wave->add_option("--n", wo.n);
  wave->add_option("--out", ctx.out_dir);
  wave->callback([&] {
    ctx.command = "wavefront";
    action = [&] { return cmd_wavefront(ctx, wo); };
  });

  // catalog
  double cat_tol = 1e-10;
  CLI::App* cat = app.add_subcommand("catalog", "Catalog listing");
  cat->require_subcommand(1);
  CLI::App* cat_list = cat->add_subcommand("list", "Verify and list every default entry");
  cat_list->add_option("--tol", cat_tol);
  cat_list->callback([&] {
    ctx.command = "catalog list";
    action = [&] { return cmd_catalog_list(ctx, cat_tol); };
  });

  // figures
  CLI::App* figs = app.add_subcommand("figures", "Surface and amplitude data for the figures");
  figs->add_option("--out", ctx.out_dir)->required();
  figs->callback([&] {
    ctx.command = "figures";
    action = [&] { return cmd_figures(ctx); };
  });

  // replay
  std::string manifest_in;
  CLI::App* rep = app.add_subcommand("replay", "Re-run a manifest and compare digests");
  rep->add_option("manifest", manifest_in)->required();
  rep->callback([&] {
    ctx.command = "replay";
    action = [&] { return cmd_replay(ctx, manifest_in, err); };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  int code = kInternal;
  try {
    code = action ? action() : kUsage;
  } catch (const PositivityError& e) {
    err << "positivity abort: cell " << e.cell() << ", t=" << io::format_double(e.time())
        << ": " << e.what() << '\n';
    code = kPositivity;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    code = kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    code = kDataError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    code = kDataError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    code = kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    code = kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kDataError;
  }

  out << ctx.stdout_buf.str();
  try {
    write_manifest(ctx, code);
  } catch (const std::exception& e) {
    err << "cannot write manifest: " << e.what() << '\n';
    if (code == 0) code = kDataError;
  }
  return code;
}

}  // namespace trafficsym::cli
