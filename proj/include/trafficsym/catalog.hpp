#pragma once

// Closed-form solutions of the traffic system and the residual harness that
// assigns each of them a verification status.

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "trafficsym/model.hpp"

namespace trafficsym {

enum class Status { Verified, PaperClaimed, Refuted };

std::string status_name(Status s);

/// rho = p2 / (t + b), u = (x + p1) / (t + b). Any D.
struct T1Params {
  double p1 = 1.0, p2 = 2.0, b = 1.0;
};

/// Dilation-plus-translation branch: rho = 2 p1 / (R - (x+b)), u = ((x+b) + R) / (2t),
/// R = sqrt((x+b)^2 - 4 A t^2). D = 0.
struct T2Params {
  double p1 = 2.0, b = 1.0;
};

/// rho = (p1/t) exp((t ln t - x - b) / (t A)), u = (x+b)/t + 1. D = 0, t > 0.
struct T3Params {
  double p1 = 2.0, b = 1.0;
};

/// Constant state rho = p1 / sqrt(A), u = b + sqrt(A). D = 0.
struct T4Params {
  double p1 = 1.0, b = 0.0;
};

/// Pressureless family (A = 0, D = 0) with Q = 2 e3 p2 + (e3 t + e4)^2 - 2 e2 e3 x:
/// rho = p1 / sqrt(Q), u = e3 t / e2 + (e4 - sqrt(Q)) / e2.
struct P522Params {
  double p1 = 2.0, p2 = 1.0, e2 = 2.0, e3 = 1.0, e4 = 3.0;
};

/// Two-parameter generalisation of T2 with sigma = e1 x + e4, theta = e1 t + e2.
/// T2 is the case e1 = 1, e2 = 0, e4 = b.
struct E3ZeroParams {
  double p1 = 1.0, e1 = 2.0, e2 = 1.0, e4 = 0.5;
};

enum class KinkShape { Sin, Sec, Cos, Gauss, Custom };

std::string kink_shape_name(KinkShape s);

/// rho = M(x), u = -sqrt(A) tanh(sqrt(A) M'(x) (c1 + t) / M(x)).
/// Custom shapes need M and M'; analytic partials additionally need M'' and M'''.
struct KinkParams {
  KinkShape shape = KinkShape::Sin;
  double c1 = 1.0;
  std::function<double(double)> M, dM, d2M, d3M;  // only for Custom
};

/// (M(x), M'(x)) of a kink shape.
std::pair<double, double> kink_profile(const KinkParams& k, double x);

/// Negative control: rho = x + 2, u = 1 (not a solution for A > 0).
struct ControlParams {};

using EntryKind = std::variant<T1Params, T2Params, T3Params, T4Params, P522Params,
                               E3ZeroParams, KinkParams, ControlParams>;

struct CatalogEntry {
  EntryKind kind;
  ModelParams model;
  /// Status carried before the harness runs; KINK starts as PaperClaimed.
  Status claimed = Status::PaperClaimed;
};

/// "T1", "T2", ..., "KINK", "CONTROL".
std::string entry_name(const CatalogEntry& e);

/// Canonical spec string, e.g. "T1?b=1&p1=1&p2=2".
std::string entry_id(const CatalogEntry& e);

/// Entry built with its default parameters and model constants.
CatalogEntry make_entry(const EntryKind& kind);

/// The printed catalog with default parameters (four KINK shapes, plus the control).
std::vector<CatalogEntry> default_catalog();

/// Throws DomainError if the entry's (A, D) constraint is violated.
void check_constraints(const CatalogEntry& e);

bool in_domain(const CatalogEntry& e, double x, double t);
bool has_analytic_partials(const CatalogEntry& e);

/// Throws DomainError outside the domain or on a violated constraint.
StatePoint eval(const CatalogEntry& e, double x, double t);
Partials analytic_partials(const CatalogEntry& e, double x, double t);

/// Sampler view of an entry (constraints checked once, up front).
SolutionSampler make_sampler(const CatalogEntry& e);

struct GridSpec {
  double x0 = 0.0, x1 = 1.0;
  double t0 = 0.0, t1 = 1.0;
  int nx = 101, nt = 101;

  std::vector<std::pair<double, double>> points() const;
};

/// A region inside the entry's domain sized for verification and plots.
GridSpec default_region(const CatalogEntry& e);

enum class VerifyMode { Auto, AnalyticOnly, FiniteDifferenceOnly };

struct VerifyReport {
  Status status = Status::PaperClaimed;
  bool analytic = false;
  double max_r1 = 0.0;  ///< analytic partials when available, else finest FD level
  double max_r2 = 0.0;
  std::size_t points = 0;   ///< points evaluated
  std::size_t skipped = 0;  ///< points (or stencils) outside the domain
  int fd_order = 4;
  /// FD refinement study: relative step, max |r1|, max |r2| per level.
  std::vector<double> fd_rel_step;
  std::vector<double> fd_max_r1;
  std::vector<double> fd_max_r2;
  std::vector<double> ratios;  ///< successive max-residual ratios coarse/fine
  double observed_order = 0.0;
  std::string note;

  double max_residual() const { return max_r1 > max_r2 ? max_r1 : max_r2; }
};

/// Residual harness over an explicit point list. Throws std::invalid_argument
/// when no point lies in the domain.
VerifyReport verify_sampler(const SolutionSampler& s, const ModelParams& p,
                            const std::vector<std::pair<double, double>>& pts, double tol,
                            VerifyMode mode = VerifyMode::Auto, int fd_order = 4);

VerifyReport verify_entry(const CatalogEntry& e, const GridSpec& region, double tol,
                          VerifyMode mode = VerifyMode::Auto, int fd_order = 4);

/// Residuals of the two reduced ODEs of the T3 reduction (l1 = l2 = 1) at tau,
/// evaluated on Z = tau + 1, Y = p1 exp(-tau / A).
std::pair<double, double> reduced_ode_residual_T3(double p1, double A, double tau,
                                                  double D = 0.0);

}  // namespace trafficsym
