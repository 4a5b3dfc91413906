#pragma once

// The four-dimensional symmetry algebra of the traffic system, spanned by
//
//   S1 = x d/dx + t d/dt - rho d/drho   (dilation)
//   S2 = d/dt                           (time translation)
//   S3 = t d/dx + d/du                  (Galilean boost)
//   S4 = d/dx                           (space translation)
//
// with the only nonzero brackets [S1,S2] = -S2, [S1,S4] = -S4, [S2,S3] = S4.

#include <Eigen/Core>
#include <array>
#include <string>

#include "trafficsym/model.hpp"

namespace trafficsym::lie {

/// Coefficients (w1..w4) of w1 S1 + w2 S2 + w3 S3 + w4 S4.
struct LieCoeffs {
  std::array<double, 4> w{};

  static LieCoeffs basis(int i);  // i in 1..4

  double& operator[](int i) { return w[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return w[static_cast<std::size_t>(i)]; }
  bool operator==(const LieCoeffs&) const = default;

  LieCoeffs operator+(const LieCoeffs& o) const;
  LieCoeffs operator-(const LieCoeffs& o) const;
  LieCoeffs operator*(double s) const;
  double max_abs() const;
  bool is_zero() const { return max_abs() == 0.0; }
};

struct AdjointParams {
  double eps1 = 0.0, eps2 = 0.0, eps3 = 0.0, eps4 = 0.0;
};

/// Constants e1..e4 of the general infinitesimal generator.
struct InfinitesimalParams {
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
};

/// Exact integer structure constants: [S_i, S_j] = sum_k c(i,j,k) S_k,
/// zero-based indices.
int structure_constant(int i, int j, int k);

LieCoeffs commutator(const LieCoeffs& a, const LieCoeffs& b);

/// Matrix of ad(a) acting on column coefficient vectors: ad(a) b = [a, b].
Eigen::Matrix4d ad_matrix(const LieCoeffs& a);

/// trace(ad(a) ad(b)).
double killing_form(const LieCoeffs& a, const LieCoeffs& b);

/// K_i(eps) as printed: row j holds the coefficients of Ad(exp(eps S_i)) S_j.
Eigen::Matrix4d adjoint_exp_matrix(int i, double eps);

/// K4(eps4) K3(eps3) K2(eps2) K1(eps1).
Eigen::Matrix4d adjoint_composite(const AdjointParams& e);

/// Closed form of the row-vector product w * K4 K3 K2 K1.
LieCoeffs adjoint_apply(const AdjointParams& e, const LieCoeffs& w);

/// Ad(exp(eps S_i)) S_j summed as sum_k (-eps)^k / k! ad(S_i)^k S_j over
/// `terms` terms.
LieCoeffs adjoint_series(int i, int j, double eps, int terms);

/// Max-norm gap between row j of K_i(eps) and the three-term series.
double adjoint_series_check(int i, int j, double eps);

struct InvariantTuple {
  double killing = 0.0;
  double M = 0.0;  ///< w1
  double N = 0.0;  ///< w3
  int P = 0;       ///< 1 iff w1^2 + w2^2 + w3^2 != 0
  int Q = 0;       ///< sgn(w2) if w1 == 0
  int R = 0;       ///< sgn(w4) if w1 == w2 == w3 == 0
  bool operator==(const InvariantTuple&) const = default;
};

InvariantTuple invariant_tuple(const LieCoeffs& w);

enum class Family { T1, T2, T3, T4, Unreduced };

std::string family_name(Family f);

/// Representative of a one-dimensional optimal subalgebra:
///   T1 = S3 + b S4, T2 = S1 + b S4, T3 = l1 S1 + l2 S3 + b S4,
///   T4 = S2 + b S4, or an element outside those families (`residue`).
struct OptimalClass {
  Family family = Family::Unreduced;
  int b = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  LieCoeffs residue{};

  LieCoeffs representative() const;
};

/// Result of reducing w: adjoint_apply(eps, w) / scale equals
/// cls.representative().
struct Classification {
  OptimalClass cls;
  AdjointParams eps;
  double scale = 1.0;
};

/// Throws std::invalid_argument on the zero vector.
///
/// b is not an adjoint invariant once w1 or w3 is nonzero, so the label is
/// the sign of the incoming S4 coefficient after dividing by `scale`. When
/// w1 = 0 and w2, w3 are both nonzero the S2 coefficient can only be
/// rescaled, never removed, and the class is reported as Unreduced with
/// residue (0, +-1, 1, b). A pure S4 multiple is Unreduced with residue
/// (0, 0, 0, 1).
Classification classify_optimal(const LieCoeffs& w);

struct Infinitesimals {
  double Fx, Ft, Frho, Fu;
};

Infinitesimals infinitesimals(const InfinitesimalParams& e, double x, double t, double rho,
                              double u);

/// One-parameter group G_i(eps) acting on a known solution. The returned
/// sampler owns a copy of `s`; analytic partials carry over by the chain
/// rule.
SolutionSampler group_transform(int i, double eps, const SolutionSampler& s);

/// Maps an original point (x,t) to the point where the transformed solution
/// takes the transported value.
std::array<double, 2> group_map_point(int i, double eps, double x, double t);

enum class IcBranch { Reciprocal, Power };

/// Invariant initial profile: delta / (e1 x + e4) or delta (e1 x + e4)^(e3/e1).
/// Requires e2 == 0.
double invariant_ic(const InfinitesimalParams& e, double delta, double x, IcBranch branch);

}  // namespace trafficsym::lie
