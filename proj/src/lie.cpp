#include "trafficsym/lie.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trafficsym::lie {

namespace {

// kBracket[i][j] = coefficients of [S_{i+1}, S_{j+1}].
constexpr int kBracket[4][4][4] = {
    // S1
    {{0, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, -1}},
    // S2
    {{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}},
    // S3
    {{0, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 0, 0}, {0, 0, 0, 0}},
    // S4
    {{0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}},
};

void check_index(int i) {
  if (i < 1 || i > 4) throw std::invalid_argument("generator index must be in 1..4");
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

LieCoeffs LieCoeffs::basis(int i) {
  check_index(i);
  LieCoeffs c;
  c[i - 1] = 1.0;
  return c;
}

LieCoeffs LieCoeffs::operator+(const LieCoeffs& o) const {
  LieCoeffs r;
  for (int k = 0; k < 4; ++k) r[k] = (*this)[k] + o[k];
  return r;
}

LieCoeffs LieCoeffs::operator-(const LieCoeffs& o) const {
  LieCoeffs r;
  for (int k = 0; k < 4; ++k) r[k] = (*this)[k] - o[k];
  return r;
}

LieCoeffs LieCoeffs::operator*(double s) const {
  LieCoeffs r;
  for (int k = 0; k < 4; ++k) r[k] = (*this)[k] * s;
  return r;
}

double LieCoeffs::max_abs() const {
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v));
  return m;
}

int structure_constant(int i, int j, int k) { return kBracket[i][j][k]; }

LieCoeffs commutator(const LieCoeffs& a, const LieCoeffs& b) {
  LieCoeffs r;
  for (int i = 0; i < 4; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < 4; ++j) {
      if (b[j] == 0.0) continue;
      for (int k = 0; k < 4; ++k) {
        if (kBracket[i][j][k] != 0) r[k] += a[i] * b[j] * kBracket[i][j][k];
      }
    }
  }
  return r;
}

Eigen::Matrix4d ad_matrix(const LieCoeffs& a) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) m(k, j) += a[i] * kBracket[i][j][k];
  return m;
}

double killing_form(const LieCoeffs& a, const LieCoeffs& b) {
  return (ad_matrix(a) * ad_matrix(b)).trace();
}

Eigen::Matrix4d adjoint_exp_matrix(int i, double eps) {
  check_index(i);
  Eigen::Matrix4d k = Eigen::Matrix4d::Identity();
  switch (i) {
    case 1:
      k(1, 1) = std::exp(eps);
      k(3, 3) = std::exp(eps);
      break;
    case 2:
      k(0, 1) = -eps;
      k(2, 3) = -eps;
      break;
    case 3:
      k(1, 3) = eps;
      break;
    case 4:
      k(0, 3) = -eps;
      break;
  }
  return k;
}

Eigen::Matrix4d adjoint_composite(const AdjointParams& e) {
  return adjoint_exp_matrix(4, e.eps4) * adjoint_exp_matrix(3, e.eps3) *
         adjoint_exp_matrix(2, e.eps2) * adjoint_exp_matrix(1, e.eps1);
}

LieCoeffs adjoint_apply(const AdjointParams& e, const LieCoeffs& w) {
  const double g = std::exp(e.eps1);
  LieCoeffs q;
  q[0] = w[0];
  q[1] = (-w[0] * e.eps2 + w[1]) * g;
  q[2] = w[2];
  q[3] = (-w[0] * e.eps4 + w[1] * e.eps3 - e.eps2 * w[2] + w[3]) * g;
  return q;
}

LieCoeffs adjoint_series(int i, int j, double eps, int terms) {
  check_index(i);
  check_index(j);
  const Eigen::Matrix4d ad = ad_matrix(LieCoeffs::basis(i));
  Eigen::Vector4d term = Eigen::Vector4d::Unit(j - 1);
  Eigen::Vector4d sum = term;
  for (int k = 1; k < terms; ++k) {
    term = (ad * term) * (-eps / k);
    sum += term;
  }
  return LieCoeffs{{sum(0), sum(1), sum(2), sum(3)}};
}

double adjoint_series_check(int i, int j, double eps) {
  const Eigen::Matrix4d k = adjoint_exp_matrix(i, eps);
  const LieCoeffs series = adjoint_series(i, j, eps, 3);
  double gap = 0.0;
  for (int c = 0; c < 4; ++c) gap = std::max(gap, std::abs(k(j - 1, c) - series[c]));
  return gap;
}

InvariantTuple invariant_tuple(const LieCoeffs& w) {
  InvariantTuple inv;
  inv.killing = killing_form(w, w);
  inv.M = w[0];
  inv.N = w[2];
  inv.P = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2] != 0.0) ? 1 : 0;
  inv.Q = (w[0] == 0.0) ? sign_of(w[1]) : 0;
  inv.R = (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0) ? sign_of(w[3]) : 0;
  return inv;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::T1: return "T1";
    case Family::T2: return "T2";
    case Family::T3: return "T3";
    case Family::T4: return "T4";
    case Family::Unreduced: return "UNREDUCED";
  }
  return "?";
}

LieCoeffs OptimalClass::representative() const {
  const double bb = b;
  switch (family) {
    case Family::T1: return {{0.0, 0.0, 1.0, bb}};
    case Family::T2: return {{1.0, 0.0, 0.0, bb}};
    case Family::T3: return {{l1, 0.0, l2, bb}};
    case Family::T4: return {{0.0, 1.0, 0.0, bb}};
    case Family::Unreduced: return residue;
  }
  return residue;
}

Classification classify_optimal(const LieCoeffs& w) {
  if (w.is_zero()) throw std::invalid_argument("cannot classify the zero element");
  const double w1 = w[0], w2 = w[1], w3 = w[2], w4 = w[3];
  Classification out;
  AdjointParams& e = out.eps;
  OptimalClass& cls = out.cls;

  if (w1 != 0.0) {
    // e2 clears S2; e4 then sets the S4 coefficient to b * scale.
    e.eps2 = w2 / w1;
    if (w3 != 0.0) {
      out.scale = 1.0;
      cls.family = Family::T3;
      cls.l1 = w1;
      cls.l2 = w3;
    } else {
      out.scale = w1;
      cls.family = Family::T2;
    }
    cls.b = sign_of(w4 / out.scale);
    e.eps4 = (w4 - e.eps2 * w3 - cls.b * out.scale) / w1;
    return out;
  }

  if (w3 != 0.0) {
    out.scale = w3;
    cls.b = sign_of(w4 / w3);
    if (w2 == 0.0) {
      cls.family = Family::T1;
      e.eps2 = (w4 - cls.b * w3) / w3;
      return out;
    }
    // S2 only rescales under the adjoint action; it cannot be cleared.
    cls.family = Family::Unreduced;
    e.eps1 = std::log(std::abs(w3 / w2));
    e.eps2 = (w4 - cls.b * w3 * std::exp(-e.eps1)) / w3;
    cls.residue = LieCoeffs{{0.0, static_cast<double>(sign_of(w2 / w3)), 1.0,
                             static_cast<double>(cls.b)}};
    return out;
  }

  if (w2 != 0.0) {
    out.scale = w2;
    cls.family = Family::T4;
    cls.b = sign_of(w4 / w2);
    e.eps3 = (cls.b * w2 - w4) / w2;
    return out;
  }

  out.scale = w4;
  cls.family = Family::Unreduced;
  cls.residue = LieCoeffs{{0.0, 0.0, 0.0, 1.0}};
  return out;
}

Infinitesimals infinitesimals(const InfinitesimalParams& e, double x, double t, double rho,
                              double /*u*/) {
  return {e.e1 * x + e.e3 * t + e.e4, e.e1 * t + e.e2, -e.e1 * rho, e.e3};
}

std::array<double, 2> group_map_point(int i, double eps, double x, double t) {
  check_index(i);
  switch (i) {
    case 1: return {x * std::exp(eps), t * std::exp(eps)};
    case 2: return {x, t + eps};
    case 3: return {x + eps * t, t};
    default: return {x + eps, t};
  }
}

SolutionSampler group_transform(int i, double eps, const SolutionSampler& s) {
  check_index(i);
  // Pull-back of the evaluation point into the original solution's frame.
  auto pull = [i, eps](double x, double t) -> std::array<double, 2> {
    switch (i) {
      case 1: return {x * std::exp(-eps), t * std::exp(-eps)};
      case 2: return {x, t - eps};
      case 3: return {x - eps * t, t};
      default: return {x - eps, t};
    }
  };

  SolutionSampler out;
  out.domain = [s, pull](double x, double t) {
    const auto [X, T] = pull(x, t);
    return s.contains(X, T);
  };
  out.eval = [s, pull, i, eps](double x, double t) {
    const auto [X, T] = pull(x, t);
    StatePoint v = s.eval(X, T);
    if (i == 1) v.rho *= std::exp(-eps);
    if (i == 3) v.u += eps;
    return v;
  };
  if (s.has_partials()) {
    out.partials = [s, pull, i, eps](double x, double t) {
      const auto [X, T] = pull(x, t);
      Partials d = s.partials(X, T);
      if (i == 1) {
        const double k = std::exp(-eps);
        d.rho_x *= k * k;
        d.rho_t *= k * k;
        d.u_x *= k;
        d.u_t *= k;
        d.u_xx *= k * k;
      } else if (i == 3) {
        d.rho_t -= eps * d.rho_x;
        d.u_t -= eps * d.u_x;
      }
      return d;
    };
  }
  return out;
}

double invariant_ic(const InfinitesimalParams& e, double delta, double x, IcBranch branch) {
  if (e.e2 != 0.0) throw std::invalid_argument("invariant initial data requires e2 = 0");
  const double base = e.e1 * x + e.e4;
  if (branch == IcBranch::Reciprocal) {
    if (base == 0.0) throw std::domain_error("e1 x + e4 vanishes");
    return delta / base;
  }
  if (e.e1 == 0.0) throw std::invalid_argument("power branch requires e1 != 0");
  const double expo = e.e3 / e.e1;
  if (base == 0.0 && expo < 0.0) throw std::domain_error("zero base with negative exponent");
  if (base < 0.0 && std::floor(expo) != expo) {
    throw std::domain_error("negative base with non-integer exponent");
  }
  return delta * std::pow(base, expo);
}

}  // namespace trafficsym::lie
