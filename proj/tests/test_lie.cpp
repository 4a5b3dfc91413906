#include <doctest.h>

#include <cmath>

#include "support/gen.hpp"
#include "trafficsym/catalog.hpp"
#include "trafficsym/lie.hpp"

using namespace trafficsym;
using lie::LieCoeffs;

namespace {

LieCoeffs e(int i) { return LieCoeffs::basis(i); }

LieCoeffs from_row(const Eigen::RowVector4d& r) { return LieCoeffs{{r(0), r(1), r(2), r(3)}}; }

Eigen::RowVector4d row(const LieCoeffs& w) { return {w[0], w[1], w[2], w[3]}; }

double gap(const LieCoeffs& a, const LieCoeffs& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("commutator table") {
  // [S_i, S_j] for i, j = 1..4, written as coefficient rows.
  const LieCoeffs zero{};
  const LieCoeffs table[4][4] = {
      {zero, e(2) * -1.0, zero, e(4) * -1.0},
      {e(2), zero, e(4), zero},
      {zero, e(4) * -1.0, zero, zero},
      {e(4), zero, zero, zero},
  };
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(lie::commutator(e(i), e(j)) == table[i - 1][j - 1]);
    }
  }
  CHECK(lie::commutator(e(2), e(1)) == e(2));
}

TEST_CASE("structure constants are exact integers and antisymmetric") {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        CHECK(lie::structure_constant(i, j, k) == -lie::structure_constant(j, i, k));
      }
    }
  }
}

TEST_CASE("bracket is bilinear, antisymmetric and satisfies Jacobi") {
  testing::Gen g(11);
  for (int n = 0; n < 200; ++n) {
    const LieCoeffs a = g.lie_element(), b = g.lie_element(), c = g.lie_element();
    const double s = g.uniform(-2, 2);
    CHECK(gap(lie::commutator(a, b), lie::commutator(b, a) * -1.0) < 1e-12);
    CHECK(gap(lie::commutator(a * s + c, b), lie::commutator(a, b) * s + lie::commutator(c, b)) <
          1e-12);
    const LieCoeffs jac = lie::commutator(a, lie::commutator(b, c)) +
                          lie::commutator(b, lie::commutator(c, a)) +
                          lie::commutator(c, lie::commutator(a, b));
    CHECK(jac.max_abs() < 1e-12);
  }
}

TEST_CASE("ad matrix reproduces the bracket") {
  testing::Gen g(12);
  for (int n = 0; n < 50; ++n) {
    const LieCoeffs a = g.lie_element(), b = g.lie_element();
    const Eigen::Vector4d col = lie::ad_matrix(a) * Eigen::Vector4d(b[0], b[1], b[2], b[3]);
    CHECK(gap(from_row(col.transpose()), lie::commutator(a, b)) < 1e-12);
  }
}

TEST_CASE("Killing form equals 2 w1^2 on the diagonal") {
  CHECK(lie::killing_form(LieCoeffs{{1, 2, 3, 4}}, LieCoeffs{{1, 2, 3, 4}}) == 2.0);
  testing::Gen g(13);
  for (int n = 0; n < 100; ++n) {
    const LieCoeffs w = g.lie_element();
    CHECK(std::abs(lie::killing_form(w, w) - 2 * w[0] * w[0]) <= 1e-12);
    const LieCoeffs v = g.lie_element();
    CHECK(std::abs(lie::killing_form(w, v) - 2 * w[0] * v[0]) <= 1e-12);
  }
}

TEST_CASE("adjoint matrices agree with the exponential series") {
  // ad(S_i)^2 S_j vanishes except for the dilation, so the three-term series
  // is exact off i = 1 and accurate to eps^3 on it.
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      const double eps = 0.2;
      if (i == 1 && (j == 2 || j == 4)) {
        CHECK(lie::adjoint_series_check(i, j, eps) < 2e-3);
        const LieCoeffs full = lie::adjoint_series(i, j, eps, 30);
        CHECK(gap(full, from_row(lie::adjoint_exp_matrix(i, eps).row(j - 1))) < 1e-14);
      } else {
        CHECK(lie::adjoint_series_check(i, j, eps) < 1e-15);
      }
    }
  }
}

TEST_CASE("adjoint matrices are one-parameter groups") {
  for (int i = 1; i <= 4; ++i) {
    const Eigen::Matrix4d prod = lie::adjoint_exp_matrix(i, 0.3) * lie::adjoint_exp_matrix(i, 0.4);
    CHECK((prod - lie::adjoint_exp_matrix(i, 0.7)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((lie::adjoint_exp_matrix(i, 0.0) - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("adjoint_apply matches the matrix product and preserves the Killing form") {
  testing::Gen g(14);
  for (int n = 0; n < 200; ++n) {
    const LieCoeffs w = g.lie_element();
    const lie::AdjointParams p = g.adjoint_params();
    const LieCoeffs closed = lie::adjoint_apply(p, w);
    CHECK(gap(closed, from_row(row(w) * lie::adjoint_composite(p))) < 1e-12);
    CHECK(std::abs(lie::killing_form(closed, closed) - lie::killing_form(w, w)) < 1e-10);
  }
}

TEST_CASE("invariant tuples of the representatives") {
  CHECK(lie::invariant_tuple(e(3) + e(4)) == lie::InvariantTuple{0, 0, 1, 1, 0, 0});
  CHECK(lie::invariant_tuple(e(1) + e(4)) == lie::InvariantTuple{2, 1, 0, 1, 0, 0});
  CHECK(lie::invariant_tuple(e(1) + e(3) + e(4)) == lie::InvariantTuple{2, 1, 1, 1, 0, 0});
  CHECK(lie::invariant_tuple(e(2) + e(4)) == lie::InvariantTuple{0, 0, 0, 1, 1, 0});
}

TEST_CASE("classify_optimal on the documented example") {
  const lie::Classification c = lie::classify_optimal(LieCoeffs{{0, 0, 1, -0.7}});
  CHECK(c.cls.family == lie::Family::T1);
  CHECK(c.cls.b == -1);
  CHECK(lie::family_name(c.cls.family) == "T1");
  CHECK(c.cls.representative() == LieCoeffs{{0, 0, 1, -1}});
}

TEST_CASE("classify_optimal contract on random elements") {
  testing::Gen g(15);
  for (int n = 0; n < 500; ++n) {
    const LieCoeffs w = g.lie_element();
    CAPTURE(w.w);
    const lie::Classification c = lie::classify_optimal(w);
    const LieCoeffs reduced = lie::adjoint_apply(c.eps, w) * (1.0 / c.scale);
    CHECK(gap(reduced, c.cls.representative()) < 1e-9);
    CHECK(c.scale != 0.0);
    CHECK((c.cls.b >= -1 && c.cls.b <= 1));
  }
  CHECK_THROWS_AS(lie::classify_optimal(LieCoeffs{}), std::invalid_argument);
}

TEST_CASE("infinitesimals of the general generator") {
  const lie::Infinitesimals f = lie::infinitesimals({1, 2, 3, 4}, 0.5, 2.0, 3.0, 1.0);
  CHECK(f.Fx == doctest::Approx(0.5 + 3 * 2.0 + 4));
  CHECK(f.Ft == doctest::Approx(2.0 + 2));
  CHECK(f.Frho == doctest::Approx(-3.0));
  CHECK(f.Fu == doctest::Approx(3.0));
}

TEST_CASE("group transforms map verified solutions to verified solutions") {
  for (const CatalogEntry& e : default_catalog()) {
    if (verify_entry(e, default_region(e), 1e-10).status != Status::Verified) continue;
    GridSpec g = default_region(e);
    g.nx = g.nt = 21;
    for (int i = 1; i <= 4; ++i) {
      for (double eps : {-0.3, 0.3}) {
        CAPTURE(entry_id(e));
        CAPTURE(i);
        CAPTURE(eps);
        const SolutionSampler moved = lie::group_transform(i, eps, make_sampler(e));
        std::vector<std::pair<double, double>> pts;
        for (const auto& [x, t] : g.points()) {
          const auto m = lie::group_map_point(i, eps, x, t);
          pts.emplace_back(m[0], m[1]);
        }
        const VerifyReport r = verify_sampler(moved, e.model, pts, 1e-10);
        CHECK(r.status == Status::Verified);
      }
    }
  }
}

TEST_CASE("space translation shifts the T1 parameter p1 down by eps") {
  const CatalogEntry base = make_entry(T1Params{1, 2, 1});
  const SolutionSampler moved = lie::group_transform(4, 0.4, make_sampler(base));
  const SolutionSampler expect = make_sampler(make_entry(T1Params{1 - 0.4, 2, 1}));
  for (double x : {-2.0, 0.0, 1.5}) {
    for (double t : {0.5, 2.0}) {
      CHECK(moved.at(x, t).rho == doctest::Approx(expect.at(x, t).rho).epsilon(1e-14));
      CHECK(moved.at(x, t).u == doctest::Approx(expect.at(x, t).u).epsilon(1e-14));
    }
  }
}

TEST_CASE("group maps at eps = 0 are the identity") {
  const SolutionSampler s = make_sampler(make_entry(T3Params{2, 1}));
  for (int i = 1; i <= 4; ++i) {
    const SolutionSampler same = lie::group_transform(i, 0.0, s);
    CHECK(same.at(0.3, 1.2).rho == s.at(0.3, 1.2).rho);
    CHECK(same.at(0.3, 1.2).u == s.at(0.3, 1.2).u);
    const auto p = lie::group_map_point(i, 0.0, 0.3, 1.2);
    CHECK(p[0] == 0.3);
    CHECK(p[1] == 1.2);
  }
  CHECK_THROWS(lie::group_transform(5, 0.1, s));
}

TEST_CASE("invariant initial profile") {
  const lie::InfinitesimalParams p{2, 0, 1, 1};
  CHECK(lie::invariant_ic(p, 3.0, 0.5, lie::IcBranch::Reciprocal) == doctest::Approx(3.0 / 2.0));
  CHECK(lie::invariant_ic(p, 3.0, 0.5, lie::IcBranch::Power) ==
        doctest::Approx(3.0 * std::pow(2.0, 0.5)));
  CHECK_THROWS_AS(lie::invariant_ic({2, 1, 1, 1}, 1.0, 0.5, lie::IcBranch::Reciprocal),
                  std::invalid_argument);
}
