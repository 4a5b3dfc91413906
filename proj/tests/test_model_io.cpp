#include <doctest.h>

#include <cmath>
#include <limits>

#include "support/gen.hpp"
#include "trafficsym/catalog.hpp"
#include "trafficsym/error.hpp"
#include "trafficsym/io.hpp"
#include "trafficsym/model.hpp"

using namespace trafficsym;

TEST_CASE("characteristic speeds and eigenvectors") {
  testing::Gen g(21);
  for (int n = 0; n < 50; ++n) {
    const ModelParams p{g.uniform(0.1, 4), 0.0};
    const StatePoint s{g.uniform(0.1, 3), g.uniform(-2, 2)};
    const auto lam = characteristic_speeds(p, s);
    CHECK(lam[0] == doctest::Approx(s.u - std::sqrt(p.A)));
    CHECK(lam[1] == doctest::Approx(s.u + std::sqrt(p.A)));
    const auto B = characteristic_matrix(p, s);
    const Eigenvectors ev = characteristic_eigenvectors(p, s);
    for (int k = 0; k < 2; ++k) {
      const auto& r = k == 0 ? ev.r1 : ev.r2;
      const auto& l = k == 0 ? ev.l1 : ev.l2;
      for (int i = 0; i < 2; ++i) {
        const double Br = B[i][0] * r[0] + B[i][1] * r[1];
        CHECK(Br == doctest::Approx(lam[k] * r[i]).epsilon(1e-12));
        const double lB = l[0] * B[0][i] + l[1] * B[1][i];
        CHECK(lB == doctest::Approx(lam[k] * l[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("pressure closure") {
  const ModelParams p{2.0, 0.5};
  CHECK(pressure(p, {3.0, 1.0}, 4.0) == doctest::Approx(2.0 * 3.0 - 0.5 * 4.0));
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS((ModelParams{-1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1.0, -1.0}.validate()), std::invalid_argument);
  ModelParams relax;
  relax.relaxation_R = 1.0;
  CHECK_THROWS_AS(relax.validate(), std::invalid_argument);
  CHECK_NOTHROW((ModelParams{0.0, 0.0}.validate()));
}

TEST_CASE("finite-difference partials agree with closed forms") {
  const CatalogEntry e = make_entry(T3Params{});
  const SolutionSampler s = make_sampler(e);
  const Partials exact = s.partials(0.4, 1.3);
  double prev = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double h = 0.02 / (1 << k);
    const Partials fd = finite_difference_partials(s, 0.4, 1.3, 4, h);
    CHECK(fd.source == PartialsSource::FiniteDifference);
    const double err = std::abs(fd.rho_x - exact.rho_x) + std::abs(fd.u_t - exact.u_t) +
                       std::abs(fd.rho_t - exact.rho_t);
    if (k > 0) CHECK(std::log2(prev / err) > 3.5);
    prev = err;
  }
  CHECK_THROWS_AS(finite_difference_partials(s, 0.4, 1.3, 3, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(finite_difference_partials(s, 0.0, 0.001, 2, 0.01), DomainError);
}

TEST_CASE("sampler enforces its domain") {
  const SolutionSampler s = make_sampler(make_entry(T3Params{}));
  CHECK_THROWS_AS(s.at(0.0, -1.0), DomainError);
}

TEST_CASE("double formatting round-trips") {
  testing::Gen g(22);
  for (int n = 0; n < 1000; ++n) {
    const double v = g.uniform(-1, 1) * std::pow(10.0, g.integer(-300, 300));
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK_THROWS_AS(io::parse_double("1.5x"), ParseError);
  CHECK_THROWS_AS(io::parse_double(""), ParseError);
}

TEST_CASE("csv table layout") {
  io::CsvTable t({"x", "y"});
  t.add_row({1.0, 0.5});
  t.add_row({std::numeric_limits<double>::quiet_NaN(), -2.0});
  CHECK(t.str() == "x,y\n1,0.5\nnan,-2\n");
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("sha256 digest") {
  CHECK(io::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
