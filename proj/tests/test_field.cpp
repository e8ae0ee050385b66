#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <json.hpp>

#include "dnls/field.hpp"
#include "dnls/io.hpp"
#include "oracles.hpp"

using namespace dnls;
using doctest::Approx;

namespace {

Field single_mode(const TorusGrid& grid, int k, Complex amplitude = Complex(1, 0)) {
  std::vector<Complex> c(grid.n, Complex(0, 0));
  c[grid.index_of(k)] = amplitude;
  return Field::from_coefficients(grid, std::move(c));
}

Field from_function(const TorusGrid& grid, Complex (*f)(double)) {
  std::vector<Complex> s(grid.n);
  for (int j = 0; j < grid.n; ++j) s[j] = f(grid.points[j]);
  return Field::from_samples(grid, std::move(s));
}

double max_sample_error(const Field& a, const Field& b) {
  double m = 0;
  for (int j = 0; j < a.size(); ++j)
    m = std::max(m, std::abs(a.samples()[j] - b.samples()[j]));
  return m;
}

}  // namespace

TEST_CASE("make_grid basics") {
  const TorusGrid g = make_grid(8);
  CHECK(g.n == 8);
  CHECK(g.points[0] == 0.0);
  CHECK(g.points[1] == Approx(kTwoPi / 8).epsilon(1e-15));
  CHECK(g.points[7] == Approx(7 * kTwoPi / 8).epsilon(1e-15));
  CHECK(g.wavenumbers.front() == -4);
  CHECK(g.wavenumbers.back() == 3);

  CHECK_THROWS_AS(make_grid(7), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(6), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-8), std::invalid_argument);

  const TorusGrid g256 = make_grid(256);
  CHECK(g256.spacing() == Approx(kTwoPi / 256).epsilon(1e-16));
  for (int j = 0; j + 1 < 256; ++j)
    CHECK(g256.points[j + 1] - g256.points[j] == Approx(g256.spacing()).epsilon(1e-13));
}

TEST_CASE("transforms match the direct DFT oracle and round-trip") {
  const TorusGrid g = make_grid(64);

  SUBCASE("basis function e^{ix}") {
    const Field f = from_function(g, [](double x) { return std::polar(1.0, x); });
    for (int i = 0; i < g.n; ++i) {
      const Complex expect = g.wavenumbers[i] == 1 ? Complex(1, 0) : Complex(0, 0);
      CHECK(std::abs(f.coefficients()[i] - expect) < 1e-14);
    }
  }

  SUBCASE("constant") {
    const Field f = from_function(g, [](double) { return Complex(1.0, 0.0); });
    CHECK(std::abs(f.coefficient(0) - Complex(1, 0)) < 1e-14);
    CHECK(std::abs(f.coefficient(3)) < 1e-14);
  }

  SUBCASE("random samples: oracle agreement and round-trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Complex> s(g.n);
    for (auto& v : s) v = Complex(dist(rng), dist(rng));
    const Field f = Field::from_samples(g, s);

    const auto oracle = testing::direct_coefficients(g, s);
    for (int i = 0; i < g.n; ++i)
      CHECK(std::abs(f.coefficients()[i] - oracle[i]) < 1e-12);

    const Field back = Field::from_coefficients(g, f.coefficients());
    CHECK(max_sample_error(f, back) < 1e-12);
  }

  SUBCASE("Parseval") {
    const Field f = random_zero_mean(g, 11, 20, 1.0);
    double coeff_sum = 0;
    for (const auto& c : f.coefficients()) coeff_sum += std::norm(c);
    const double l2 = norm(f, 2.0);
    CHECK(coeff_sum == Approx(l2 * l2 / kTwoPi).epsilon(1e-12));
  }
}

TEST_CASE("derivative") {
  const TorusGrid g = make_grid(64);

  SUBCASE("eigenfunction") {
    const Field f = single_mode(g, 1);
    const Field d = derivative(f);
    CHECK(std::abs(d.coefficient(1) - Complex(0, 1)) < 1e-15);
    for (int j = 0; j < g.n; ++j)
      CHECK(std::abs(d.samples()[j] - Complex(0, 1) * f.samples()[j]) < 1e-13);
  }

  SUBCASE("constant maps to zero") {
    const Field f = single_mode(g, 0);
    CHECK(norm(derivative(f), std::numeric_limits<double>::infinity()) < 1e-14);
  }

  SUBCASE("cos(2x) -> -2 sin(2x)") {
    const Field f = from_function(g, [](double x) { return Complex(std::cos(2 * x), 0); });
    const Field d = derivative(f);
    double worst = 0;
    for (int j = 0; j < g.n; ++j)
      worst = std::max(worst, std::abs(d.samples()[j] - Complex(-2 * std::sin(2 * g.points[j]), 0)));
    CHECK(worst < 1e-12);
  }

  SUBCASE("Nyquist mode is zeroed") {
    const Field f = single_mode(g, -32);
    CHECK(norm(derivative(f), 2.0) == 0.0);
  }
}

TEST_CASE("antiderivative_from_zero") {
  const TorusGrid g = make_grid(64);

  SUBCASE("e^{ix}: V(x) = (e^{ix} - 1)/i, V(pi) = 2i") {
    const Field f = single_mode(g, 1);
    const Field v = antiderivative_from_zero(f);
    CHECK(v.samples()[0] == Complex(0, 0));  // exact
    const Complex at_pi = v.samples()[g.n / 2];
    CHECK(std::abs(at_pi - Complex(0, 2)) < 1e-13);
    for (int j = 0; j < g.n; ++j) {
      const Complex expect = (std::polar(1.0, g.points[j]) - 1.0) / Complex(0, 1);
      CHECK(std::abs(v.samples()[j] - expect) < 1e-13);
    }
  }

  SUBCASE("zero field") {
    const Field f = single_mode(g, 1, Complex(0, 0));
    const Field v = antiderivative_from_zero(f);
    CHECK(norm(v, std::numeric_limits<double>::infinity()) == 0.0);
  }

  SUBCASE("cos x -> sin x") {
    const Field f = from_function(g, [](double x) { return Complex(std::cos(x), 0); });
    const Field v = antiderivative_from_zero(f);
    double worst = 0;
    for (int j = 0; j < g.n; ++j)
      worst = std::max(worst, std::abs(v.samples()[j] - Complex(std::sin(g.points[j]), 0)));
    CHECK(worst < 1e-13);
  }

  SUBCASE("rejects nonzero mean") {
    const Field f = from_function(g, [](double) { return Complex(1.0, 0.0); });
    CHECK_THROWS_AS(antiderivative_from_zero(f), std::invalid_argument);
  }

  SUBCASE("derivative inverts it on zero-mean band-limited fields") {
    const Field f = random_zero_mean(g, 3, 12, 1.5);
    const Field back = derivative(antiderivative_from_zero(f));
    double num = 0, den = 0;
    for (int j = 0; j < g.n; ++j) {
      num += std::norm(back.samples()[j] - f.samples()[j]);
      den += std::norm(f.samples()[j]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
  }
}

TEST_CASE("norm") {
  const TorusGrid g = make_grid(64);
  const double inf = std::numeric_limits<double>::infinity();

  SUBCASE("|e^{ix}| = 1: L4 norm is (2pi)^{1/4}") {
    const Field f = single_mode(g, 1);
    CHECK(norm(f, 4.0) == Approx(std::pow(kTwoPi, 0.25)).epsilon(1e-13));
    CHECK(norm(f, inf) == Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("zero field") {
    const Field f = single_mode(g, 1, Complex(0, 0));
    CHECK(norm(f, 1.0) == 0.0);
    CHECK(norm(f, inf) == 0.0);
  }

  SUBCASE("cos x: L2 norm is sqrt(pi)") {
    const Field f = from_function(g, [](double x) { return Complex(std::cos(x), 0); });
    CHECK(norm(f, 2.0) == Approx(std::sqrt(kTwoPi / 2)).epsilon(1e-12));
  }

  SUBCASE("rejects q < 1") {
    const Field f = single_mode(g, 1);
    CHECK_THROWS_AS(norm(f, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(norm(f, -2.0), std::invalid_argument);
  }
}

TEST_CASE("random_zero_mean") {
  const TorusGrid g = make_grid(128);

  SUBCASE("zero mean by construction") {
    for (std::uint64_t seed : {1u, 2u, 42u}) {
      const Field f = random_zero_mean(g, seed, 20, 1.5);
      CHECK(std::abs(f.coefficient(0)) < 1e-300);
      CHECK(f.is_zero_mean());
    }
  }

  SUBCASE("deterministic in the seed") {
    const Field a = random_zero_mean(g, 9, 10, 2.0);
    const Field b = random_zero_mean(g, 9, 10, 2.0);
    CHECK(a.coefficients() == b.coefficients());
  }

  SUBCASE("magnitude follows |k|^{-decay}") {
    const Field f = random_zero_mean(g, 4, 10, 2.0);
    CHECK(std::abs(f.coefficient(10)) / std::abs(f.coefficient(1)) == Approx(1e-2).epsilon(1e-12));
  }

  SUBCASE("rejects n_modes >= n/2") {
    CHECK_THROWS_AS(random_zero_mean(g, 1, 64, 1.0), std::invalid_argument);
  }
}

TEST_CASE("norms are invariant under spectral grid refinement") {
  // |f| must stay away from zero: |f|^q with fractional q loses spectral
  // quadrature accuracy at near-zeros of f
  const TorusGrid g = make_grid(128);
  const Field bumps = random_zero_mean(g, 17, 8, 2.0);
  std::vector<Complex> c = bumps.coefficients();
  c[g.index_of(0)] = Complex(4.0, 0.0);
  const Field f = Field::from_coefficients(g, std::move(c));

  const Field fine = resample(f, 256);
  for (double q : {1.0, 2.0, 2.5, 4.0}) {
    CAPTURE(q);
    CHECK(norm(fine, q) == Approx(norm(f, q)).epsilon(1e-10));
  }
  // the refined grid contains the coarse points, so the grid sup can only grow
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(norm(fine, inf) >= norm(f, inf) - 1e-14);
}

TEST_CASE("field JSON round-trips bit-exactly and lists only nonzero modes") {
  const TorusGrid g = make_grid(64);
  const Field f = random_zero_mean(g, 23, 5, 1.0);

  const auto j = io::field_to_json(f);
  CHECK(j["n"] == 64);
  CHECK(j["coefficients"].size() == 10);  // 5 positive + 5 negative modes

  const std::string text = j.dump();
  const Field back = io::field_from_json(nlohmann::json::parse(text));
  CHECK(back.coefficients() == f.coefficients());

  const Field mode = single_mode(g, 3, Complex(0.125, -0.75));
  const Field mode_back =
      io::field_from_json(nlohmann::json::parse(io::field_to_json(mode).dump()));
  CHECK(mode_back.coefficients() == mode.coefficients());
}
