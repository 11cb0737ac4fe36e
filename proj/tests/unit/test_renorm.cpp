#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "snlw/renorm.hpp"

using namespace snlw;

namespace {

// int_0^t [sin((t - s) w) / w^{1 + a}]^2 ds by Simpson's rule.
double variance_quadrature(double w, double t, double alpha, int k = 20000) {
  const double h = t / k;
  double acc = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double f = std::pow(std::sin((t - i * h) * w) / std::pow(w, 1.0 + alpha), 2);
    acc += f * (i == 0 || i == k ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return acc * h / 3.0;
}

SpectralField random_field(int cutoff, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SpectralField f(cutoff);
  for (const FreqIndex& n : free_modes(cutoff))
    f.set(n, n == FreqIndex{} ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng)));
  return f;
}

}  // namespace

TEST_CASE("mode variance") {
  CHECK(mode_variance({1, 2, 3}, 0.0, 0.25) == 0.0);
  CHECK(mode_variance({1, 1, 1}, 1.0, 0.5) == doctest::Approx(0.07433).epsilon(1e-4));
  CHECK(mode_variance({1, 1, 1}, 1.0, 0.5) == doctest::Approx(variance_quadrature(2.0, 1.0, 0.5)).epsilon(1e-10));
  for (double a : {0.0, 0.25, 0.5})
    for (double t : {0.3, 1.0, 2.5})
      for (int n2 : {0, 1, 5, 30})
        CHECK(mode_variance_norm2(n2, t, a) ==
              doctest::Approx(variance_quadrature(bracket_of_norm2(n2), t, a)).epsilon(1e-9));
}

TEST_CASE("sigma") {
  CHECK(sigma(0.0, 8, 0.25) == 0.0);
  CHECK(mode_variance({0, 0, 0}, std::numbers::pi, 0.3) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  double direct = 0.0;
  for (const FreqIndex& n : ball_modes(5)) direct += mode_variance(n, 0.8, 0.25);
  CHECK(sigma(0.8, 5, 0.25) == doctest::Approx(direct).epsilon(1e-13));
  // Each summand is nondecreasing in t.
  double prev = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double s = sigma(0.05 * k, 4, 0.25);
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("sigma grows like t log N at alpha = 1/2") {
  std::vector<double> r;
  for (int n : {8, 16, 32, 64}) r.push_back(sigma(1.0, n, 0.5) / std::log(static_cast<double>(n)));
  // Increments of the ratio shrink, and the limit is positive.
  for (std::size_t i = 2; i < r.size(); ++i) CHECK(std::abs(r[i] - r[i - 1]) < std::abs(r[i - 1] - r[i - 2]));
  CHECK(r.back() > 0.0);
}

TEST_CASE("sigma table") {
  const std::vector<double> times{0.0, 0.25, 0.5, 1.0};
  const SigmaTable t = sigma_table(0.25, 4, times);
  REQUIRE(t.values.size() == 4);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(t.values[i] == sigma(times[i], 4, 0.25));
}

TEST_CASE("field covariance") {
  CHECK(field_covariance(4, 0.25, 1.0, {0, 0, 0}) == doctest::Approx(sigma(1.0, 4, 0.25)).epsilon(1e-13));
  const std::array<double, 3> r{0.3, -1.1, 2.0};
  double direct = 0.0;
  for (const FreqIndex& n : ball_modes(3)) direct += mode_variance(n, 0.7, 0.25) * std::cos(n.x * r[0] + n.y * r[1] + n.z * r[2]);
  CHECK(field_covariance(3, 0.25, 0.7, r) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("Wick powers at constant argument") {
  const SpectralField zero(2);
  const SpectralField w2 = wick_square(zero, 1.0);
  CHECK(std::abs(w2({0, 0, 0}) + 1.0) < 1e-15);
  CHECK(std::abs(w2({1, 0, 0})) < 1e-15);
  CHECK(w2.cutoff() == 4);
  const SpectralField c = SpectralField::constant(2, 1.5);
  CHECK(std::abs(wick_square(c, 0.4)({0, 0, 0}) - (2.25 - 0.4)) < 1e-14);
  CHECK(std::abs(wick_cube(c, 0.4)({0, 0, 0}) - (3.375 - 3 * 0.4 * 1.5)) < 1e-14);
  CHECK(wick_cube(c, 0.4).cutoff() == 6);
  std::vector<double> v{2.0, -1.0};
  wick_cube_inplace(v, 0.5);
  CHECK(v[0] == doctest::Approx(8.0 - 3.0));
  CHECK(v[1] == doctest::Approx(-1.0 + 1.5));
}

TEST_CASE("Hermite identity H3 = H1 H2 - 2 sigma H1") {
  const SpectralField u = random_field(2, 3);
  const double s = 0.8;
  const SpectralField lhs = wick_cube(u, s);
  const SpectralField w2u = wick_square(u, s);
  SpectralField rhs = dealiased_product({std::cref(u), std::cref(w2u)}, 6);
  rhs.axpy(-2.0 * s, embed(u, 6));
  double d = 0.0;
  for (const FreqIndex& n : ball_modes(6)) d = std::max(d, std::abs(lhs(n) - rhs(n)));
  CHECK(d < 1e-12);
}
