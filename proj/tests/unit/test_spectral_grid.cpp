#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "snlw/spectral_grid.hpp"

using namespace snlw;

namespace {

SpectralField random_field(int cutoff, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SpectralField f(cutoff);
  for (const FreqIndex& n : free_modes(cutoff))
    f.set(n, n == FreqIndex{} ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng)));
  return f;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double d = 0.0;
  for (const FreqIndex& n : ball_modes(a.cutoff())) d = std::max(d, std::abs(a(n) - b(n)));
  return d;
}

// Direct convolution over the balls, truncated at n_out.
SpectralField brute_product(const std::vector<SpectralField>& fs, int n_out) {
  SpectralField acc = SpectralField::constant(n_out, 1.0);
  int reach = 0;
  for (const auto& f : fs) {
    reach += f.cutoff();
    SpectralField next(reach);
    const SpectralField prev = resize(acc, reach - f.cutoff());
    for (const FreqIndex& a : ball_modes(prev.cutoff()))
      for (const FreqIndex& b : ball_modes(f.cutoff())) {
        const FreqIndex c = a + b;
        if (c.norm2() > reach * reach) continue;
        next.raw()[next.offset(c)] += prev(a) * f(b);
      }
    acc = next;
  }
  return resize(acc, n_out);
}

}  // namespace

TEST_CASE("fft sizes") {
  CHECK(smooth_fft_size(11) == 12);
  CHECK(smooth_fft_size(13) == 14);
  CHECK(smooth_fft_size(17) == 18);
  CHECK(smooth_fft_size(11 * 13) == 144);
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= 6; ++n) {
      std::vector<int> c(static_cast<std::size_t>(k), n);
      CHECK(dealiasing_grid_size(c, n) >= k * n + n + 1);
    }
}

TEST_CASE("round trip and Parseval") {
  for (int n : {1, 3, 6}) {
    const SpectralField f = random_field(n, 10u + static_cast<unsigned>(n));
    const PhysicalGrid g = to_physical(f, smooth_fft_size(2 * n + 3));
    const SpectralField back = to_spectral(g, n);
    double scale = 0.0, l2 = 0.0;
    for (const FreqIndex& m : ball_modes(n)) {
      scale = std::max(scale, std::abs(f(m)));
      l2 += std::norm(f(m));
    }
    CHECK(max_diff(back, f) <= 1e-12 * scale);
    double avg = 0.0;
    for (double v : g.values()) avg += v * v;
    avg /= static_cast<double>(g.values().size());
    CHECK(avg == doctest::Approx(l2).epsilon(1e-12));
    CHECK(back.hermitian_defect() == 0.0);
  }
}

TEST_CASE("product with the constant field") {
  const SpectralField f = random_field(3, 4);
  const SpectralField one = SpectralField::constant(1, 1.0);
  CHECK(max_diff(dealiased_product({f, one}, 2), project(f, 2)) < 1e-13);
}

TEST_CASE("product of single modes") {
  const FreqIndex n{1, 0, 0}, m{0, 1, 1};
  const SpectralField a = SpectralField::single_mode(2, n, Complex(1.0, 0.5));
  const SpectralField b = SpectralField::single_mode(2, m, Complex(-0.5, 2.0));
  const SpectralField p = dealiased_product({a, b}, 3);
  CHECK(std::abs(p(n + m) - Complex(1.0, 0.5) * Complex(-0.5, 2.0)) < 1e-14);
  CHECK(std::abs(p(n - m) - Complex(1.0, 0.5) * std::conj(Complex(-0.5, 2.0))) < 1e-14);
  CHECK(std::abs(p({0, 0, 0})) < 1e-14);
}

TEST_CASE("triple product matches the brute-force convolution") {
  const SpectralField a = random_field(2, 5), b = random_field(2, 6), c = random_field(2, 7);
  const SpectralField p = dealiased_product({a, b, c}, 2);
  CHECK(max_diff(p, brute_product({a, b, c}, 2)) < 1e-11);
  CHECK(max_diff(p, dealiased_product({c, a, b}, 2)) < 1e-12);
  CHECK(p.hermitian_defect() < 1e-15);
}

TEST_CASE("products for all small cutoffs") {
  for (int na = 1; na <= 3; ++na)
    for (int nb = 1; nb <= 3; ++nb) {
      const SpectralField a = random_field(na, 20u + static_cast<unsigned>(na));
      const SpectralField b = random_field(nb, 30u + static_cast<unsigned>(nb));
      const int out = na + nb;
      const SpectralField p = dealiased_product({a, b}, out);
      CHECK(max_diff(p, brute_product({a, b}, out)) < 1e-11);
      CHECK(max_diff(p, dealiased_product({b, a}, out)) < 1e-12);
    }
}

TEST_CASE("product_on_grid checks the dealiasing condition") {
  const SpectralField a = random_field(3, 8);
  const SpectralField* fs[] = {&a, &a};
  CHECK_THROWS_AS(product_on_grid(fs, 3, 9), std::invalid_argument);
  const SpectralField ok = product_on_grid(fs, 3, 10);
  CHECK(max_diff(ok, dealiased_product(fs, 3)) < 1e-12);
}
