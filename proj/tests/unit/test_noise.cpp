#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "snlw/noise.hpp"

using namespace snlw;

namespace {

NoiseConfig config(int cutoff, double dt, int steps, std::uint64_t seed, int substeps = 1) {
  NoiseConfig c;
  c.alpha = 0.25;
  c.cutoff = cutoff;
  c.dt = dt;
  c.steps = steps;
  c.seed = seed;
  c.substeps = substeps;
  return c;
}

bool same(const StepIncrement& a, const StepIncrement& b) {
  return a.db == b.db && a.pos == b.pos && a.vel == b.vel;
}

// Midpoint quadrature of the Ito isometry integrals.
StepCovariance quadrature(double w, double alpha, double h, int k = 20000) {
  StepCovariance c;
  const double wp = std::pow(w, -1.0 - alpha), wv = std::pow(w, -alpha);
  for (int i = 0; i < k; ++i) {
    const double s = (i + 0.5) * h / k;
    const double p = wp * std::sin((h - s) * w), v = wv * std::cos((h - s) * w);
    c.db_db += 1.0;
    c.db_pos += p;
    c.db_vel += v;
    c.pos_pos += p * p;
    c.pos_vel += p * v;
    c.vel_vel += v * v;
  }
  const double ds = h / k;
  return {c.db_db * ds, c.db_pos * ds, c.db_vel * ds, c.pos_pos * ds, c.pos_vel * ds, c.vel_vel * ds};
}

}  // namespace

TEST_CASE("step covariance closed form") {
  const auto c = convolution_step_covariance(1.0, 0.7, std::numbers::pi);
  CHECK(c.pos_pos == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  for (double w : {1.0, std::sqrt(2.0), 5.0}) {
    for (double h : {1e-3, 0.1, 2.0}) {
      const auto a = convolution_step_covariance(w, 0.25, h);
      const auto q = quadrature(w, 0.25, h);
      const double tol = 1e-7 * h;
      CHECK(a.db_db == doctest::Approx(q.db_db).epsilon(1e-12));
      CHECK(std::abs(a.db_pos - q.db_pos) < tol);
      CHECK(std::abs(a.db_vel - q.db_vel) < tol);
      CHECK(std::abs(a.pos_pos - q.pos_pos) < tol);
      CHECK(std::abs(a.pos_vel - q.pos_vel) < tol);
      CHECK(std::abs(a.vel_vel - q.vel_vel) < tol);
    }
  }
  const auto tiny = convolution_step_covariance(2.0, 0.25, 1e-9);
  CHECK(tiny.pos_pos < 1e-25);
  CHECK(tiny.vel_vel < 1e-8);
}

TEST_CASE("increments are addressed by seed, mode and step") {
  const NoisePath a = sample_path(config(4, 0.05, 6, 11));
  const NoisePath b = sample_path(config(8, 0.05, 6, 11));
  for (int k = 0; k < 6; ++k)
    for (const FreqIndex& n : ball_modes(4)) CHECK(same(a.increment(k, n), b.increment(k, n)));
  const NoisePath p = b.project(4);
  for (int k = 0; k < 6; ++k)
    for (std::size_t i = 0; i < a.modes().size(); ++i) CHECK(same(a.increment(k, i), p.increment(k, i)));
  const NoisePath again = sample_path(config(8, 0.05, 6, 11));
  for (int k = 0; k < 6; ++k)
    for (std::size_t i = 0; i < b.modes().size(); ++i) CHECK(same(b.increment(k, i), again.increment(k, i)));
  CHECK(same(a.increment(0, {9, 0, 0}), StepIncrement{}));
  CHECK_THROWS_AS(a.project(5), std::invalid_argument);
}

TEST_CASE("realness of the path") {
  const NoisePath a = sample_path(config(3, 0.1, 4, 2));
  for (int k = 0; k < 4; ++k) {
    const auto z = a.increment(k, FreqIndex{});
    CHECK(z.db.imag() == 0.0);
    CHECK(z.pos.imag() == 0.0);
    CHECK(z.vel.imag() == 0.0);
    const auto p = a.increment(k, {1, -2, 0});
    const auto m = a.increment(k, {-1, 2, 0});
    CHECK(m.db == std::conj(p.db));
    CHECK(m.vel == std::conj(p.vel));
  }
  const auto s = convolution_step_increments({0, -1, 2}, 0.25, 0.1, 3, 9);
  const auto t = convolution_step_increments({0, 1, -2}, 0.25, 0.1, 3, 9);
  CHECK(s.pos == std::conj(t.pos));
}

TEST_CASE("Brownian increments have variance dt") {
  const double h = 0.01;
  const int draws = 100000;
  double sum = 0.0, sum0 = 0.0;
  for (int k = 0; k < draws; ++k) {
    sum += std::norm(convolution_step_increments({1, 2, 0}, 0.25, h, 5, static_cast<std::uint64_t>(k)).db) / h;
    sum0 += std::norm(convolution_step_increments({0, 0, 0}, 0.25, h, 5, static_cast<std::uint64_t>(k)).db) / h;
  }
  // |db|^2/h is chi^2_2/2 (variance 1) for n != 0 and chi^2_1 (variance 2) for n = 0.
  CHECK(std::abs(sum / draws - 1.0) < 3.0 / std::sqrt(draws));
  CHECK(std::abs(sum0 / draws - 1.0) < 3.0 * std::sqrt(2.0 / draws));
}

TEST_CASE("sampled step covariance matches the closed form") {
  const FreqIndex n{1, 0, 0};
  const double h = 0.1, alpha = 0.25;
  const auto exact = convolution_step_covariance(bracket(n), alpha, h);
  const std::array<double, 6> want{exact.db_db, exact.db_pos, exact.db_vel, exact.pos_pos, exact.pos_vel,
                                   exact.vel_vel};
  std::array<double, 6> s{}, s2{};
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const auto x = convolution_step_increments(n, alpha, h, 77, static_cast<std::uint64_t>(k));
    const std::array<double, 6> v{std::real(x.db * std::conj(x.db)), std::real(x.db * std::conj(x.pos)),
                                  std::real(x.db * std::conj(x.vel)), std::real(x.pos * std::conj(x.pos)),
                                  std::real(x.pos * std::conj(x.vel)), std::real(x.vel * std::conj(x.vel))};
    for (int i = 0; i < 6; ++i) {
      s[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
      s2[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    }
  }
  for (std::size_t i = 0; i < 6; ++i) {
    const double mean = s[i] / draws;
    const double se = std::sqrt((s2[i] / draws - mean * mean) / draws);
    CHECK(std::abs(mean - want[i]) <= 3.0 * se);
  }
}

TEST_CASE("substeps aggregate the fine path exactly") {
  const NoisePath coarse = sample_path(config(2, 0.2, 3, 4, 2));
  const NoisePath fine = sample_path(config(2, 0.1, 6, 4, 1));
  for (std::size_t i = 0; i < coarse.modes().size(); ++i) {
    const double w = bracket(coarse.modes()[i]);
    const double c = std::cos(0.1 * w), s = std::sin(0.1 * w);
    for (int k = 0; k < 3; ++k) {
      const auto& a = fine.increment(2 * k, i);
      const auto& b = fine.increment(2 * k + 1, i);
      const auto& x = coarse.increment(k, i);
      CHECK(std::abs(x.db - (a.db + b.db)) < 1e-15);
      CHECK(std::abs(x.pos - (c * a.pos + s / w * a.vel + b.pos)) < 1e-15);
      CHECK(std::abs(x.vel - (-w * s * a.pos + c * a.vel + b.vel)) < 1e-15);
    }
  }
  CHECK(coarse.rng_blocks() == 3ull * coarse.modes().size() * 6);
}

TEST_CASE("zero path and validation") {
  const NoisePath z = NoisePath::zero(config(2, 0.1, 3, 0));
  CHECK(z.is_zero());
  CHECK(same(z.increment(1, {1, 1, 0}), StepIncrement{}));
  NoiseConfig bad = config(0, 0.1, 3, 0);
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = config(2, -0.1, 3, 0);
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = config(2, 0.1, 0, 0);
  CHECK_THROWS_AS(sample_path(bad), std::invalid_argument);
  CHECK(replica_seed(1, 0) != replica_seed(1, 1));
  CHECK(replica_seed(1, 0) != replica_seed(2, 0));
}
