#include "snlw/noise.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "snlw/detail/trig.hpp"
#include "snlw/philox.hpp"

namespace snlw {

namespace {

// Lower-triangular factor in the order (vel, pos, db).
using Factor = std::array<double, 6>;  // l00, l10, l11, l20, l21, l22

Factor cholesky(const StepCovariance& c, double scale) {
  const double a00 = c.vel_vel * scale, a10 = c.pos_vel * scale, a11 = c.pos_pos * scale;
  const double a20 = c.db_vel * scale, a21 = c.db_pos * scale, a22 = c.db_db * scale;
  Factor l{};
  l[0] = std::sqrt(std::max(a00, 0.0));
  l[1] = l[0] > 0.0 ? a10 / l[0] : 0.0;
  const double p11 = a11 - l[1] * l[1];
  l[2] = p11 > 0.0 ? std::sqrt(p11) : 0.0;
  l[3] = l[0] > 0.0 ? a20 / l[0] : 0.0;
  l[4] = l[2] > 0.0 ? (a21 - l[3] * l[1]) / l[2] : 0.0;
  // The triple is nearly degenerate when h<n> is small; clamp round-off.
  const double p22 = a22 - l[3] * l[3] - l[4] * l[4];
  l[5] = p22 > 0.0 ? std::sqrt(p22) : 0.0;
  return l;
}

struct Draw {
  double vel, pos, db;
};

Draw correlate(const Factor& l, double z0, double z1, double z2) {
  return {l[0] * z0, l[1] * z0 + l[2] * z1, l[3] * z0 + l[4] * z1 + l[5] * z2};
}

std::uint32_t pack_mode(FreqIndex n) {
  const auto c = [](int v) { return static_cast<std::uint32_t>(v + 512) & 0x3ffu; };
  return (c(n.x) << 20) | (c(n.y) << 10) | c(n.z);
}

// Caches factors per |n|^2 for one (alpha, h).
class StepSampler {
 public:
  StepSampler(double alpha, double h) : alpha_(alpha), h_(h) {}

  StepIncrement draw(FreqIndex owner, std::uint64_t seed, std::uint64_t step) {
    const auto& f = factors(owner.norm2());
    const auto key = philox_key(seed);
    std::array<double, 6> z{};
    for (std::uint32_t b = 0; b < 3; ++b) {
      const Philox4x32::Counter ctr{pack_mode(owner), static_cast<std::uint32_t>(step),
                                    static_cast<std::uint32_t>(step >> 32), b};
      const auto pair = normal_pair(Philox4x32::block(ctr, key));
      z[2 * b] = pair[0];
      z[2 * b + 1] = pair[1];
    }
    if (owner == FreqIndex{}) {
      const Draw re = correlate(f.zero, z[0], z[1], z[2]);
      return {re.db, re.pos, re.vel};
    }
    const Draw re = correlate(f.half, z[0], z[1], z[2]);
    const Draw im = correlate(f.half, z[3], z[4], z[5]);
    return {{re.db, im.db}, {re.pos, im.pos}, {re.vel, im.vel}};
  }

 private:
  struct Factors {
    Factor half;
    Factor zero;
  };
  const Factors& factors(int norm2) {
    auto it = cache_.find(norm2);
    if (it == cache_.end()) {
      const auto cov = convolution_step_covariance(bracket_of_norm2(norm2), alpha_, h_);
      it = cache_.emplace(norm2, Factors{cholesky(cov, 0.5), cholesky(cov, 1.0)}).first;
    }
    return it->second;
  }

  double alpha_;
  double h_;
  std::map<int, Factors> cache_;
};

}  // namespace

void validate(const NoiseConfig& c) {
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw std::invalid_argument("noise: alpha must be >= 0");
  if (c.cutoff < 1 || c.cutoff > 256) throw std::invalid_argument("noise: cutoff must be in [1, 256]");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw std::invalid_argument("noise: dt must be > 0");
  if (c.steps < 1) throw std::invalid_argument("noise: steps must be >= 1");
  if (c.substeps < 1) throw std::invalid_argument("noise: substeps must be >= 1");
}

StepCovariance convolution_step_covariance(double omega, double alpha, double h) {
  const double x = h * omega;
  const double wp = std::pow(omega, -1.0 - alpha);  // position weight
  const double wv = std::pow(omega, -alpha);        // velocity weight
  StepCovariance c;
  c.db_db = h;
  c.db_pos = wp * detail::one_minus_cos(x) / omega;
  c.db_vel = wv * std::sin(x) / omega;
  // int_0^h sin^2 = h/2 - sin(2x)/(4w) = (2x - sin 2x) / (4w)
  c.pos_pos = wp * wp * detail::x_minus_sin(2.0 * x) / (4.0 * omega);
  c.pos_vel = wp * wv * std::sin(x) * std::sin(x) / (2.0 * omega);
  c.vel_vel = wv * wv * (h / 2.0 + std::sin(2.0 * x) / (4.0 * omega));
  return c;
}

StepIncrement convolution_step_increments(FreqIndex n, double alpha, double h, std::uint64_t seed,
                                          std::uint64_t step) {
  if (!(h > 0.0)) throw std::invalid_argument("convolution_step_increments: h must be > 0");
  const bool mirror = !(n == FreqIndex{}) && !lex_positive(n);
  StepSampler sampler(alpha, h);
  StepIncrement inc = sampler.draw(mirror ? -n : n, seed, step);
  if (mirror) inc = {std::conj(inc.db), std::conj(inc.pos), std::conj(inc.vel)};
  return inc;
}

void NoisePath::build_index() {
  const int n = config_.cutoff;
  const auto side = static_cast<std::size_t>(2 * n + 1);
  free_index_.assign(side * side * side, -1);
  const auto& modes = free_modes(n);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const FreqIndex m = modes[i];
    const std::size_t off = (static_cast<std::size_t>(m.x + n) * side + static_cast<std::size_t>(m.y + n)) * side +
                            static_cast<std::size_t>(m.z + n);
    free_index_[off] = static_cast<std::int32_t>(i);
  }
}

StepIncrement NoisePath::increment(int step, FreqIndex n) const {
  const int c = config_.cutoff;
  if (n.norm2() > c * c) return {};
  const bool mirror = !(n == FreqIndex{}) && !lex_positive(n);
  const FreqIndex owner = mirror ? -n : n;
  const auto side = static_cast<std::size_t>(2 * c + 1);
  const std::size_t off = (static_cast<std::size_t>(owner.x + c) * side + static_cast<std::size_t>(owner.y + c)) *
                              side +
                          static_cast<std::size_t>(owner.z + c);
  const StepIncrement& inc = increment(step, static_cast<std::size_t>(free_index_[off]));
  if (!mirror) return inc;
  return {std::conj(inc.db), std::conj(inc.pos), std::conj(inc.vel)};
}

NoisePath NoisePath::zero(const NoiseConfig& config) {
  validate(config);
  NoisePath path;
  path.config_ = config;
  path.zero_ = true;
  path.increments_.assign(static_cast<std::size_t>(config.steps) * free_modes(config.cutoff).size(),
                          StepIncrement{});
  path.build_index();
  return path;
}

NoisePath NoisePath::project(int cutoff) const {
  if (cutoff > config_.cutoff) throw std::invalid_argument("NoisePath::project: cutoff exceeds path cutoff");
  NoisePath out;
  out.config_ = config_;
  out.config_.cutoff = cutoff;
  out.zero_ = zero_;
  out.build_index();
  const auto& modes = free_modes(cutoff);
  out.increments_.resize(static_cast<std::size_t>(config_.steps) * modes.size());
  for (int k = 0; k < config_.steps; ++k)
    for (std::size_t i = 0; i < modes.size(); ++i)
      out.increments_[static_cast<std::size_t>(k) * modes.size() + i] = increment(k, modes[i]);
  return out;
}

NoisePath sample_path(const NoiseConfig& config) {
  validate(config);
  NoisePath path;
  path.config_ = config;
  path.build_index();
  const auto& modes = free_modes(config.cutoff);
  const double h = config.fine_dt();
  StepSampler sampler(config.alpha, h);
  path.increments_.resize(static_cast<std::size_t>(config.steps) * modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const FreqIndex n = modes[i];
    const double w = bracket(n);
    const double c = std::cos(h * w), s = std::sin(h * w);
    for (int k = 0; k < config.steps; ++k) {
      StepIncrement acc{};
      for (int j = 0; j < config.substeps; ++j) {
        const auto fine = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(config.substeps) +
                          static_cast<std::uint64_t>(j);
        const StepIncrement x = sampler.draw(n, config.seed, fine);
        if (j == 0) {
          acc = x;
          continue;
        }
        // Propagate the accumulated convolution across the fine step.
        const Complex pos = c * acc.pos + (s / w) * acc.vel;
        const Complex vel = -w * s * acc.pos + c * acc.vel;
        acc = {acc.db + x.db, pos + x.pos, vel + x.vel};
      }
      path.increments_[static_cast<std::size_t>(k) * modes.size() + i] = acc;
    }
  }
  path.rng_blocks_ = 3ull * modes.size() * static_cast<std::uint64_t>(config.steps) *
                     static_cast<std::uint64_t>(config.substeps);
  return path;
}

}  // namespace snlw

namespace snlw {

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (replica + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace snlw
