#pragma once

#include <cstdint>
#include <vector>

#include "snlw/lattice.hpp"

namespace snlw {

/// Smoothed cylindrical Wiener process <nabla>^{-alpha} W restricted to
/// |n| <= cutoff, sampled on the grid t_k = k * dt.
///
/// Increments are generated on the fine grid dt / substeps and aggregated
/// exactly, so a path at (dt, substeps = 2) and a path at (dt / 2,
/// substeps = 1) are the same Brownian path viewed at two resolutions.
struct NoiseConfig {
  double alpha = 0.0;
  int cutoff = 1;
  double dt = 0.01;
  int steps = 1;
  std::uint64_t seed = 0;
  int substeps = 1;

  double horizon() const { return dt * steps; }
  double fine_dt() const { return dt / substeps; }
};

/// Throws std::invalid_argument on a malformed configuration.
void validate(const NoiseConfig& config);

/// Second moments over one step of length h of the triple
///   db  = B(h) - B(0),
///   pos = <n>^{-1-alpha} int_0^h sin((h-s)<n>) dB(s),
///   vel = <n>^{-alpha}   int_0^h cos((h-s)<n>) dB(s),
/// for a Brownian motion with E|B(h)|^2 = h. Entries are E[a conj(b)].
struct StepCovariance {
  double db_db = 0.0;
  double db_pos = 0.0;
  double db_vel = 0.0;
  double pos_pos = 0.0;
  double pos_vel = 0.0;
  double vel_vel = 0.0;
};

StepCovariance convolution_step_covariance(double omega, double alpha, double h);

struct StepIncrement {
  Complex db;
  Complex pos;
  Complex vel;
};

/// Draws the step triple for mode n on fine step `step`. Deterministic in
/// (seed, n, step); the mirror mode -n gets the complex conjugate. For n != 0
/// real and imaginary parts are independent with half the covariance each;
/// the zero mode is real.
StepIncrement convolution_step_increments(FreqIndex n, double alpha, double h, std::uint64_t seed,
                                          std::uint64_t step);

/// Exact-step noise for a whole horizon: one StepIncrement per (step, free
/// mode).
class NoisePath {
 public:
  NoisePath() = default;

  const NoiseConfig& config() const { return config_; }
  const std::vector<FreqIndex>& modes() const { return free_modes(config_.cutoff); }

  /// Increment of free mode `index` (position in modes()) over step k.
  const StepIncrement& increment(int step, std::size_t index) const {
    return increments_[static_cast<std::size_t>(step) * modes().size() + index];
  }
  /// Increment of an arbitrary mode over step k; conjugated for mirrors and
  /// zero outside the ball.
  StepIncrement increment(int step, FreqIndex n) const;

  bool is_zero() const { return zero_; }

  /// Path restricted to |n| <= cutoff.
  NoisePath project(int cutoff) const;

  /// A path whose increments are all zero (deterministic runs).
  static NoisePath zero(const NoiseConfig& config);

  /// Number of Philox blocks consumed to build the path.
  std::uint64_t rng_blocks() const { return rng_blocks_; }

  friend NoisePath sample_path(const NoiseConfig& config);

 private:
  NoiseConfig config_;
  std::vector<StepIncrement> increments_;
  std::vector<std::int32_t> free_index_;  // cube offset -> free index or -1
  bool zero_ = false;
  std::uint64_t rng_blocks_ = 0;

  void build_index();
};

NoisePath sample_path(const NoiseConfig& config);

}  // namespace snlw

namespace snlw {

/// Seed of replica r in an ensemble started from `seed` (SplitMix64 of the
/// pair), so neighbouring ensemble seeds do not share replicas.
std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica);

}  // namespace snlw
