#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snlw/lattice.hpp"
#include "snlw/noise.hpp"
#include "snlw/objects.hpp"

namespace snlw {

/// (u, d_t u) at time t; both fields share one cutoff.
struct WaveState {
  double t = 0.0;
  SpectralField u;
  SpectralField ut;
};

struct SolveConfig {
  double alpha = 0.25;
  int noise_cutoff = 4;
  int galerkin_cutoff = -1;  // < 0 selects 2N
  double dt = 1e-3;
  int steps = 1;
  SpectralField u0;  // empty means zero data
  SpectralField u1;
  bool renormalize = true;
  bool cubic = true;
  /// Extra deterministic forcing f(t) added to the right-hand side.
  std::function<SpectralField(double)> forcing;
  /// Abort once ||u||_{H^1} exceeds this value.
  double blowup_ceiling = 1e8;
  /// Keep every k-th state (the final state is always kept).
  int record_every = 1;

  int galerkin() const { return galerkin_cutoff < 0 ? 2 * noise_cutoff : galerkin_cutoff; }
  double horizon() const { return dt * steps; }
};

/// Throws std::invalid_argument on inconsistent settings.
void validate(const SolveConfig& config);

/// Noise settings matching a solver configuration.
NoiseConfig noise_config(const SolveConfig& config, std::uint64_t seed, int substeps = 1);

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, double norm);
  double time() const { return time_; }
  double norm() const { return norm_; }

 private:
  double time_;
  double norm_;
};

/// Trigonometric integrator for
///   u_tt + (1 - Laplace) u = -u^3 + 3 sigma_N(t) u + f(t) + <nabla>^{-alpha} xi_N
/// projected onto |n| <= M: half kick, exact rotation plus the exact-step
/// noise increment, half kick. The counterterm uses sigma at the step
/// midpoint.
class TruncatedStepper {
 public:
  TruncatedStepper(const SolveConfig& config, const NoisePath& path);

  const WaveState& state() const { return state_; }
  int step() const { return step_; }
  bool done() const { return step_ >= config_.steps; }
  void advance();

 private:
  SpectralField force(const SpectralField& u, double sigma, double t) const;

  SolveConfig config_;
  const NoisePath* path_;
  int grid_;
  std::vector<double> sigma_mid_;
  WaveState state_;
  int step_ = 0;
};

/// Trigonometric integrator for the residual v = u - <1> + <30>. Writing
/// v = z + Psi with Psi = 3<320> - 3<70> + I(<30>^3), z solves a wave
/// equation forced by the remaining terms of the residual equation,
///   -v^3 + 3(<30> - <1>) v^2 - 3<30>^2 v + 6 (<30><1>) v - 3 <2> v,
/// which are evaluated pointwise on one zero-padded grid.
class ResidualStepper {
 public:
  ResidualStepper(const SolveConfig& config, const ObjectSnapshot& initial);

  /// Advances one step given the object snapshot at the new time and sigma
  /// at the step midpoint.
  void advance(const ObjectSnapshot& next, double sigma_mid);

  double time() const { return time_; }
  /// Current v = z + Psi.
  SpectralField residual() const;
  const SpectralField& psi() const { return psi_; }
  const SpectralField& z_velocity() const { return zt_; }

 private:
  SpectralField force(const SpectralField& v, const ObjectSnapshot& objects, double sigma) const;
  SpectralField cube30(const ObjectSnapshot& objects) const;

  SolveConfig config_;
  int grid_;
  SpectralField z_, zt_;
  SpectralField psi_;
  DuhamelStepper cubic30_;
  SpectralField cube30_now_;
  ObjectSnapshot current_;
  double time_ = 0.0;
};

/// Object members the residual solver reads.
ObjectMask residual_members();

/// Solutions of the truncated renormalized equation; with a zero path and
/// renormalize = false this is the deterministic cubic NLW.
std::vector<WaveState> solve_truncated(const SolveConfig& config, const NoisePath& path);

/// Deterministic NLW u_tt + (1 - Laplace) u + u^3 = f.
std::vector<WaveState> solve_nlw(const SolveConfig& config);

/// v trajectory (velocity slot holds z_t) from a prebuilt object set.
std::vector<WaveState> solve_residual(const SolveConfig& config, const ObjectSet& objects);

struct DecompositionReport {
  double regularity = 0.0;     // s of the H^s norm used
  double max_discrepancy = 0.0;
  double time_of_max = 0.0;
  double final_discrepancy = 0.0;
};

/// Runs both routes on one path in lockstep and measures
/// max_t ||u - (<1> - <30> + v)||_{H^s} with s = alpha - 1/2 - 0.1.
DecompositionReport decomposition_check(const SolveConfig& config, const NoisePath& path);

/// Smooth random trigonometric polynomial: Gaussian coefficients scaled by
/// amplitude * <n>^{-decay} on |n| <= cutoff.
SpectralField smooth_random_field(int cutoff, std::uint64_t seed, double amplitude, double decay = 3.0);

/// sum <n>^2 |u^|^2 + |u_t^|^2 over the ball.
double linear_energy(const SpectralField& u, const SpectralField& ut);

}  // namespace snlw
