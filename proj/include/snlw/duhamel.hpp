#pragma once

#include <vector>

#include "snlw/lattice.hpp"

namespace snlw {

/// Fields on the uniform time grid t_k = k * dt, k = 0..size()-1, sharing one
/// cutoff. Velocities are optional.
struct Trajectory {
  double dt = 0.0;
  std::vector<SpectralField> states;
  std::vector<SpectralField> velocities;

  std::size_t size() const { return states.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  int cutoff() const { return states.empty() ? 0 : states.front().cutoff(); }
};

/// Exact free propagation of (u, u_t) over h under u_tt + (1 - Laplace) u = 0,
/// applied per mode.
void propagate_linear(SpectralField& u, SpectralField& ut, double h);

/// S(t)(u0, u1) = cos(t<nabla>) u0 + sin(t<nabla>)/<nabla> u1.
SpectralField linear_solution(const SpectralField& u0, const SpectralField& u1, double t);

/// Streaming form of I = (d_t^2 + 1 - Laplace)^{-1} with zero data. Each step
/// applies the exact propagator and integrates sin((t-s)<n>)/<n> F(s) (and
/// its time derivative) exactly against the piecewise-linear interpolant of
/// the forcing, which makes the scheme second order with no step restriction.
class DuhamelStepper {
 public:
  DuhamelStepper(int cutoff, double dt);

  /// Advances t_k -> t_{k+1} given F(t_k) and F(t_{k+1}). Forcings may have
  /// any cutoff; modes beyond the stepper's cutoff are ignored.
  void advance(const SpectralField& forcing_now, const SpectralField& forcing_next);

  const SpectralField& position() const { return position_; }
  const SpectralField& velocity() const { return velocity_; }
  int cutoff() const { return position_.cutoff(); }
  double dt() const { return dt_; }

 private:
  struct Weights {
    double c, s_over_w, w_s;  // propagator entries
    double pos_now, pos_next, vel_now, vel_next;
  };
  double dt_;
  std::vector<Weights> weights_;  // indexed by |n|^2
  SpectralField position_;
  SpectralField velocity_;
};

/// Batch form: returns I(F) sampled on the forcing's time grid, truncated at
/// n_out, with velocities.
Trajectory duhamel(const Trajectory& forcing, int n_out);

}  // namespace snlw
