#include "snlw/duhamel.hpp"

#include <cmath>
#include <stdexcept>

#include "snlw/detail/trig.hpp"

namespace snlw {

void propagate_linear(SpectralField& u, SpectralField& ut, double h) {
  if (u.cutoff() != ut.cutoff()) throw std::invalid_argument("propagate_linear: cutoff mismatch");
  auto pu = u.raw();
  auto pv = ut.raw();
  std::vector<double> cs, sn;
  const int n2max = u.cutoff() * u.cutoff();
  cs.reserve(static_cast<std::size_t>(n2max) + 1);
  sn.reserve(static_cast<std::size_t>(n2max) + 1);
  for (int r2 = 0; r2 <= n2max; ++r2) {
    const double w = bracket_of_norm2(r2);
    cs.push_back(std::cos(h * w));
    sn.push_back(std::sin(h * w));
  }
  for (const FreqIndex& n : free_modes(u.cutoff())) {
    const auto r2 = static_cast<std::size_t>(n.norm2());
    const double w = bracket_of_norm2(n.norm2());
    const std::size_t i = u.offset(n);
    const Complex a = pu[i], b = pv[i];
    const Complex a1 = cs[r2] * a + (sn[r2] / w) * b;
    const Complex b1 = -(w * sn[r2]) * a + cs[r2] * b;
    if (n == FreqIndex{}) {
      pu[i] = a1.real();
      pv[i] = b1.real();
      continue;
    }
    const std::size_t j = u.offset(-n);
    pu[i] = a1;
    pv[i] = b1;
    pu[j] = std::conj(a1);
    pv[j] = std::conj(b1);
  }
}

SpectralField linear_solution(const SpectralField& u0, const SpectralField& u1, double t) {
  SpectralField u = u0;
  SpectralField v = u1;
  propagate_linear(u, v, t);
  return u;
}

DuhamelStepper::DuhamelStepper(int cutoff, double dt) : dt_(dt), position_(cutoff), velocity_(cutoff) {
  if (!(dt > 0.0)) throw std::invalid_argument("DuhamelStepper: dt must be > 0");
  const double h = dt;
  for (int r2 = 0; r2 <= cutoff * cutoff; ++r2) {
    const double w = bracket_of_norm2(r2);
    const double x = h * w;
    const double c = std::cos(x), s = std::sin(x);
    // Position kernel sin((h-r)w)/w against (1 - r/h) and r/h.
    const double a0 = detail::one_minus_cos(x) / (w * w);
    const double a1 = detail::x_minus_sin(x) / (h * w * w * w);
    // Velocity kernel cos((h-r)w) against the same hats.
    const double b0 = s / w;
    const double b1 = detail::one_minus_cos(x) / (h * w * w);
    weights_.push_back({c, s / w, w * s, a0 - a1, a1, b0 - b1, b1});
  }
}

void DuhamelStepper::advance(const SpectralField& f0, const SpectralField& f1) {
  auto pu = position_.raw();
  auto pv = velocity_.raw();
  for (const FreqIndex& n : free_modes(cutoff())) {
    const Weights& wt = weights_[static_cast<std::size_t>(n.norm2())];
    const std::size_t i = position_.offset(n);
    const Complex g0 = f0(n), g1 = f1(n);
    const Complex a = pu[i], b = pv[i];
    const Complex a1 = wt.c * a + wt.s_over_w * b + wt.pos_now * g0 + wt.pos_next * g1;
    const Complex b1 = -wt.w_s * a + wt.c * b + wt.vel_now * g0 + wt.vel_next * g1;
    if (n == FreqIndex{}) {
      pu[i] = a1.real();
      pv[i] = b1.real();
      continue;
    }
    const std::size_t j = position_.offset(-n);
    pu[i] = a1;
    pv[i] = b1;
    pu[j] = std::conj(a1);
    pv[j] = std::conj(b1);
  }
}

Trajectory duhamel(const Trajectory& forcing, int n_out) {
  if (forcing.size() == 0) throw std::invalid_argument("duhamel: empty forcing");
  if (!(forcing.dt > 0.0)) throw std::invalid_argument("duhamel: forcing grid has no positive step");
  Trajectory out;
  out.dt = forcing.dt;
  DuhamelStepper stepper(n_out, forcing.dt);
  out.states.push_back(stepper.position());
  out.velocities.push_back(stepper.velocity());
  for (std::size_t k = 0; k + 1 < forcing.size(); ++k) {
    stepper.advance(forcing.states[k], forcing.states[k + 1]);
    out.states.push_back(stepper.position());
    out.velocities.push_back(stepper.velocity());
  }
  return out;
}

}  // namespace snlw
