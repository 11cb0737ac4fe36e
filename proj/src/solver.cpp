#include "snlw/solver.hpp"

#include <cmath>
#include <string>

#include "snlw/diagnostics.hpp"
#include "snlw/duhamel.hpp"
#include "snlw/philox.hpp"
#include "snlw/renorm.hpp"
#include "snlw/spectral_grid.hpp"

namespace snlw {

namespace {

SpectralField data_or_zero(const SpectralField& f, int cutoff) {
  if (f.raw().empty()) return SpectralField(cutoff);
  return resize(f, cutoff);
}

void check_path(const SolveConfig& c, const NoisePath& path) {
  const NoiseConfig& n = path.config();
  if (n.cutoff != c.noise_cutoff) throw std::invalid_argument("noise path cutoff differs from the solver's N");
  if (std::abs(n.dt - c.dt) > 1e-15 * c.dt) throw std::invalid_argument("noise path dt differs from the solver's");
  if (n.steps < c.steps) throw std::invalid_argument("noise path is shorter than the solve horizon");
  if (!path.is_zero() && n.alpha != c.alpha) throw std::invalid_argument("noise path alpha differs from the solver's");
}

void add_noise(WaveState& s, const NoisePath& path, int step) {
  if (path.is_zero()) return;
  auto pu = s.u.raw();
  auto pv = s.ut.raw();
  const auto& modes = path.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const FreqIndex n = modes[i];
    const StepIncrement& inc = path.increment(step, i);
    const std::size_t a = s.u.offset(n);
    if (n == FreqIndex{}) {
      pu[a] += inc.pos.real();
      pv[a] += inc.vel.real();
      continue;
    }
    const std::size_t b = s.u.offset(-n);
    pu[a] += inc.pos;
    pv[a] += inc.vel;
    pu[b] = std::conj(pu[a]);
    pv[b] = std::conj(pv[a]);
  }
}

void guard(const SpectralField& u, double t, double ceiling) {
  const double h1 = hs_norm(u, 1.0);
  if (!(h1 <= ceiling)) throw BlowUpError(t, h1);
}

double midpoint_sigma(const SolveConfig& c, bool noisy, int step) {
  if (!c.renormalize || !noisy) return 0.0;
  return sigma((step + 0.5) * c.dt, c.noise_cutoff, c.alpha);
}

}  // namespace

void validate(const SolveConfig& c) {
  if (c.noise_cutoff < 1) throw std::invalid_argument("solver: N must be >= 1");
  if (c.galerkin() < c.noise_cutoff) throw std::invalid_argument("solver: Galerkin cutoff M must be >= N");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw std::invalid_argument("solver: dt must be > 0");
  if (c.steps < 1) throw std::invalid_argument("solver: steps must be >= 1");
  if (c.record_every < 1) throw std::invalid_argument("solver: record_every must be >= 1");
  if (!(c.blowup_ceiling > 0.0)) throw std::invalid_argument("solver: blow-up ceiling must be > 0");
  if (!c.u0.raw().empty() && c.u0.cutoff() > c.galerkin())
    throw std::invalid_argument("solver: initial position exceeds the Galerkin cutoff");
  if (!c.u1.raw().empty() && c.u1.cutoff() > c.galerkin())
    throw std::invalid_argument("solver: initial velocity exceeds the Galerkin cutoff");
}

NoiseConfig noise_config(const SolveConfig& c, std::uint64_t seed, int substeps) {
  NoiseConfig n;
  n.alpha = c.alpha;
  n.cutoff = c.noise_cutoff;
  n.dt = c.dt;
  n.steps = c.steps;
  n.seed = seed;
  n.substeps = substeps;
  return n;
}

BlowUpError::BlowUpError(double time, double norm)
    : std::runtime_error("blow-up guard: ||u||_{H^1} = " + std::to_string(norm) + " at t = " + std::to_string(time)),
      time_(time),
      norm_(norm) {}

TruncatedStepper::TruncatedStepper(const SolveConfig& config, const NoisePath& path)
    : config_(config), path_(&path) {
  validate(config_);
  check_path(config_, path);
  const int m = config_.galerkin();
  grid_ = dealiasing_grid_size({m, m, m}, m);
  for (int k = 0; k < config_.steps; ++k) sigma_mid_.push_back(midpoint_sigma(config_, !path.is_zero(), k));
  state_.u = data_or_zero(config_.u0, m);
  state_.ut = data_or_zero(config_.u1, m);
}

SpectralField TruncatedStepper::force(const SpectralField& u, double sig, double t) const {
  const int m = config_.galerkin();
  SpectralField f(m);
  if (config_.cubic || sig != 0.0) {
    PhysicalGrid g = to_physical(u, grid_);
    for (double& x : g.values()) x = (config_.cubic ? -x * x * x : 0.0) + 3.0 * sig * x;
    f = to_spectral(g, m);
  }
  if (config_.forcing) f += resize(config_.forcing(t), m);
  return f;
}

void TruncatedStepper::advance() {
  if (done()) throw std::logic_error("TruncatedStepper::advance past the horizon");
  const double h = config_.dt;
  const double sig = sigma_mid_[static_cast<std::size_t>(step_)];
  const double t0 = step_ * h;
  state_.ut.axpy(0.5 * h, force(state_.u, sig, t0));
  propagate_linear(state_.u, state_.ut, h);
  add_noise(state_, *path_, step_);
  ++step_;
  state_.t = step_ * h;
  state_.ut.axpy(0.5 * h, force(state_.u, sig, state_.t));
  guard(state_.u, state_.t, config_.blowup_ceiling);
}

ObjectMask residual_members() {
  return ObjectMask{ObjectKind::conv1, ObjectKind::tree30, ObjectKind::tree320, ObjectKind::tree70};
}

ResidualStepper::ResidualStepper(const SolveConfig& config, const ObjectSnapshot& initial)
    : config_(config), cubic30_(config.galerkin(), config.dt), current_(initial) {
  validate(config_);
  const int m = config_.galerkin();
  grid_ = dealiasing_grid_size({m, m, m}, m);
  z_ = data_or_zero(config_.u0, m);
  zt_ = data_or_zero(config_.u1, m);
  psi_ = SpectralField(m);
  cube30_now_ = cube30(initial);
  time_ = initial.time;
}

SpectralField ResidualStepper::cube30(const ObjectSnapshot& o) const {
  const int m = config_.galerkin();
  PhysicalGrid b = to_physical(resize(o.tree30, m), grid_);
  for (double& x : b.values()) x = x * x * x;
  return to_spectral(b, m);
}

SpectralField ResidualStepper::force(const SpectralField& v, const ObjectSnapshot& o, double sig) const {
  const int m = config_.galerkin();
  const PhysicalGrid vg = to_physical(v, grid_);
  const PhysicalGrid ag = to_physical(o.conv1, grid_);
  const PhysicalGrid bg = to_physical(resize(o.tree30, m), grid_);
  PhysicalGrid out(grid_);
  auto fv = out.values();
  const auto vv = vg.values(), av = ag.values(), bv = bg.values();
  for (std::size_t i = 0; i < fv.size(); ++i) {
    const double x = vv[i], a = av[i], b = bv[i];
    // -v^3 + 3(b - a)v^2 - 3b^2 v + 6ab v - 3(a^2 - sigma) v
    fv[i] = -x * x * x + 3.0 * (b - a) * x * x - 3.0 * b * b * x + 6.0 * a * b * x - 3.0 * (a * a - sig) * x;
  }
  return to_spectral(out, m);
}

SpectralField ResidualStepper::residual() const { return z_ + psi_; }

void ResidualStepper::advance(const ObjectSnapshot& next, double sigma_mid) {
  const int m = config_.galerkin();
  const double h = config_.dt;
  zt_.axpy(0.5 * h, force(z_ + psi_, current_, sigma_mid));
  propagate_linear(z_, zt_, h);

  const SpectralField cube_next = cube30(next);
  cubic30_.advance(cube30_now_, cube_next);
  cube30_now_ = cube_next;
  psi_ = cubic30_.position();
  psi_.axpy(3.0, resize(next.tree320, m));
  psi_.axpy(-3.0, resize(next.tree70, m));

  current_ = next;
  time_ = next.time;
  zt_.axpy(0.5 * h, force(z_ + psi_, current_, sigma_mid));
  guard(z_, time_, config_.blowup_ceiling);
}

std::vector<WaveState> solve_truncated(const SolveConfig& config, const NoisePath& path) {
  TruncatedStepper stepper(config, path);
  std::vector<WaveState> out{stepper.state()};
  while (!stepper.done()) {
    stepper.advance();
    if (stepper.step() % config.record_every == 0 || stepper.done()) out.push_back(stepper.state());
  }
  return out;
}

std::vector<WaveState> solve_nlw(const SolveConfig& config) {
  SolveConfig c = config;
  c.renormalize = false;
  NoiseConfig n = noise_config(c, 0);
  n.alpha = c.alpha;
  return solve_truncated(c, NoisePath::zero(n));
}

std::vector<WaveState> solve_residual(const SolveConfig& config, const ObjectSet& objects) {
  validate(config);
  if (objects.cutoff != config.noise_cutoff) throw std::invalid_argument("object set level differs from N");
  if (objects.galerkin_cutoff < config.galerkin())
    throw std::invalid_argument("object set Galerkin cutoff is below the solver's");
  if (std::abs(objects.dt - config.dt) > 1e-15 * config.dt)
    throw std::invalid_argument("object set dt differs from the solver's");
  for (ObjectKind k : {ObjectKind::conv1, ObjectKind::tree30, ObjectKind::tree320, ObjectKind::tree70})
    if (!objects.has(k)) throw std::invalid_argument("object set lacks " + std::string(object_name(k)));
  if (objects[ObjectKind::conv1].size() < static_cast<std::size_t>(config.steps) + 1)
    throw std::invalid_argument("object set is shorter than the solve horizon");

  const bool noisy = objects.sigma.values.back() != 0.0;
  ResidualStepper stepper(config, objects.snapshot(0));
  auto record = [&] { return WaveState{stepper.time(), stepper.residual(), stepper.z_velocity()}; };
  std::vector<WaveState> out{record()};
  for (int k = 0; k < config.steps; ++k) {
    stepper.advance(objects.snapshot(static_cast<std::size_t>(k) + 1), midpoint_sigma(config, noisy, k));
    if ((k + 1) % config.record_every == 0 || k + 1 == config.steps) out.push_back(record());
  }
  return out;
}

DecompositionReport decomposition_check(const SolveConfig& config, const NoisePath& path) {
  TruncatedStepper direct(config, path);
  ObjectBuilder objects(path, config.galerkin(), residual_members());
  ResidualStepper residual(config, objects.current());
  const int m = config.galerkin();
  DecompositionReport rep;
  rep.regularity = config.alpha - 0.5 - 0.1;
  auto measure = [&] {
    const ObjectSnapshot& o = objects.current();
    SpectralField diff = direct.state().u;
    diff -= resize(o.conv1, m);
    diff += resize(o.tree30, m);
    diff -= residual.residual();
    const double d = hs_norm(diff, rep.regularity);
    if (d > rep.max_discrepancy) {
      rep.max_discrepancy = d;
      rep.time_of_max = o.time;
    }
    rep.final_discrepancy = d;
  };
  measure();
  while (!direct.done()) {
    const double sig = midpoint_sigma(config, !path.is_zero(), direct.step());
    direct.advance();
    objects.advance();
    residual.advance(objects.current(), sig);
    measure();
  }
  return rep;
}

SpectralField smooth_random_field(int cutoff, std::uint64_t seed, double amplitude, double decay) {
  SpectralField f(cutoff);
  const auto key = philox_key(seed);
  for (const FreqIndex& n : free_modes(cutoff)) {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>((n.x + 512) << 20 | (n.y + 512) << 10 | (n.z + 512)),
                                  0xffffffffu, 0x5eedu, 0};
    const auto z = normal_pair(Philox4x32::block(ctr, key));
    const double scale = amplitude * std::pow(bracket(n), -decay);
    if (n == FreqIndex{})
      f.set(n, scale * z[0]);
    else
      f.set(n, Complex(scale * z[0], scale * z[1]) / std::sqrt(2.0));
  }
  return f;
}

double linear_energy(const SpectralField& u, const SpectralField& ut) {
  double e = 0.0;
  for (const FreqIndex& n : ball_modes(u.cutoff()))
    e += (1.0 + n.norm2()) * std::norm(u(n)) + std::norm(ut(n));
  return e;
}

}  // namespace snlw
