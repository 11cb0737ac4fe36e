#include "snlw/objects.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "snlw/spectral_grid.hpp"

namespace snlw {

std::string_view object_name(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::conv1: return "conv1";
    case ObjectKind::wick2: return "wick2";
    case ObjectKind::wick3: return "wick3";
    case ObjectKind::tree30: return "tree30";
    case ObjectKind::tree30_conv1: return "tree30_conv1";
    case ObjectKind::tree320: return "tree320";
    case ObjectKind::tree70: return "tree70";
  }
  return "?";
}

ObjectKind parse_object(std::string_view name) {
  for (ObjectKind k : kAllObjects)
    if (object_name(k) == name) return k;
  throw std::invalid_argument("unknown stochastic object '" + std::string(name) + "'");
}

ObjectMask ObjectMask::closure() const {
  ObjectMask m = *this;
  if (m.has(ObjectKind::tree320)) {
    m.add(ObjectKind::tree30);
    m.add(ObjectKind::wick2);
  }
  if (m.has(ObjectKind::tree70) || m.has(ObjectKind::tree30_conv1)) m.add(ObjectKind::tree30);
  if (m.has(ObjectKind::tree30)) m.add(ObjectKind::wick3);
  m.add(ObjectKind::conv1);
  return m;
}

const SpectralField& ObjectSnapshot::member(ObjectKind kind) const {
  switch (kind) {
    case ObjectKind::conv1: return conv1;
    case ObjectKind::wick2: return wick2;
    case ObjectKind::wick3: return wick3;
    case ObjectKind::tree30: return tree30;
    case ObjectKind::tree30_conv1: return tree30_conv1;
    case ObjectKind::tree320: return tree320;
    case ObjectKind::tree70: return tree70;
  }
  throw std::invalid_argument("bad object kind");
}

namespace {

void add_noise(SpectralField& u, SpectralField& ut, const NoisePath& path, int step) {
  if (path.is_zero()) return;
  auto pu = u.raw();
  auto pv = ut.raw();
  const auto& modes = path.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const FreqIndex n = modes[i];
    const StepIncrement& inc = path.increment(step, i);
    const std::size_t a = u.offset(n);
    if (n == FreqIndex{}) {
      pu[a] += inc.pos.real();
      pv[a] += inc.vel.real();
      continue;
    }
    const std::size_t b = u.offset(-n);
    pu[a] += inc.pos;
    pv[a] += inc.vel;
    pu[b] = std::conj(pu[a]);
    pv[b] = std::conj(pv[a]);
  }
}

}  // namespace

Trajectory stochastic_convolution(const NoisePath& path) {
  const NoiseConfig& cfg = path.config();
  Trajectory out;
  out.dt = cfg.dt;
  SpectralField u(cfg.cutoff), ut(cfg.cutoff);
  out.states.push_back(u);
  out.velocities.push_back(ut);
  for (int k = 0; k < cfg.steps; ++k) {
    propagate_linear(u, ut, cfg.dt);
    add_noise(u, ut, path, k);
    out.states.push_back(u);
    out.velocities.push_back(ut);
  }
  return out;
}

ObjectBuilder::ObjectBuilder(const NoisePath& path, int galerkin_cutoff, ObjectMask members)
    : path_(&path), galerkin_(galerkin_cutoff < 0 ? 2 * path.config().cutoff : galerkin_cutoff) {
  const NoiseConfig& cfg = path.config();
  if (galerkin_ < cfg.cutoff) throw std::invalid_argument("ObjectBuilder: Galerkin cutoff below noise cutoff");
  computed_ = members.closure();
  std::vector<double> times;
  for (int k = 0; k <= cfg.steps; ++k) times.push_back(k * cfg.dt);
  sigma_ = snlw::sigma_table(cfg.alpha, cfg.cutoff, times);
  // Without noise <1> vanishes and so does its variance.
  if (path.is_zero()) std::fill(sigma_.values.begin(), sigma_.values.end(), 0.0);

  const int m = galerkin_;
  now_.conv1 = SpectralField(cfg.cutoff);
  now_.conv1_velocity = SpectralField(cfg.cutoff);
  if (computed_.has(ObjectKind::wick2)) now_.wick2 = SpectralField(m);
  if (computed_.has(ObjectKind::wick3)) now_.wick3 = SpectralField(m);
  if (computed_.has(ObjectKind::tree30)) {
    duhamel30_.emplace(m, cfg.dt);
    now_.tree30 = SpectralField(m);
  }
  if (computed_.has(ObjectKind::tree30_conv1)) now_.tree30_conv1 = SpectralField(m);
  if (computed_.has(ObjectKind::tree320)) {
    duhamel320_.emplace(m, cfg.dt);
    now_.tree320 = SpectralField(m);
  }
  if (computed_.has(ObjectKind::tree70)) {
    duhamel70_.emplace(m, cfg.dt);
    now_.tree70 = SpectralField(m);
  }
  // All members vanish at t = 0 (sigma(0) = 0), so the forcings start at zero.
  force30_ = SpectralField(m);
  force320_ = SpectralField(m);
  force70_ = SpectralField(m);
}

void ObjectBuilder::compute_derived() {
  const int n = noise_cutoff();
  const int m = galerkin_;
  const double sig = now_.sigma;
  const bool need2 = computed_.has(ObjectKind::wick2);
  const bool need3 = computed_.has(ObjectKind::wick3);
  if (need2 || need3) {
    const int points = need3 ? dealiasing_grid_size({n, n, n}, m) : dealiasing_grid_size({n, n}, m);
    const PhysicalGrid a = to_physical(now_.conv1, points);
    if (need2) {
      PhysicalGrid g = a;
      wick_square_inplace(g.values(), sig);
      now_.wick2 = to_spectral(g, m);
    }
    if (need3) {
      PhysicalGrid g = a;
      wick_cube_inplace(g.values(), sig);
      now_.wick3 = to_spectral(g, m);
    }
  }
}

void ObjectBuilder::advance() {
  if (done()) throw std::logic_error("ObjectBuilder::advance past the horizon");
  const NoiseConfig& cfg = path_->config();
  const int k = now_.step;
  propagate_linear(now_.conv1, now_.conv1_velocity, cfg.dt);
  add_noise(now_.conv1, now_.conv1_velocity, *path_, k);
  now_.step = k + 1;
  now_.time = now_.step * cfg.dt;
  now_.sigma = sigma_.values[static_cast<std::size_t>(now_.step)];
  compute_derived();

  const int n = noise_cutoff();
  const int m = galerkin_;
  if (duhamel30_) {
    duhamel30_->advance(force30_, now_.wick3);
    force30_ = now_.wick3;
    now_.tree30 = duhamel30_->position();
  }
  const bool need_c1 = computed_.has(ObjectKind::tree30_conv1);
  if (!(need_c1 || duhamel320_ || duhamel70_)) return;

  const int points = duhamel70_    ? dealiasing_grid_size({m, m, n}, m)
                     : duhamel320_ ? dealiasing_grid_size({m, n, n}, m)
                                   : dealiasing_grid_size({m, n}, m);
  const PhysicalGrid a = to_physical(now_.conv1, points);
  const PhysicalGrid b = to_physical(now_.tree30, points);
  const auto av = a.values();
  const auto bv = b.values();
  PhysicalGrid g(points);
  auto gv = g.values();
  if (need_c1) {
    for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = bv[i] * av[i];
    now_.tree30_conv1 = to_spectral(g, m);
  }
  if (duhamel320_) {
    for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = bv[i] * (av[i] * av[i] - now_.sigma);
    SpectralField f = to_spectral(g, m);
    duhamel320_->advance(force320_, f);
    force320_ = std::move(f);
    now_.tree320 = duhamel320_->position();
  }
  if (duhamel70_) {
    for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = bv[i] * bv[i] * av[i];
    SpectralField f = to_spectral(g, m);
    duhamel70_->advance(force70_, f);
    force70_ = std::move(f);
    now_.tree70 = duhamel70_->position();
  }
}

const Trajectory& ObjectSet::operator[](ObjectKind kind) const {
  if (!members.has(kind))
    throw std::out_of_range("object '" + std::string(object_name(kind)) + "' was not built");
  return trajectories[static_cast<std::size_t>(kind)];
}

ObjectSnapshot ObjectSet::snapshot(std::size_t step) const {
  ObjectSnapshot s;
  s.step = static_cast<int>(step);
  s.time = static_cast<double>(step) * dt;
  s.sigma = sigma.values.at(step);
  for (ObjectKind k : kAllObjects) {
    if (!members.has(k)) continue;
    const SpectralField& f = trajectories[static_cast<std::size_t>(k)].states.at(step);
    switch (k) {
      case ObjectKind::conv1:
        s.conv1 = f;
        if (!trajectories[0].velocities.empty()) s.conv1_velocity = trajectories[0].velocities.at(step);
        break;
      case ObjectKind::wick2: s.wick2 = f; break;
      case ObjectKind::wick3: s.wick3 = f; break;
      case ObjectKind::tree30: s.tree30 = f; break;
      case ObjectKind::tree30_conv1: s.tree30_conv1 = f; break;
      case ObjectKind::tree320: s.tree320 = f; break;
      case ObjectKind::tree70: s.tree70 = f; break;
    }
  }
  return s;
}

ObjectSet build_objects(const NoisePath& path, int galerkin_cutoff, ObjectMask members) {
  ObjectBuilder builder(path, galerkin_cutoff, members);
  const NoiseConfig& cfg = path.config();
  ObjectSet set;
  set.alpha = cfg.alpha;
  set.cutoff = cfg.cutoff;
  set.galerkin_cutoff = builder.galerkin_cutoff();
  set.dt = cfg.dt;
  set.seed = cfg.seed;
  set.sigma = builder.sigma_table();
  set.members = members;
  set.members.add(ObjectKind::conv1);
  auto record = [&] {
    const ObjectSnapshot& s = builder.current();
    for (ObjectKind k : kAllObjects) {
      if (!set.members.has(k)) continue;
      auto& traj = set.trajectories[static_cast<std::size_t>(k)];
      traj.dt = cfg.dt;
      traj.states.push_back(s.member(k));
      if (k == ObjectKind::conv1) traj.velocities.push_back(s.conv1_velocity);
    }
  };
  record();
  while (!builder.done()) {
    builder.advance();
    record();
  }
  return set;
}

}  // namespace snlw
