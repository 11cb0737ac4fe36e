#include "snlw/diagnostics.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "snlw/detail/fftw_lock.hpp"
#include "snlw/noise.hpp"
#include "snlw/renorm.hpp"
#include "snlw/spectral_grid.hpp"

namespace snlw {

double hs_norm(const SpectralField& field, double s) {
  double acc = 0.0;
  for (const FreqIndex& n : ball_modes(field.cutoff())) {
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + n.norm2(), s);
    acc += w * std::norm(field(n));
  }
  return std::sqrt(acc);
}

double wsinf_norm(const SpectralField& field, double s, int points) {
  if (points <= 0) points = smooth_fft_size(4 * (2 * field.cutoff() + 1));
  const SpectralField lifted = apply_radial(field, [s](int r2) { return std::pow(1.0 + r2, 0.5 * s); });
  return to_physical(lifted, points).max_abs();
}

ModeMomentAccumulator::ModeMomentAccumulator(int cutoff) : cutoff_(cutoff) {
  const std::size_t n = free_modes(cutoff).size();
  square_.resize(n);
  real_.resize(n);
  imag_.resize(n);
}

void ModeMomentAccumulator::add(const SpectralField& field) {
  const auto& ms = modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const Complex c = field(ms[i]);
    square_[i].add(std::norm(c));
    real_[i].add(c.real());
    imag_[i].add(c.imag());
  }
}

void ModeMomentAccumulator::merge(const ModeMomentAccumulator& o) {
  if (o.square_.empty()) return;
  if (square_.empty()) {
    *this = o;
    return;
  }
  if (o.cutoff_ != cutoff_) throw std::invalid_argument("ModeMomentAccumulator::merge: cutoff mismatch");
  for (std::size_t i = 0; i < square_.size(); ++i) {
    square_[i].merge(o.square_[i]);
    real_[i].merge(o.real_[i]);
    imag_[i].merge(o.imag_[i]);
  }
}

double ModeMomentAccumulator::sample_variance(std::size_t i) const {
  const double r = static_cast<double>(count());
  if (r < 2) return 0.0;
  const double mean_sq = real_[i].mean() * real_[i].mean() + imag_[i].mean() * imag_[i].mean();
  return r / (r - 1.0) * (square_[i].mean() - mean_sq);
}

double ModeMomentAccumulator::sample_variance_stderr(std::size_t i) const { return square_[i].stderr_mean(); }

std::vector<ModeSample> mode_samples(const ModeMomentAccumulator& acc) {
  std::vector<ModeSample> out;
  const auto& ms = acc.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double se = acc.square(i).stderr_mean();
    out.push_back({ms[i], acc.square(i).mean(), se * se});
  }
  return out;
}

RegularityFit fit_regularity(std::span<const ModeSample> samples, const AnnulusSpec& spec) {
  struct Bin {
    int count = 0;
    double sx = 0.0, sy = 0.0, sv = 0.0;
  };
  std::vector<Bin> bins;
  for (const ModeSample& m : samples) {
    const int r2 = m.n.norm2();
    if (r2 <= 1 || !(m.moment > 0.0)) continue;
    if (spec.max_radius > 0.0 && r2 > spec.max_radius * spec.max_radius) continue;
    std::size_t j = 1;
    while ((1L << (2 * j)) < r2) ++j;  // 4^{j-1} < r2 <= 4^j
    if (bins.size() <= j) bins.resize(j + 1);
    Bin& b = bins[j];
    ++b.count;
    b.sx += std::log(bracket_of_norm2(r2));
    b.sy += std::log(m.moment);
    b.sv += m.variance / (m.moment * m.moment);
  }
  RegularityFit fit;
  bool weighted = true;
  for (std::size_t j = 1; j < bins.size(); ++j) {
    const Bin& b = bins[j];
    // Each free mode stands for the conjugate pair n, -n.
    if (2 * b.count < spec.min_modes) continue;
    Annulus a;
    a.lo = std::ldexp(1.0, static_cast<int>(j) - 1);
    a.hi = std::ldexp(1.0, static_cast<int>(j));
    a.modes = 2 * b.count;
    a.log_bracket = b.sx / b.count;
    a.log_moment = b.sy / b.count;
    a.log_stderr = std::sqrt(b.sv) / b.count;
    if (!(a.log_stderr > 0.0)) weighted = false;
    fit.annuli.push_back(a);
  }
  const int k = static_cast<int>(fit.annuli.size());
  if (k < spec.min_annuli)
    throw std::invalid_argument("fit_regularity: " + std::to_string(k) + " usable annuli, need " +
                                std::to_string(spec.min_annuli));
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (const Annulus& a : fit.annuli) {
    const double w = weighted ? 1.0 / (a.log_stderr * a.log_stderr) : 1.0;
    sw += w;
    swx += w * a.log_bracket;
    swy += w * a.log_moment;
  }
  const double xm = swx / sw, ym = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (const Annulus& a : fit.annuli) {
    const double w = weighted ? 1.0 / (a.log_stderr * a.log_stderr) : 1.0;
    sxx += w * (a.log_bracket - xm) * (a.log_bracket - xm);
    sxy += w * (a.log_bracket - xm) * (a.log_moment - ym);
  }
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double chi2 = 0.0;
  for (const Annulus& a : fit.annuli) {
    const double w = weighted ? 1.0 / (a.log_stderr * a.log_stderr) : 1.0;
    const double r = a.log_moment - fit.intercept - fit.slope * a.log_bracket;
    chi2 += w * r * r;
  }
  const double dof = k - 2;
  fit.chi2_dof = dof > 0 ? chi2 / dof : 0.0;
  if (weighted) {
    fit.stderr_slope = std::sqrt(1.0 / sxx);
    fit.stderr_scaled = fit.stderr_slope * std::sqrt(std::max(1.0, fit.chi2_dof));
  } else {
    fit.stderr_slope = dof > 0 ? std::sqrt(chi2 / dof / sxx) : 0.0;
    fit.stderr_scaled = fit.stderr_slope;
  }
  return fit;
}

double conv1_tail_sum(int n1, int n2, double s, double alpha, double t) {
  double acc = 0.0;
  for (const FreqIndex& n : ball_modes(n2)) {
    const int r2 = n.norm2();
    if (r2 <= n1 * n1) continue;
    acc += std::pow(1.0 + r2, s) * mode_variance_norm2(r2, t, alpha);
  }
  return acc;
}

namespace {

std::vector<SpectralField> level_members(const CauchyConfig& c, const NoisePath& finest) {
  std::vector<SpectralField> out;
  for (int level : c.levels) {
    const NoisePath path = finest.project(level);
    if (c.object == ObjectKind::conv1) {
      ObjectBuilder b(path, level, ObjectMask{ObjectKind::conv1});
      while (!b.done()) b.advance();
      out.push_back(b.current().conv1);
    } else {
      ObjectBuilder b(path, 2 * level, ObjectMask{c.object});
      while (!b.done()) b.advance();
      out.push_back(b.current().member(c.object));
    }
  }
  return out;
}

struct CauchyAcc {
  std::vector<CauchyRow> rows;
  void merge(const CauchyAcc& o) {
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].merge(o.rows[i]);
  }
};

}  // namespace

CauchyTable cauchy_table(const CauchyConfig& c) {
  if (c.levels.size() < 2) throw std::invalid_argument("cauchy_table: need at least two levels");
  for (std::size_t i = 1; i < c.levels.size(); ++i)
    if (c.levels[i] < c.levels[i - 1]) throw std::invalid_argument("cauchy_table: levels must not decrease");
  if (c.replicas < 1) throw std::invalid_argument("cauchy_table: replicas must be >= 1");
  const int steps = static_cast<int>(std::lround(c.t / c.dt));
  if (steps < 1 || std::abs(steps * c.dt - c.t) > 1e-9 * c.t)
    throw std::invalid_argument("cauchy_table: t must be a positive multiple of dt");

  NoiseConfig nc;
  nc.alpha = c.alpha;
  nc.cutoff = c.levels.back();
  nc.dt = c.dt;
  nc.steps = steps;
  auto make = [&] {
    CauchyAcc acc;
    for (std::size_t i = 0; i + 1 < c.levels.size(); ++i) {
      CauchyRow r;
      r.level = c.levels[i];
      r.next_level = c.levels[i + 1];
      acc.rows.push_back(r);
    }
    return acc;
  };
  auto body = [&](CauchyAcc& acc, int replica) {
    NoiseConfig cfg = nc;
    cfg.seed = replica_seed(c.seed, static_cast<std::uint64_t>(replica));
    const NoisePath finest = sample_path(cfg);
    const auto members = level_members(c, finest);
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      const SpectralField& fine = members[i + 1];
      SpectralField d = fine;
      d -= resize(members[i], fine.cutoff());
      const double v = c.norm == NormKind::hs ? hs_norm(d, c.s) : wsinf_norm(d, c.s);
      acc.rows[i].norm.add(v);
      acc.rows[i].norm_sq.add(v * v);
    }
  };
  CauchyTable table;
  table.config = c;
  table.rows = run_ensemble<CauchyAcc>(c.replicas, c.workers, 16, make, body).rows;
  return table;
}

XsbResult xsb_norm(const Trajectory& traj, double s, double b, Window window) {
  XsbResult res;
  const int k = static_cast<int>(traj.size());
  if (k == 0) return res;
  if (!(traj.dt > 0.0)) throw std::invalid_argument("xsb_norm: trajectory needs a positive time step");
  const double dt = traj.dt;
  std::vector<double> w(static_cast<std::size_t>(k), 1.0);
  if (window == Window::hann && k > 1)
    for (int i = 0; i < k; ++i) w[static_cast<std::size_t>(i)] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (k - 1)));
  double mass = 0.0;
  for (double x : w) mass += x * x;
  res.window_mass = std::sqrt(dt * mass);

  fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(k));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(k));
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(k, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  const double dtau = 2.0 * std::numbers::pi / (k * dt);
  const double scale = dt / std::sqrt(2.0 * std::numbers::pi);
  std::vector<double> tau_abs(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) tau_abs[static_cast<std::size_t>(j)] = std::abs((j <= k / 2 ? j : j - k) * dtau);

  const int cutoff = traj.cutoff();
  double total = 0.0;
  for (const FreqIndex& n : free_modes(cutoff)) {
    for (int i = 0; i < k; ++i) {
      const Complex c = traj.states[static_cast<std::size_t>(i)](n) * w[static_cast<std::size_t>(i)];
      in[i][0] = c.real();
      in[i][1] = c.imag();
    }
    fftw_execute(plan);
    const double bn = bracket(n);
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
      const double mag2 = (out[j][0] * out[j][0] + out[j][1] * out[j][1]) * scale * scale;
      const double gap = 1.0 + (tau_abs[static_cast<std::size_t>(j)] - bn) * (tau_abs[static_cast<std::size_t>(j)] - bn);
      acc += (b == 0.0 ? 1.0 : std::pow(gap, b)) * mag2;
    }
    const double mult = n == FreqIndex{} ? 1.0 : 2.0;
    total += mult * dtau * (s == 0.0 ? 1.0 : std::pow(bn, 2.0 * s)) * acc;
  }
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  res.norm = std::sqrt(total);
  return res;
}

const std::vector<WickProbe>& wick_probes() {
  static const std::vector<WickProbe> probes{
      {{0.3, 1.1, 2.0}, {0.3, 1.1, 2.0}},
      {{1.0, 0.0, 4.0}, {1.5, 0.0, 4.0}},
      {{2.5, 5.0, 0.2}, {3.5, 6.0, 0.2}},
      {{4.0, 2.2, 3.3}, {4.0 + std::numbers::pi, 2.2 + std::numbers::pi / 2, 4.0}},
      {{5.5, 3.0, 1.0}, {5.5 + 2.0, 5.0, 3.0}},
  };
  return probes;
}

double evaluate(const SpectralField& field, const std::array<double, 3>& x) {
  double acc = 0.0;
  for (const FreqIndex& n : free_modes(field.cutoff())) {
    const Complex c = field(n);
    if (n == FreqIndex{}) {
      acc += c.real();
      continue;
    }
    const double phase = n.x * x[0] + n.y * x[1] + n.z * x[2];
    acc += 2.0 * (c.real() * std::cos(phase) - c.imag() * std::sin(phase));
  }
  return acc;
}

WickAccumulator::WickAccumulator() {
  const std::size_t n = wick_probes().size();
  mean2_.resize(n);
  mean3_.resize(n);
  cov2_.resize(n);
  cov3_.resize(n);
}

void WickAccumulator::add(const SpectralField& wick2, const SpectralField& wick3) {
  const auto& probes = wick_probes();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double a2 = evaluate(wick2, probes[i].x), b2 = evaluate(wick2, probes[i].y);
    const double a3 = evaluate(wick3, probes[i].x), b3 = evaluate(wick3, probes[i].y);
    mean2_[i].add(a2);
    mean3_[i].add(a3);
    cov2_[i].add(a2 * b2);
    cov3_[i].add(a3 * b3);
  }
}

void WickAccumulator::merge(const WickAccumulator& o) {
  for (std::size_t i = 0; i < mean2_.size(); ++i) {
    mean2_[i].merge(o.mean2_[i]);
    mean3_[i].merge(o.mean3_[i]);
    cov2_[i].merge(o.cov2_[i]);
    cov3_[i].merge(o.cov3_[i]);
  }
}

std::vector<WickRow> wick_identity_report(const WickAccumulator& acc, int cutoff, double alpha, double t) {
  std::vector<WickRow> rows;
  const auto& probes = wick_probes();
  auto push = [&rows](const char* q, int i, const RunningStats& st, double expected) {
    WickRow r;
    r.quantity = q;
    r.probe = i;
    r.estimate = st.mean();
    r.expected = expected;
    r.stderr_estimate = st.stderr_mean();
    const double dev = r.estimate - expected;
    r.z = r.stderr_estimate > 0.0 ? dev / r.stderr_estimate : (dev == 0.0 ? 0.0 : std::copysign(HUGE_VAL, dev));
    rows.push_back(r);
  };
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const std::array<double, 3> r{probes[i].y[0] - probes[i].x[0], probes[i].y[1] - probes[i].x[1],
                                  probes[i].y[2] - probes[i].x[2]};
    const double c = field_covariance(cutoff, alpha, t, r);
    const int p = static_cast<int>(i);
    push("mean2", p, acc.mean2()[i], 0.0);
    push("mean3", p, acc.mean3()[i], 0.0);
    push("cov2", p, acc.cov2()[i], 2.0 * c * c);
    push("cov3", p, acc.cov3()[i], 6.0 * c * c * c);
  }
  return rows;
}

}  // namespace snlw
