#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snlw/duhamel.hpp"
#include "snlw/ensemble.hpp"
#include "snlw/lattice.hpp"
#include "snlw/objects.hpp"

namespace snlw {

/// (sum <n>^{2s} |coeff(n)|^2)^{1/2} over the ball.
double hs_norm(const SpectralField& field, double s);

/// max_x |<nabla>^s u(x)| on a uniform grid. points <= 0 selects a grid
/// oversampled four times over the Nyquist size. The grid maximum is a lower
/// bound for the true supremum.
double wsinf_norm(const SpectralField& field, double s, int points = 0);

/// Per-mode statistics of an ensemble of fields over the free modes.
class ModeMomentAccumulator {
 public:
  ModeMomentAccumulator() = default;
  explicit ModeMomentAccumulator(int cutoff);

  void add(const SpectralField& field);
  void merge(const ModeMomentAccumulator& other);

  int cutoff() const { return cutoff_; }
  long count() const { return square_.empty() ? 0 : square_.front().count(); }
  const std::vector<FreqIndex>& modes() const { return free_modes(cutoff_); }
  /// Statistics of |X^(n)|^2, indexed like modes().
  const RunningStats& square(std::size_t i) const { return square_[i]; }
  const RunningStats& real(std::size_t i) const { return real_[i]; }
  const RunningStats& imag(std::size_t i) const { return imag_[i]; }
  /// Sample variance of X^(n): E|X|^2 - |E X|^2 with the unbiased correction.
  double sample_variance(std::size_t i) const;
  /// Standard error of sample_variance(i).
  double sample_variance_stderr(std::size_t i) const;

 private:
  int cutoff_ = 0;
  std::vector<RunningStats> square_, real_, imag_;
};

/// One per-mode second moment and the variance of its estimate.
struct ModeSample {
  FreqIndex n;
  double moment = 0.0;
  double variance = 0.0;
};

std::vector<ModeSample> mode_samples(const ModeMomentAccumulator& acc);

struct Annulus {
  double lo = 0.0, hi = 0.0;  // lo < |n| <= hi
  int modes = 0;  // lattice points, i.e. twice the free modes
  double log_bracket = 0.0;  // mean log<n>
  double log_moment = 0.0;   // mean log E|X^(n)|^2
  double log_stderr = 0.0;
};

struct RegularityFit {
  std::vector<Annulus> annuli;
  double slope = 0.0;
  double intercept = 0.0;
  /// Standard error from the known annulus variances.
  double stderr_slope = 0.0;
  /// stderr_slope inflated by sqrt(chi2_dof) when the power law misfits.
  double stderr_scaled = 0.0;
  double chi2_dof = 0.0;
  /// Implied regularity (-slope - 3) / 2.
  double s0() const { return (-slope - 3.0) / 2.0; }
};

struct AnnulusSpec {
  int min_annuli = 4;
  int min_modes = 20;
  /// Largest |n| admitted; <= 0 uses every supplied mode.
  double max_radius = 0.0;
};

/// Weighted least squares of log moment against log<n> over dyadic shells
/// 2^{j-1} < |n| <= 2^j, j >= 1 (|n| <= 1 is left out). Each annulus enters
/// through the mean of log moments over its modes; weights come from the
/// delta-method variances. The slope error treats those variances as known;
/// a chi-square-inflated error is reported next to it. Shell populations count lattice points
/// (both members of a conjugate pair); the statistics use free modes. Throws std::invalid_argument when fewer
/// than spec.min_annuli shells hold spec.min_modes modes.
RegularityFit fit_regularity(std::span<const ModeSample> samples, const AnnulusSpec& spec = {});

/// E||<1>_{N2} - <1>_{N1}||_{H^s}^2 = sum_{N1 < |n| <= N2} <n>^{2s} mode_variance(n, t).
double conv1_tail_sum(int n1, int n2, double s, double alpha, double t);

struct CauchyRow {
  int level = 0;
  int next_level = 0;
  RunningStats norm;     // ||X_{2N} - X_N||
  RunningStats norm_sq;  // ||X_{2N} - X_N||^2
  void merge(const CauchyRow& o) {
    norm.merge(o.norm);
    norm_sq.merge(o.norm_sq);
  }
};

enum class NormKind { hs, wsinf };

struct CauchyConfig {
  ObjectKind object = ObjectKind::conv1;
  NormKind norm = NormKind::hs;
  double s = -0.35;
  std::vector<int> levels{4, 8, 16};
  double alpha = 0.25;
  double t = 1.0;
  double dt = 0.05;
  int replicas = 100;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct CauchyTable {
  CauchyConfig config;
  std::vector<CauchyRow> rows;
};

/// Ensemble means of level differences on nested paths: every level reads
/// the same Brownian path restricted to its ball. Object members are built
/// at Galerkin cutoff 2N and compared after zero-padding to the finer level.
CauchyTable cauchy_table(const CauchyConfig& config);

enum class Window { hann, rectangular };

struct XsbResult {
  double norm = 0.0;
  /// sqrt(dt sum_k w_k^2), the time-L2 mass of the window.
  double window_mass = 0.0;
};

/// Discrete X^{s,b} norm of a trajectory: windowed temporal DFT per mode,
///   U(n, tau_j) = dt / sqrt(2 pi) sum_k w_k u^(n, t_k) e^{-i tau_j t_k},
/// tau_j = 2 pi j / (K dt), and
///   ||u||^2 = sum_n sum_j dtau <n>^{2s} <|tau_j| - <n>>^{2b} |U(n, tau_j)|^2.
/// At s = b = 0 this is dt sum_k w_k^2 ||u(t_k)||_{L^2}^2 exactly.
XsbResult xsb_norm(const Trajectory& trajectory, double s, double b, Window window = Window::hann);

/// Points and displacement pairs used by the Wick-law report.
struct WickProbe {
  std::array<double, 3> x;
  std::array<double, 3> y;
};
const std::vector<WickProbe>& wick_probes();

/// Pointwise moments of <2> and <3> at the probe pairs.
class WickAccumulator {
 public:
  WickAccumulator();
  /// wick2 and wick3 should be untruncated (cutoffs 2N and 3N).
  void add(const SpectralField& wick2, const SpectralField& wick3);
  void merge(const WickAccumulator& other);

  long count() const { return mean2_.empty() ? 0 : mean2_.front().count(); }
  const std::vector<RunningStats>& mean2() const { return mean2_; }
  const std::vector<RunningStats>& mean3() const { return mean3_; }
  const std::vector<RunningStats>& cov2() const { return cov2_; }
  const std::vector<RunningStats>& cov3() const { return cov3_; }

 private:
  std::vector<RunningStats> mean2_, mean3_, cov2_, cov3_;
};

struct WickRow {
  std::string quantity;  // mean2, mean3, cov2, cov3
  int probe = 0;
  double estimate = 0.0;
  double expected = 0.0;
  double stderr_estimate = 0.0;
  double z = 0.0;
};

/// z-scores of E<2> = 0, E<3> = 0, E[<2>(x)<2>(y)] = 2 C(x-y)^2 and
/// E[<3>(x)<3>(y)] = 6 C(x-y)^3 with C the exact covariance of <1>_N(t).
/// Degenerate rows (zero spread and zero deviation) get z = 0.
std::vector<WickRow> wick_identity_report(const WickAccumulator& acc, int cutoff, double alpha, double t);

/// Value of a real field at a point by direct Fourier summation.
double evaluate(const SpectralField& field, const std::array<double, 3>& x);

}  // namespace snlw
