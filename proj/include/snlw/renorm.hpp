#pragma once

#include <array>
#include <span>
#include <vector>

#include "snlw/lattice.hpp"
#include "snlw/spectral_grid.hpp"

namespace snlw {

/// E|<1>^_N(n, t)|^2 = t / (2<n>^{2+2a}) - sin(2t<n>) / (4<n>^{3+2a}).
double mode_variance(FreqIndex n, double t, double alpha);
double mode_variance_norm2(int norm2, double t, double alpha);

/// Renormalization constant sigma_N(t): the sum of mode_variance over
/// |n| <= cutoff, accumulated with Kahan compensation.
double sigma(double t, int cutoff, double alpha);

struct SigmaTable {
  double alpha = 0.0;
  int cutoff = 0;
  std::vector<double> times;
  std::vector<double> values;
};

SigmaTable sigma_table(double alpha, int cutoff, std::span<const double> times);

/// C(r) = E[<1>_N(x + r, t) <1>_N(x, t)] = sum_{|n|<=N} mode_variance(n) cos(n.r).
double field_covariance(int cutoff, double alpha, double t, const std::array<double, 3>& displacement);

/// <2> = u^2 - sigma, truncated at n_out (default 2N).
SpectralField wick_square(const SpectralField& u, double sigma, int n_out = -1);
/// <3> = u^3 - 3 sigma u, truncated at n_out (default 3N).
SpectralField wick_cube(const SpectralField& u, double sigma, int n_out = -1);

/// Hermite-polynomial helpers applied in place on physical samples.
void wick_square_inplace(std::span<double> values, double sigma);
void wick_cube_inplace(std::span<double> values, double sigma);

}  // namespace snlw
