#pragma once

#include <array>
#include <vector>

// Reference values computed from first principles, without the library.
namespace oracle {

/// int_0^t [sin((t - s) w) / w^{1 + a}]^2 ds for w = sqrt(1 + norm2).
double mode_variance(int norm2, double t, double alpha);

/// Sum of mode_variance over |n| <= cutoff.
double sigma(int cutoff, double t, double alpha);

/// E[<1>(x) <1>(x + r)] at time t.
double covariance(int cutoff, double t, double alpha, const std::array<double, 3>& r);

/// sum_{n1 < |n| <= n2} <n>^{2s} mode_variance.
double tail_sum(int n1, int n2, double s, double t, double alpha);

/// E|<30>^(n, t)|^2 for the level-N objects: triple lattice convolution of
/// the time covariances, integrated twice against the Duhamel kernel by
/// Gauss-Legendre quadrature on the two triangles of [0, t]^2.
double tree30_second_moment(const std::array<int, 3>& n, int cutoff, double t, double alpha, int nodes = 48);

}  // namespace oracle
