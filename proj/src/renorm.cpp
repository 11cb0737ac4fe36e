#include "snlw/renorm.hpp"

#include <cmath>
#include <map>

#include "snlw/detail/trig.hpp"

namespace snlw {

double mode_variance_norm2(int norm2, double t, double alpha) {
  const double w = bracket_of_norm2(norm2);
  // t/(2w^{2+2a}) - sin(2tw)/(4w^{3+2a}) = w^{-2-2a} (2tw - sin 2tw) / (4w)
  return std::pow(w, -2.0 - 2.0 * alpha) * detail::x_minus_sin(2.0 * t * w) / (4.0 * w);
}

double mode_variance(FreqIndex n, double t, double alpha) { return mode_variance_norm2(n.norm2(), t, alpha); }

double sigma(double t, int cutoff, double alpha) {
  std::map<int, long> shells;
  for (const FreqIndex& n : ball_modes(cutoff)) ++shells[n.norm2()];
  double sum = 0.0, carry = 0.0;
  for (const auto& [norm2, count] : shells) {
    const double term = static_cast<double>(count) * mode_variance_norm2(norm2, t, alpha) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

SigmaTable sigma_table(double alpha, int cutoff, std::span<const double> times) {
  SigmaTable table{alpha, cutoff, {times.begin(), times.end()}, {}};
  table.values.reserve(times.size());
  for (double t : times) table.values.push_back(sigma(t, cutoff, alpha));
  return table;
}

double field_covariance(int cutoff, double alpha, double t, const std::array<double, 3>& r) {
  double sum = 0.0, carry = 0.0;
  for (const FreqIndex& n : ball_modes(cutoff)) {
    const double phase = n.x * r[0] + n.y * r[1] + n.z * r[2];
    const double term = mode_variance(n, t, alpha) * std::cos(phase) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

void wick_square_inplace(std::span<double> values, double sigma) {
  for (double& v : values) v = v * v - sigma;
}

void wick_cube_inplace(std::span<double> values, double sigma) {
  for (double& v : values) v = v * (v * v - 3.0 * sigma);
}

SpectralField wick_square(const SpectralField& u, double sigma, int n_out) {
  if (n_out < 0) n_out = 2 * u.cutoff();
  PhysicalGrid grid = to_physical(u, dealiasing_grid_size({u.cutoff(), u.cutoff()}, n_out));
  wick_square_inplace(grid.values(), sigma);
  return to_spectral(grid, n_out);
}

SpectralField wick_cube(const SpectralField& u, double sigma, int n_out) {
  if (n_out < 0) n_out = 3 * u.cutoff();
  PhysicalGrid grid = to_physical(u, dealiasing_grid_size({u.cutoff(), u.cutoff(), u.cutoff()}, n_out));
  wick_cube_inplace(grid.values(), sigma);
  return to_spectral(grid, n_out);
}

}  // namespace snlw
