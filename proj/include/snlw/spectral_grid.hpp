#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "snlw/lattice.hpp"

namespace snlw {

/// Samples of a real field on the uniform grid x_j = 2*pi*j/M, j = 0..M-1,
/// stored row-major in (x, y, z).
class PhysicalGrid {
 public:
  PhysicalGrid() = default;
  explicit PhysicalGrid(int points) : points_(points), values_(cube(points), 0.0) {}

  int points() const { return points_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& at(int i, int j, int k) { return values_[index(i, j, k)]; }
  double at(int i, int j, int k) const { return values_[index(i, j, k)]; }

  /// Average over grid points; with the normalized measure this is the
  /// integral over T^3.
  double mean() const;
  double max_abs() const;

 private:
  static std::size_t cube(int m) {
    const auto s = static_cast<std::size_t>(m);
    return s * s * s;
  }
  std::size_t index(int i, int j, int k) const {
    const auto m = static_cast<std::size_t>(points_);
    return (static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)) * m + static_cast<std::size_t>(k);
  }

  int points_ = 0;
  std::vector<double> values_;
};

/// Smallest integer >= n whose only prime factors are 2, 3, 5, 7.
int smooth_fft_size(int n);

/// Grid points per axis needed to evaluate a product of fields with the given
/// cutoffs exactly up to frequency n_out: sum(cutoffs) + n_out + 1, rounded up
/// to an FFT-friendly size.
int dealiasing_grid_size(std::span<const int> cutoffs, int n_out);
int dealiasing_grid_size(std::initializer_list<int> cutoffs, int n_out);

/// Synthesis u(x_j) = sum_n coeff(n) e^{i n.x_j}. Requires points >= 2N + 1.
PhysicalGrid to_physical(const SpectralField& field, int points);
void to_physical(const SpectralField& field, PhysicalGrid& out);

/// Analysis with the normalized measure, truncated to |n| <= cutoff. The
/// output is Hermitian by construction. Requires points >= 2*cutoff + 1.
SpectralField to_spectral(const PhysicalGrid& grid, int cutoff);

/// Pointwise product of the inputs truncated to |n| <= n_out, evaluated on a
/// zero-padded grid so the result is free of aliasing.
SpectralField dealiased_product(std::span<const SpectralField* const> fields, int n_out);
SpectralField dealiased_product(std::initializer_list<std::reference_wrapper<const SpectralField>> fields,
                                int n_out);

/// Same as dealiased_product on a caller-chosen grid. Throws
/// std::invalid_argument if the grid violates the dealiasing condition.
SpectralField product_on_grid(std::span<const SpectralField* const> fields, int n_out, int points);

}  // namespace snlw
