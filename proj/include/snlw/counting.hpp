#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "snlw/lattice.hpp"

namespace snlw {

/// Dyadic shell |n| ~ N read as N <= <n> < 2N.
std::vector<FreqIndex> dyadic_shell(int scale);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CountingOptions {
  /// Largest number of enumerated tuples (after symmetry reduction).
  std::uint64_t budget = 4'000'000'000ULL;
  /// Walk every list back to front; sums are exact so the result must not
  /// change.
  bool reversed = false;
  /// Use kappa(-eps) = -kappa(eps) to compute half of the sign tuples.
  bool sign_symmetry = true;
  /// Resonant sum: n2, n3 range over |n| <= pair_radius.
  int pair_radius = 4;
  /// Loss exponent in the A5 bound max(N1, N2)^{-beta + eps}.
  double epsilon = 0.1;
};

struct CountingReport {
  std::string lemma;
  std::vector<int> scales;
  std::vector<int> signs;
  double lhs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  /// m attaining the supremum (0 when the sum runs over m).
  long argmax_m = 0;
  std::uint64_t enumerated = 0;
};

/// sup_m sum_{|n_j| ~ N_j} <n123>^{2(s-1)} 1{|kappa - m| <= 1} / (<n12>^{2 beta} prod <n_j>^2)
/// with kappa = e0<n123> + e1<n1> + e2<n2> + e3<n3>, against N_max^{2(s - beta)}.
/// One report per sign tuple (16), in the order of sign_tuples(4).
std::vector<CountingReport> check_cubic_sum(double s, double beta, std::array<int, 3> scales,
                                            const CountingOptions& options = {});

/// sup over (n, m) of #{(n1, n2, n3) : |n_j| ~ N_j, n123 = n, |kappa - m| <= 1}
/// against med(N)^3 min(N)^2.
std::vector<CountingReport> check_lattice_count(std::array<int, 3> scales, const CountingOptions& options = {});

/// sup over (n2, n3) of <n23> / log(2 + N1) times
///   sum_m sum_{|n1| ~ N1} 1{|kappa - m| <= 1} / (<m> <n123> <n1>^2).
std::vector<CountingReport> check_resonant(int scale1, const CountingOptions& options = {});

/// sup over m and |n1| ~ N1 of
///   sum_{|n2| ~ N2, |n3| ~ N3} 1{|kappa2 - m| <= 1} / (<n123> <n12>^beta <n2>^2 <n3>^2)
/// with kappa2 = e123<n123> - e1<n1> - e2<n2> - e3<n3>, against
/// max(N1, N2)^{-beta + epsilon}.
std::vector<CountingReport> check_A5(std::array<int, 3> scales, double beta, const CountingOptions& options = {});

/// Quintic sum at unit scales only; one report per sign tuple
/// (e0, e123, e1, ..., e5).
std::vector<CountingReport> check_A3_unit(double s, double beta, double eta, const CountingOptions& options = {});

/// All sign tuples of the given length, first entry varying slowest, +1
/// before -1.
std::vector<std::vector<int>> sign_tuples(int length);

/// Value of the cubic sum at one m (no supremum); zero outside the range of
/// kappa.
double cubic_sum_at(double s, double beta, std::array<int, 3> scales, std::array<int, 4> signs, long m);

}  // namespace snlw
