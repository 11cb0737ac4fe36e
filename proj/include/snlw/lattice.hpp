#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace snlw {

using Complex = std::complex<double>;

/// A Fourier mode n in Z^3.
struct FreqIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  constexpr int norm2() const { return x * x + y * y + z * z; }
  constexpr FreqIndex operator-() const { return {-x, -y, -z}; }
  constexpr FreqIndex operator+(FreqIndex o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr FreqIndex operator-(FreqIndex o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr bool operator==(const FreqIndex&) const = default;
};

/// Japanese bracket <n> = sqrt(1 + |n|^2).
double bracket(FreqIndex n);
double bracket_of_norm2(int norm2);

/// True for the canonical owner of a conjugate pair: the first nonzero
/// component is positive.
constexpr bool lex_positive(FreqIndex n) {
  if (n.x != 0) return n.x > 0;
  if (n.y != 0) return n.y > 0;
  return n.z > 0;
}

/// All n with |n| <= cutoff, ordered by cube position.
const std::vector<FreqIndex>& ball_modes(int cutoff);

/// Canonical free modes of the ball: n = 0 followed by the lexicographically
/// positive half.
const std::vector<FreqIndex>& free_modes(int cutoff);

/// Complex Fourier coefficients of a real field on T^3 restricted to the
/// Euclidean ball |n| <= cutoff.
///
/// Storage is the dense cube [-N, N]^3 in row-major (x, y, z) order; entries
/// outside the ball are kept at zero. Mutation through set() writes the
/// conjugate mirror, so a field built only through set() is always real.
/// The raw span accessors exist for kernels (transforms, steppers) that
/// update conjugate pairs themselves.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int cutoff);

  static SpectralField constant(int cutoff, double value);
  /// e_n + e_{-n} scaled so that coeff(n) = amplitude.
  static SpectralField single_mode(int cutoff, FreqIndex n, Complex amplitude);

  int cutoff() const { return cutoff_; }
  int side() const { return 2 * cutoff_ + 1; }

  bool in_ball(FreqIndex n) const { return n.norm2() <= cutoff_ * cutoff_; }
  std::size_t offset(FreqIndex n) const {
    const auto s = static_cast<std::size_t>(side());
    return (static_cast<std::size_t>(n.x + cutoff_) * s + static_cast<std::size_t>(n.y + cutoff_)) * s +
           static_cast<std::size_t>(n.z + cutoff_);
  }

  /// Coefficient at n; zero for modes outside the ball.
  Complex operator()(FreqIndex n) const;

  /// Sets coeff(n) and coeff(-n) = conj(value). For n = 0 the value must be
  /// real.
  void set(FreqIndex n, Complex value);

  std::span<Complex> raw() { return coeffs_; }
  std::span<const Complex> raw() const { return coeffs_; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);
  /// this += factor * other; cutoffs must match.
  void axpy(double factor, const SpectralField& other);

  /// Largest |coeff(-n) - conj(coeff(n))| over the ball.
  double hermitian_defect() const;
  /// Number of stored (ball) indices.
  std::size_t mode_count() const { return ball_modes(cutoff_).size(); }

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  int cutoff_ = 0;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double factor, SpectralField a);

/// Restriction to |n| <= cutoff. Throws std::invalid_argument if the
/// requested cutoff exceeds the field's.
SpectralField project(const SpectralField& field, int cutoff);

/// Zero-padding into a larger ball. Throws if cutoff < field.cutoff().
SpectralField embed(const SpectralField& field, int cutoff);

/// Projection or zero-padding, whichever the target cutoff requires.
SpectralField resize(const SpectralField& field, int cutoff);

/// Multiplies each coefficient by weight(|n|^2).
template <class Fn>
SpectralField apply_radial(const SpectralField& field, Fn weight) {
  SpectralField out = field;
  auto data = out.raw();
  for (const FreqIndex& n : ball_modes(field.cutoff())) data[field.offset(n)] *= weight(n.norm2());
  return out;
}

}  // namespace snlw
