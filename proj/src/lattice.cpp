#include "snlw/lattice.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace snlw {

double bracket(FreqIndex n) { return std::sqrt(1.0 + static_cast<double>(n.norm2())); }

double bracket_of_norm2(int norm2) { return std::sqrt(1.0 + static_cast<double>(norm2)); }

namespace {

struct ModeTables {
  std::vector<FreqIndex> ball;
  std::vector<FreqIndex> free;
};

const ModeTables& mode_tables(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<ModeTables>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[cutoff];
  if (!slot) {
    slot = std::make_unique<ModeTables>();
    const int r2 = cutoff * cutoff;
    slot->free.push_back({0, 0, 0});
    for (int x = -cutoff; x <= cutoff; ++x)
      for (int y = -cutoff; y <= cutoff; ++y)
        for (int z = -cutoff; z <= cutoff; ++z) {
          const FreqIndex n{x, y, z};
          if (n.norm2() > r2) continue;
          slot->ball.push_back(n);
          if (lex_positive(n)) slot->free.push_back(n);
        }
  }
  return *slot;
}

void require_same_cutoff(const SpectralField& a, const SpectralField& b) {
  if (a.cutoff() != b.cutoff())
    throw std::invalid_argument("cutoff mismatch: " + std::to_string(a.cutoff()) + " vs " +
                                std::to_string(b.cutoff()));
}

}  // namespace

const std::vector<FreqIndex>& ball_modes(int cutoff) { return mode_tables(cutoff).ball; }

const std::vector<FreqIndex>& free_modes(int cutoff) { return mode_tables(cutoff).free; }

SpectralField::SpectralField(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("SpectralField: negative cutoff");
  const auto s = static_cast<std::size_t>(side());
  coeffs_.assign(s * s * s, Complex{});
}

SpectralField SpectralField::constant(int cutoff, double value) {
  SpectralField f(cutoff);
  f.set({0, 0, 0}, value);
  return f;
}

SpectralField SpectralField::single_mode(int cutoff, FreqIndex n, Complex amplitude) {
  SpectralField f(cutoff);
  f.set(n, amplitude);
  return f;
}

Complex SpectralField::operator()(FreqIndex n) const {
  if (coeffs_.empty() || !in_ball(n)) return {};
  return coeffs_[offset(n)];
}

void SpectralField::set(FreqIndex n, Complex value) {
  if (!in_ball(n)) throw std::out_of_range("SpectralField::set: mode outside the ball");
  if (n == FreqIndex{}) {
    if (value.imag() != 0.0) throw std::invalid_argument("zero mode of a real field must be real");
    coeffs_[offset(n)] = value;
    return;
  }
  coeffs_[offset(n)] = value;
  coeffs_[offset(-n)] = std::conj(value);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_cutoff(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_cutoff(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

void SpectralField::axpy(double factor, const SpectralField& other) {
  require_same_cutoff(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += factor * other.coeffs_[i];
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (const FreqIndex& n : ball_modes(cutoff_))
    worst = std::max(worst, std::abs(coeffs_[offset(-n)] - std::conj(coeffs_[offset(n)])));
  return worst;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double factor, SpectralField a) { return a *= factor; }

SpectralField project(const SpectralField& field, int cutoff) {
  if (cutoff > field.cutoff())
    throw std::invalid_argument("project: target cutoff " + std::to_string(cutoff) +
                                " exceeds field cutoff " + std::to_string(field.cutoff()));
  SpectralField out(cutoff);
  auto dst = out.raw();
  auto src = field.raw();
  for (const FreqIndex& n : ball_modes(cutoff)) dst[out.offset(n)] = src[field.offset(n)];
  return out;
}

SpectralField embed(const SpectralField& field, int cutoff) {
  if (cutoff < field.cutoff())
    throw std::invalid_argument("embed: target cutoff smaller than field cutoff");
  SpectralField out(cutoff);
  auto dst = out.raw();
  auto src = field.raw();
  for (const FreqIndex& n : ball_modes(field.cutoff())) dst[out.offset(n)] = src[field.offset(n)];
  return out;
}

SpectralField resize(const SpectralField& field, int cutoff) {
  return cutoff <= field.cutoff() ? project(field, cutoff) : embed(field, cutoff);
}

}  // namespace snlw
