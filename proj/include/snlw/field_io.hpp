#pragma once

#include <filesystem>
#include <iosfwd>

#include "snlw/lattice.hpp"

namespace snlw {

/// Binary field dump ("WWF1"). Layout, all little-endian:
///   bytes 0-3   magic "WWF1"
///   int32       N, the ball cutoff
///   int32       M, points per cube axis (2N + 1)
///   float64     time t
///   then (2N+1)^3 coefficients in row-major (x, y, z) cube order over
///   [-N, N]^3, each as an interleaved (real, imag) float64 pair. Entries
///   outside the ball are zero.
struct FieldRecord {
  double time = 0.0;
  SpectralField field;
};

void write_field(std::ostream& out, const SpectralField& field, double time);
void write_field(const std::filesystem::path& path, const SpectralField& field, double time);

/// Throws std::runtime_error on a bad magic, truncated payload, or a field
/// that is not Hermitian-symmetric.
FieldRecord read_field(std::istream& in);
FieldRecord read_field(const std::filesystem::path& path);

}  // namespace snlw
