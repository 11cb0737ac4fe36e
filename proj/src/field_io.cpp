#include "snlw/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace snlw {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("field dump truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

constexpr std::array<char, 4> kMagic{'W', 'W', 'F', '1'};

}  // namespace

void write_field(std::ostream& out, const SpectralField& field, double time) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::int32_t>(out, field.cutoff());
  put_le<std::int32_t>(out, field.side());
  put_le<double>(out, time);
  for (const Complex& c : field.raw()) {
    put_le<double>(out, c.real());
    put_le<double>(out, c.imag());
  }
  if (!out) throw std::runtime_error("failed writing field dump");
}

void write_field(const std::filesystem::path& path, const SpectralField& field, double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_field(out, field, time);
}

FieldRecord read_field(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("not a WWF1 field dump");
  const auto cutoff = get_le<std::int32_t>(in);
  const auto side = get_le<std::int32_t>(in);
  if (cutoff < 0 || side != 2 * cutoff + 1) throw std::runtime_error("inconsistent WWF1 header");
  FieldRecord rec;
  rec.time = get_le<double>(in);
  rec.field = SpectralField(cutoff);
  for (Complex& c : rec.field.raw()) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    c = {re, im};
  }
  if (rec.field.hermitian_defect() != 0.0) throw std::runtime_error("WWF1 payload is not Hermitian");
  return rec;
}

FieldRecord read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field(in);
}

}  // namespace snlw
