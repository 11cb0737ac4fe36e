#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace snlw {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Shortest decimal that round-trips the double.
std::string format_number(double x);

using ConfigEcho = std::map<std::string, std::string>;

/// "key=value" lines in key order; the hash of this text identifies a run.
std::string canonical_config(const ConfigEcho& config);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

/// Writes "# key=value" echo lines, a "# manifest=..." reference, the header
/// and the rows.
void write_csv(const std::filesystem::path& path, const ConfigEcho& config, const CsvTable& table,
               std::string_view manifest_name = "manifest.json");

/// Run record listing every output with its checksum.
class Manifest {
 public:
  Manifest(std::string subcommand, ConfigEcho config);

  void add_output(const std::filesystem::path& path);
  void set_rng_blocks(std::uint64_t blocks) { rng_blocks_ = blocks; }
  void set_wall_clock(double seconds) { wall_clock_ = seconds; }
  void set_status(std::string status, bool partial) {
    status_ = std::move(status);
    partial_ = partial;
  }
  const std::vector<std::filesystem::path>& outputs() const { return outputs_; }

  /// Serializes to dir / "manifest.json" and returns the path.
  std::filesystem::path write(const std::filesystem::path& dir) const;

 private:
  std::string subcommand_;
  ConfigEcho config_;
  std::vector<std::filesystem::path> outputs_;
  std::uint64_t rng_blocks_ = 0;
  double wall_clock_ = 0.0;
  std::string status_ = "ok";
  bool partial_ = false;
};

std::string_view library_version();

}  // namespace snlw
