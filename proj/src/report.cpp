#include "snlw/report.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <fstream>
#include "json.hpp"
#include <sstream>
#include <stdexcept>

namespace snlw {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string format_number(double x) { return fmt::format("{}", x); }

std::string canonical_config(const ConfigEcho& config) {
  std::string out;
  for (const auto& [k, v] : config) out += k + "=" + v + "\n";
  return out;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("CsvTable: row width differs from header");
  rows.push_back(std::move(row));
}

void write_csv(const std::filesystem::path& path, const ConfigEcho& config, const CsvTable& table,
               std::string_view manifest_name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [k, v] : config) out << "# " << k << "=" << v << "\n";
  out << "# manifest=" << manifest_name << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Manifest::Manifest(std::string subcommand, ConfigEcho config)
    : subcommand_(std::move(subcommand)), config_(std::move(config)) {}

void Manifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path); }

std::filesystem::path Manifest::write(const std::filesystem::path& dir) const {
  nlohmann::json j;
  j["version"] = std::string(library_version());
  j["subcommand"] = subcommand_;
  j["config"] = config_;
  j["config_sha256"] = sha256_hex(canonical_config(config_));
  j["status"] = status_;
  j["partial"] = partial_;
  j["wall_clock_seconds"] = wall_clock_;
  j["rng"] = {{"generator", "philox4x32-10"}, {"blocks", rng_blocks_}};
  nlohmann::json files = nlohmann::json::array();
  for (const auto& p : outputs_) {
    files.push_back({{"name", p.filename().string()},
                     {"bytes", std::filesystem::file_size(p)},
                     {"sha256", sha256_file(p)}});
  }
  j["files"] = files;
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  return path;
}

std::string_view library_version() { return SNLW_VERSION; }

}  // namespace snlw
