#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snlw/cli.hpp"
#include "snlw/report.hpp"

using namespace snlw;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("snlw_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Csv {
  std::map<std::string, std::string> echo;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  double num(std::size_t row, const std::string& col) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == col) return std::stod(rows[row][i]);
    throw std::out_of_range(col);
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv read_csv(const fs::path& p) {
  Csv c;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      c.echo[line.substr(2, eq - 2)] = line.substr(eq + 1);
    } else if (c.header.empty()) {
      c.header = split(line);
    } else {
      c.rows.push_back(split(line));
    }
  }
  return c;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

// Every file in dir is listed in the manifest with a matching checksum.
void check_manifest(const fs::path& dir) {
  const auto m = read_json(dir / "manifest.json");
  std::set<std::string> listed;
  for (const auto& f : m["files"]) {
    const std::string name = f["name"];
    listed.insert(name);
    CHECK(f["sha256"] == sha256_file(dir / name));
    CHECK(f["bytes"].get<std::uintmax_t>() == fs::file_size(dir / name));
  }
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name != "manifest.json") CHECK_MESSAGE(listed.count(name) == 1, "orphan output ", name);
  }
}

}  // namespace

TEST_CASE("sigma table") {
  const fs::path dir = scratch("sigma");
  const Run r = run({"sigma", "--alpha", "0.25", "--N", "8", "--t-max", "1", "--steps", "10", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  const Csv c = read_csv(dir / "sigma.csv");
  REQUIRE(c.rows.size() == 11);
  for (std::size_t i = 1; i < c.rows.size(); ++i) CHECK(c.num(i, "sigma") >= c.num(i - 1, "sigma"));
  CHECK(c.num(0, "sigma") == 0.0);
  CHECK(c.echo.at("manifest") == "manifest.json");
  CHECK(c.echo.at("N") == "8");
  CHECK(c.echo.at("subcommand") == "sigma");
  CHECK(c.echo.count("out") == 0);
  check_manifest(dir);
  const auto m = read_json(dir / "manifest.json");
  CHECK(m["status"] == "ok");
  CHECK(m["partial"] == false);
  CHECK(m["config_sha256"].get<std::string>().size() == 64);
}

TEST_CASE("invalid configuration") {
  const fs::path dir = scratch("bad");
  const Run r = run({"sigma", "--N", "0", "--out", dir.string()});
  CHECK(r.code == cli::kInvalidConfig);
  const auto e = nlohmann::json::parse(r.err);
  CHECK(e["exit_code"] == 2);
  CHECK(e["error"] == "invalid_config");
  CHECK(fs::exists(dir / "error.json"));
  check_manifest(dir);
  CHECK(run({"nosuch"}).code == cli::kInvalidConfig);
  CHECK(run({"sigma", "--alpha", "abc"}).code == cli::kInvalidConfig);
  CHECK(run({"sigma", "--bogus", "1"}).code == cli::kInvalidConfig);
  CHECK(run({"regularity", "--object", "tree99", "--out", scratch("bad2").string()}).code == cli::kInvalidConfig);
  CHECK(run({"simulate", "--dt", "0.3", "--T", "1", "--out", scratch("bad3").string()}).code == cli::kInvalidConfig);
}

TEST_CASE("config file with flag override") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "# sigma run\nalpha = 0.5\nN = 4\nsteps = 4\n";
  }
  const fs::path out = dir / "out";
  const Run r = run({"sigma", "--config", (dir / "run.cfg").string(), "--N", "6", "--out", out.string()});
  REQUIRE(r.code == cli::kOk);
  const Csv c = read_csv(out / "sigma.csv");
  CHECK(c.echo.at("alpha") == "0.5");
  CHECK(c.echo.at("N") == "6");
  CHECK(c.rows.size() == 5);
  CHECK(run({"sigma", "--config", (dir / "missing.cfg").string()}).code == cli::kInvalidConfig);
}

TEST_CASE("output root from the environment") {
  const fs::path root = scratch("envroot");
  ::setenv(cli::kOutputRootVariable, root.string().c_str(), 1);
  const Run r = run({"sigma", "--N", "2", "--steps", "2"});
  ::unsetenv(cli::kOutputRootVariable);
  CHECK(r.code == cli::kOk);
  CHECK(fs::exists(root / "sigma" / "sigma.csv"));
}

TEST_CASE("results do not depend on the worker count") {
  std::vector<std::string> args{"converge", "--object", "conv1", "--alpha", "0.25", "--levels", "2,4,8",
                                "--replicas", "24", "--seed", "7", "--dt", "0.1"};
  auto go = [&](const std::string& name, const std::string& workers) {
    auto a = args;
    a.insert(a.end(), {"--workers", workers, "--out", scratch(name).string()});
    REQUIRE(run(a).code == cli::kOk);
    return slurp(scratch(name).parent_path() / name / "converge.csv");
  };
  const std::string one = go("w1", "1");
  CHECK(one == go("w1b", "1"));
  CHECK(one == go("w3", "3"));
}

TEST_CASE("budget and blow-up exit codes") {
  const fs::path dir = scratch("budget");
  CHECK(run({"counting", "--lemma", "A1", "--scales", "2", "--budget", "100", "--out", dir.string()}).code ==
        cli::kBudgetExceeded);
  check_manifest(dir);

  const fs::path sim = scratch("blowup");
  const Run r = run({"simulate", "--N", "2", "--dt", "0.01", "--T", "0.1", "--blowup-ceiling", "1e-9", "--replicas",
                     "2", "--out", sim.string()});
  CHECK(r.code == cli::kBlowUp);
  const auto m = read_json(sim / "manifest.json");
  CHECK(m["status"] == "blowup");
  CHECK(m["partial"] == true);
  const Csv c = read_csv(sim / "simulate.csv");
  bool flagged = false;
  for (const auto& row : c.rows) flagged = flagged || row[3] == "blowup";
  CHECK(flagged);
  check_manifest(sim);
}

TEST_CASE("other subcommands write their tables") {
  const fs::path a = scratch("objects");
  REQUIRE(run({"objects", "--N", "2", "--dt", "0.1", "--T", "0.3", "--record-every", "1", "--dump", "1", "--out", a.string()}).code == 0);
  CHECK(read_csv(a / "objects.csv").rows.size() == 7 * 4);
  CHECK(fs::exists(a / "tree70.wwf"));
  check_manifest(a);
  const fs::path b = scratch("wick");
  REQUIRE(run({"wick", "--N", "2", "--replicas", "20", "--dt", "0.25", "--out", b.string()}).code == 0);
  check_manifest(b);
  const fs::path c = scratch("xsb");
  REQUIRE(run({"xsb", "--N", "2", "--dt", "0.05", "--T", "0.5", "--out", c.string()}).code == 0);
  check_manifest(c);
  const fs::path d = scratch("simulate");
  REQUIRE(run({"simulate", "--N", "2", "--dt", "0.01", "--T", "0.05", "--record-every", "1", "--out", d.string()}).code ==
          0);
  CHECK(read_csv(d / "simulate.csv").rows.size() == 6);
  check_manifest(d);
}

TEST_CASE("regularity row matches an offline refit of the dumped moments") {
  const fs::path dir = scratch("regularity");
  REQUIRE(run({"regularity", "--object", "tree30", "--alpha", "0.125", "--N", "8", "--replicas", "60", "--seed",
               "3", "--out", dir.string()})
              .code == cli::kOk);
  check_manifest(dir);
  const Csv m = read_csv(dir / "moments.csv");
  // Refit: dyadic shells 4^{j-1} < |n|^2 <= 4^j, log-domain means, weights from
  // the delta method.
  struct Shell {
    int k = 0;
    double x = 0, y = 0, var = 0;
  };
  std::map<int, Shell> shells;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const int nx = std::stoi(m.rows[i][0]), ny = std::stoi(m.rows[i][1]), nz = std::stoi(m.rows[i][2]);
    const int n2 = nx * nx + ny * ny + nz * nz;
    if (n2 <= 1) continue;
    int j = 1;
    while ((1 << (2 * j)) < n2) ++j;
    const double mom = m.num(i, "moment");
    Shell& s = shells[j];
    ++s.k;
    s.x += 0.5 * std::log(1.0 + n2);
    s.y += std::log(mom);
    s.var += m.num(i, "moment_variance") / (mom * mom);
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (auto& [j, s] : shells) {
    if (2 * s.k < 20) continue;
    const double x = s.x / s.k, y = s.y / s.k, w = 1.0 / (s.var / (s.k * s.k));
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++used;
  }
  const double det = sw * sxx - sx * sx;
  const double slope = (sw * sxy - sx * sy) / det;
  const double stderr_slope = std::sqrt(sw / det);
  const Csv row = read_csv(dir / "regularity.csv");
  CHECK(row.num(0, "annuli") == used);
  CHECK(row.num(0, "slope") == doctest::Approx(slope).epsilon(1e-9));
  CHECK(row.num(0, "stderr") == doctest::Approx(stderr_slope).epsilon(1e-9));
  CHECK(row.num(0, "s0") == doctest::Approx((-slope - 3.0) / 2.0).epsilon(1e-9));
}
