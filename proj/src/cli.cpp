#include "snlw/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "snlw/counting.hpp"
#include "snlw/diagnostics.hpp"
#include "snlw/ensemble.hpp"
#include "snlw/field_io.hpp"
#include "snlw/noise.hpp"
#include "snlw/objects.hpp"
#include "snlw/renorm.hpp"
#include "snlw/report.hpp"
#include "snlw/solver.hpp"

namespace snlw::cli {

namespace {

namespace fs = std::filesystem;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key = value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

// Splices config-file entries in front of the command-line flags so that the
// latter win (options take their last value).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> flags;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      flags.push_back(args[i]);
    }
  }
  if (config.empty()) return flags;
  std::vector<std::string> out;
  std::size_t pos = 0;
  if (!flags.empty() && flags[0].rfind("-", 0) != 0) out.push_back(flags[pos++]);
  for (const auto& [k, v] : read_config_file(config)) {
    out.push_back("--" + k);
    out.push_back(v);
  }
  out.insert(out.end(), flags.begin() + static_cast<std::ptrdiff_t>(pos), flags.end());
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double d : parse_doubles(text, what)) {
    if (d != std::floor(d)) throw ConfigError(std::string(what) + ": expected integers");
    out.push_back(static_cast<int>(d));
  }
  return out;
}

std::vector<std::string> parse_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

int steps_for(double t, double dt, const char* what) {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(t > 0.0)) throw ConfigError(std::string(what) + " must be > 0");
  const long k = std::lround(t / dt);
  if (k < 1 || std::abs(static_cast<double>(k) * dt - t) > 1e-9 * t)
    throw ConfigError(std::string(what) + " must be a positive multiple of dt");
  return static_cast<int>(k);
}

std::string num(double x) { return format_number(x); }

// Everything a subcommand needs to emit outputs.
struct Context {
  fs::path dir;
  ConfigEcho echo;
  std::string subcommand;
  int workers = 1;
  bool dump = false;
  std::uint64_t rng_blocks = 0;
  std::vector<fs::path> outputs;

  void csv(const std::string& name, const CsvTable& table) {
    const fs::path p = dir / name;
    write_csv(p, echo, table);
    outputs.push_back(p);
  }
  void field(const std::string& name, const SpectralField& f, double t) {
    const fs::path p = dir / name;
    write_field(p, f, t);
    outputs.push_back(p);
  }
};

// ---- option bundles -------------------------------------------------------

struct Common {
  std::string out;
  int workers = 1;
  bool dump = false;
};

struct SigmaArgs {
  double alpha = 0.25;
  int n = 8;
  double t_max = 1.0;
  int steps = 10;
};

struct SimulateArgs {
  double alpha = 0.25;
  int n = 4;
  int m = -1;
  double dt = 1e-3;
  double t = 0.5;
  std::uint64_t seed = 0;
  int replicas = 1;
  bool renormalize = true;
  double amplitude = 0.0;
  std::string norms = "0,1";
  int record_every = 10;
  double ceiling = 1e8;
};

struct ObjectsArgs {
  double alpha = 0.25;
  int n = 4;
  int m = -1;
  double dt = 0.01;
  double t = 1.0;
  std::uint64_t seed = 0;
  std::string objects = "conv1,wick2,wick3,tree30,tree30_conv1,tree320,tree70";
  std::string norms = "-1,0";
  int record_every = 10;
};

struct RegularityArgs {
  std::string object = "conv1";
  double alpha = 0.25;
  int n = 8;
  int m = -1;
  double dt = 0.02;
  double t = 1.0;
  std::uint64_t seed = 0;
  int replicas = 100;
  double max_radius = 0.0;
};

struct ConvergeArgs {
  std::string object = "conv1";
  double alpha = 0.25;
  std::string levels = "4,8,16";
  double dt = 0.05;
  double t = 1.0;
  std::uint64_t seed = 0;
  int replicas = 100;
  double s = std::nan("");
  std::string norm = "hs";
};

struct CountingArgs {
  std::string lemmas = "A1,A1a,A2,A5";
  std::string scales = "1,2,4";
  double s = 0.25;
  double beta = 0.25;
  double beta_a5 = 0.25;
  double epsilon = 0.1;
  int pair_radius = 4;
  double budget = 4e9;
  bool quintic = false;
};

struct WickArgs {
  double alpha = 0.25;
  int n = 4;
  double dt = 0.1;
  double t = 1.0;
  std::uint64_t seed = 0;
  int replicas = 1000;
};

struct XsbArgs {
  std::string object = "tree320";
  double alpha = 0.25;
  int n = 4;
  int m = -1;
  double dt = 0.01;
  double t = 1.0;
  std::uint64_t seed = 0;
  double s = 0.0;
  double b = 0.0;
  std::string window = "hann";
};

// ---- subcommands ----------------------------------------------------------

int cmd_sigma(const SigmaArgs& a, Context& ctx) {
  if (a.n < 1) throw ConfigError("N must be >= 1");
  if (a.steps < 1) throw ConfigError("steps must be >= 1");
  if (!(a.t_max > 0.0)) throw ConfigError("t-max must be > 0");
  CsvTable table{{"step", "t", "sigma"}, {}};
  for (int k = 0; k <= a.steps; ++k) {
    const double t = a.t_max * k / a.steps;
    table.add({std::to_string(k), num(t), num(sigma(t, a.n, a.alpha))});
  }
  ctx.csv("sigma.csv", table);
  return kOk;
}

SolveConfig solve_config(const SimulateArgs& a) {
  SolveConfig c;
  c.alpha = a.alpha;
  c.noise_cutoff = a.n;
  c.galerkin_cutoff = a.m;
  c.dt = a.dt;
  c.steps = steps_for(a.t, a.dt, "T");
  c.renormalize = a.renormalize;
  c.blowup_ceiling = a.ceiling;
  c.record_every = a.record_every;
  validate(c);
  return c;
}

int cmd_simulate(const SimulateArgs& a, Context& ctx) {
  const SolveConfig base = solve_config(a);
  const std::vector<double> norms = parse_doubles(a.norms, "norms");
  if (a.replicas < 1) throw ConfigError("replicas must be >= 1");
  if (a.record_every < 1) throw ConfigError("record-every must be >= 1");

  struct Acc {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<int, WaveState>> finals;
    std::uint64_t blocks = 0;
    int blowups = 0;
    void merge(const Acc& o) {
      rows.insert(rows.end(), o.rows.begin(), o.rows.end());
      finals.insert(finals.end(), o.finals.begin(), o.finals.end());
      blocks += o.blocks;
      blowups += o.blowups;
    }
  };
  auto body = [&](Acc& acc, int r) {
    SolveConfig c = base;
    const std::uint64_t seed = replica_seed(a.seed, static_cast<std::uint64_t>(r));
    if (a.amplitude > 0.0) {
      c.u0 = smooth_random_field(c.galerkin(), replica_seed(seed, 0x75), a.amplitude);
      c.u1 = smooth_random_field(c.galerkin(), replica_seed(seed, 0x76), a.amplitude);
    }
    const NoisePath path = sample_path(noise_config(c, seed));
    acc.blocks += path.rng_blocks();
    TruncatedStepper stepper(c, path);
    auto emit = [&](const char* status) {
      const WaveState& s = stepper.state();
      std::vector<std::string> row{std::to_string(r), std::to_string(stepper.step()), num(s.t), status};
      for (double sv : norms) row.push_back(num(hs_norm(s.u, sv)));
      acc.rows.push_back(std::move(row));
    };
    emit("ok");
    try {
      while (!stepper.done()) {
        stepper.advance();
        if (stepper.step() % c.record_every == 0 || stepper.done()) emit("ok");
      }
      acc.finals.emplace_back(r, stepper.state());
    } catch (const BlowUpError& e) {
      ++acc.blowups;
      std::vector<std::string> row{std::to_string(r), std::to_string(stepper.step() + 1), num(e.time()), "blowup"};
      for (std::size_t i = 0; i < norms.size(); ++i) row.push_back("nan");
      acc.rows.push_back(std::move(row));
    }
  };
  const Acc total = run_ensemble<Acc>(a.replicas, ctx.workers, 1, [] { return Acc{}; }, body);
  CsvTable table{{"replica", "step", "t", "status"}, total.rows};
  for (double sv : norms) table.columns.push_back("hs_" + num(sv));
  ctx.csv("simulate.csv", table);
  if (ctx.dump)
    for (const auto& [r, s] : total.finals) ctx.field("u_r" + std::to_string(r) + ".wwf", s.u, s.t);
  ctx.rng_blocks = total.blocks;
  return total.blowups > 0 ? kBlowUp : kOk;
}

NoiseConfig object_noise(double alpha, int n, double dt, double t, std::uint64_t seed) {
  NoiseConfig nc;
  nc.alpha = alpha;
  nc.cutoff = n;
  nc.dt = dt;
  nc.steps = steps_for(t, dt, "T");
  nc.seed = seed;
  validate(nc);
  return nc;
}

int galerkin_or_default(int m, int n) {
  const int g = m < 0 ? 2 * n : m;
  if (g < n) throw ConfigError("M must be >= N");
  return g;
}

int cmd_objects(const ObjectsArgs& a, Context& ctx) {
  const NoiseConfig nc = object_noise(a.alpha, a.n, a.dt, a.t, a.seed);
  const int m = galerkin_or_default(a.m, a.n);
  ObjectMask mask;
  std::vector<ObjectKind> kinds;
  for (const auto& w : parse_words(a.objects)) {
    kinds.push_back(parse_object(w));
    mask.add(kinds.back());
  }
  if (kinds.empty()) throw ConfigError("objects: empty list");
  const std::vector<double> norms = parse_doubles(a.norms, "norms");
  if (a.record_every < 1) throw ConfigError("record-every must be >= 1");
  const NoisePath path = sample_path(nc);
  ctx.rng_blocks = path.rng_blocks();
  ObjectBuilder builder(path, m, mask);
  CsvTable table{{"object", "step", "t", "sigma", "cutoff"}, {}};
  for (double sv : norms) table.columns.push_back("hs_" + num(sv));
  auto emit = [&] {
    const ObjectSnapshot& s = builder.current();
    for (ObjectKind k : kinds) {
      const SpectralField& f = s.member(k);
      std::vector<std::string> row{std::string(object_name(k)), std::to_string(s.step), num(s.time), num(s.sigma),
                                   std::to_string(f.cutoff())};
      for (double sv : norms) row.push_back(num(hs_norm(f, sv)));
      table.add(std::move(row));
    }
  };
  emit();
  while (!builder.done()) {
    builder.advance();
    if (builder.current().step % a.record_every == 0 || builder.done()) emit();
  }
  ctx.csv("objects.csv", table);
  if (ctx.dump)
    for (ObjectKind k : kinds)
      ctx.field(std::string(object_name(k)) + ".wwf", builder.current().member(k), builder.current().time);
  return kOk;
}

int cmd_regularity(const RegularityArgs& a, Context& ctx) {
  const ObjectKind kind = parse_object(a.object);
  NoiseConfig nc = object_noise(a.alpha, a.n, a.dt, a.t, a.seed);
  const int m = galerkin_or_default(a.m, a.n);
  if (a.replicas < 2) throw ConfigError("replicas must be >= 2");
  const int cutoff = kind == ObjectKind::conv1 ? a.n : m;

  struct Acc {
    ModeMomentAccumulator moments;
    std::uint64_t blocks = 0;
    void merge(const Acc& o) {
      moments.merge(o.moments);
      blocks += o.blocks;
    }
  };
  auto body = [&](Acc& acc, int r) {
    NoiseConfig c = nc;
    c.seed = replica_seed(a.seed, static_cast<std::uint64_t>(r));
    const NoisePath path = sample_path(c);
    acc.blocks += path.rng_blocks();
    ObjectBuilder b(path, m, ObjectMask{kind});
    while (!b.done()) b.advance();
    acc.moments.add(b.current().member(kind));
  };
  const Acc total = run_ensemble<Acc>(a.replicas, ctx.workers, 8, [&] { return Acc{ModeMomentAccumulator(cutoff), 0}; },
                                      body);
  ctx.rng_blocks = total.blocks;
  const auto samples = mode_samples(total.moments);
  CsvTable moments{{"nx", "ny", "nz", "moment", "moment_variance"}, {}};
  for (const ModeSample& s : samples)
    moments.add({std::to_string(s.n.x), std::to_string(s.n.y), std::to_string(s.n.z), num(s.moment), num(s.variance)});
  ctx.csv("moments.csv", moments);

  AnnulusSpec spec;
  spec.max_radius = a.max_radius;
  const RegularityFit fit = fit_regularity(samples, spec);
  CsvTable annuli{{"lo", "hi", "modes", "log_bracket", "log_moment", "log_stderr"}, {}};
  for (const Annulus& an : fit.annuli)
    annuli.add({num(an.lo), num(an.hi), std::to_string(an.modes), num(an.log_bracket), num(an.log_moment),
                num(an.log_stderr)});
  ctx.csv("annuli.csv", annuli);
  CsvTable row{{"object", "N", "cutoff", "replicas", "annuli", "slope", "intercept", "stderr", "stderr_scaled", "chi2_dof", "s0"}, {}};
  row.add({a.object, std::to_string(a.n), std::to_string(cutoff), std::to_string(a.replicas),
           std::to_string(fit.annuli.size()), num(fit.slope), num(fit.intercept), num(fit.stderr_slope),
           num(fit.stderr_scaled), num(fit.chi2_dof), num(fit.s0())});
  ctx.csv("regularity.csv", row);
  return kOk;
}

int cmd_converge(const ConvergeArgs& a, Context& ctx) {
  CauchyConfig c;
  c.object = parse_object(a.object);
  if (a.norm == "hs")
    c.norm = NormKind::hs;
  else if (a.norm == "wsinf")
    c.norm = NormKind::wsinf;
  else
    throw ConfigError("norm must be hs or wsinf");
  c.s = std::isnan(a.s) ? a.alpha - 0.6 : a.s;
  c.levels = parse_ints(a.levels, "levels");
  c.alpha = a.alpha;
  c.t = a.t;
  c.dt = a.dt;
  steps_for(a.t, a.dt, "t");
  c.replicas = a.replicas;
  c.seed = a.seed;
  c.workers = ctx.workers;
  const CauchyTable tab = cauchy_table(c);
  CsvTable table{{"N", "N_next", "mean_norm", "stderr_norm", "mean_norm_sq", "stderr_norm_sq", "tail_sum"}, {}};
  for (const CauchyRow& r : tab.rows) {
    const bool oracle = c.object == ObjectKind::conv1 && c.norm == NormKind::hs;
    table.add({std::to_string(r.level), std::to_string(r.next_level), num(r.norm.mean()), num(r.norm.stderr_mean()),
               num(r.norm_sq.mean()), num(r.norm_sq.stderr_mean()),
               oracle ? num(conv1_tail_sum(r.level, r.next_level, c.s, c.alpha, c.t)) : "nan"});
  }
  ctx.csv("converge.csv", table);
  return kOk;
}

std::string sign_text(const std::vector<int>& signs) {
  std::string s;
  for (int e : signs) s += e > 0 ? '+' : '-';
  return s;
}

std::string scale_text(const std::vector<int>& scales) {
  std::string s;
  for (std::size_t i = 0; i < scales.size(); ++i) s += (i ? "x" : "") + std::to_string(scales[i]);
  return s;
}

int cmd_counting(const CountingArgs& a, Context& ctx) {
  const auto lemmas = parse_words(a.lemmas);
  const auto scales = parse_ints(a.scales, "scales");
  if (lemmas.empty() || scales.empty()) throw ConfigError("counting: empty lemma or scale list");
  for (const auto& l : lemmas)
    if (l != "A1" && l != "A1a" && l != "A2" && l != "A5") throw ConfigError("counting: unknown lemma " + l);
  if (!(a.budget >= 1.0)) throw ConfigError("budget must be >= 1");
  CountingOptions opt;
  opt.budget = static_cast<std::uint64_t>(a.budget);
  opt.pair_radius = a.pair_radius;
  opt.epsilon = a.epsilon;

  struct Job {
    std::string lemma;
    int scale;
  };
  std::vector<Job> jobs;
  for (const auto& l : lemmas)
    for (int n : scales) jobs.push_back({l, n});
  struct Acc {
    std::vector<CountingReport> reports;
    void merge(const Acc& o) { reports.insert(reports.end(), o.reports.begin(), o.reports.end()); }
  };
  auto body = [&](Acc& acc, int j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    const std::array<int, 3> sc{job.scale, job.scale, job.scale};
    std::vector<CountingReport> r;
    if (job.lemma == "A1") r = check_cubic_sum(a.s, a.beta, sc, opt);
    if (job.lemma == "A1a") r = check_lattice_count(sc, opt);
    if (job.lemma == "A2") r = check_resonant(job.scale, opt);
    if (job.lemma == "A5") r = check_A5(sc, a.beta_a5, opt);
    acc.reports.insert(acc.reports.end(), r.begin(), r.end());
  };
  Acc total = run_ensemble<Acc>(static_cast<int>(jobs.size()), ctx.workers, 1, [] { return Acc{}; }, body);
  if (a.quintic) {
    const auto q = check_A3_unit(a.s, a.beta, 0.5 - a.s, opt);
    total.reports.insert(total.reports.end(), q.begin(), q.end());
  }

  CsvTable table{{"lemma", "scales", "signs", "lhs", "bound", "ratio", "argmax_m", "enumerated"}, {}};
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> ladder;
  for (const CountingReport& r : total.reports) {
    table.add({r.lemma, scale_text(r.scales), sign_text(r.signs), num(r.lhs), num(r.bound), num(r.ratio),
               std::to_string(r.argmax_m), std::to_string(r.enumerated)});
    auto [it, fresh] = ladder.try_emplace({r.lemma, sign_text(r.signs)}, r.ratio, r.ratio);
    if (!fresh) {
      it->second.first = std::min(it->second.first, r.ratio);
      it->second.second = std::max(it->second.second, r.ratio);
    }
  }
  ctx.csv("counting.csv", table);
  CsvTable summary{{"lemma", "signs", "min_ratio", "max_ratio", "spread"}, {}};
  for (const auto& [key, mm] : ladder)
    summary.add({key.first, key.second, num(mm.first), num(mm.second),
                 mm.first > 0.0 ? num(mm.second / mm.first) : "inf"});
  ctx.csv("counting_ladder.csv", summary);
  return kOk;
}

int cmd_wick(const WickArgs& a, Context& ctx) {
  const NoiseConfig nc = object_noise(a.alpha, a.n, a.dt, a.t, a.seed);
  if (a.replicas < 2) throw ConfigError("replicas must be >= 2");
  const double sig = sigma(nc.horizon(), a.n, a.alpha);
  struct Acc {
    WickAccumulator wick;
    std::uint64_t blocks = 0;
    void merge(const Acc& o) {
      wick.merge(o.wick);
      blocks += o.blocks;
    }
  };
  auto body = [&](Acc& acc, int r) {
    NoiseConfig c = nc;
    c.seed = replica_seed(a.seed, static_cast<std::uint64_t>(r));
    const NoisePath path = sample_path(c);
    acc.blocks += path.rng_blocks();
    ObjectBuilder b(path, a.n, ObjectMask{ObjectKind::conv1});
    while (!b.done()) b.advance();
    const SpectralField& u = b.current().conv1;
    acc.wick.add(wick_square(u, sig), wick_cube(u, sig));
  };
  const Acc total = run_ensemble<Acc>(a.replicas, ctx.workers, 16, [] { return Acc{}; }, body);
  ctx.rng_blocks = total.blocks;
  CsvTable table{{"quantity", "probe", "estimate", "expected", "stderr", "z"}, {}};
  for (const WickRow& r : wick_identity_report(total.wick, a.n, a.alpha, nc.horizon()))
    table.add({r.quantity, std::to_string(r.probe), num(r.estimate), num(r.expected), num(r.stderr_estimate), num(r.z)});
  ctx.csv("wick.csv", table);
  return kOk;
}

int cmd_xsb(const XsbArgs& a, Context& ctx) {
  const ObjectKind kind = parse_object(a.object);
  const NoiseConfig nc = object_noise(a.alpha, a.n, a.dt, a.t, a.seed);
  const int m = galerkin_or_default(a.m, a.n);
  Window w;
  if (a.window == "hann")
    w = Window::hann;
  else if (a.window == "rectangular")
    w = Window::rectangular;
  else
    throw ConfigError("window must be hann or rectangular");
  const NoisePath path = sample_path(nc);
  ctx.rng_blocks = path.rng_blocks();
  const ObjectSet set = build_objects(path, m, ObjectMask{kind});
  const XsbResult res = xsb_norm(set[kind], a.s, a.b, w);
  CsvTable table{{"object", "N", "cutoff", "s", "b", "window", "norm", "window_mass"}, {}};
  table.add({a.object, std::to_string(a.n), std::to_string(set[kind].cutoff()), num(a.s), num(a.b), a.window,
             num(res.norm), num(res.window_mass)});
  ctx.csv("xsb.csv", table);
  return kOk;
}

// ---- plumbing -------------------------------------------------------------

ConfigEcho echo_options(const CLI::App& sub) {
  ConfigEcho echo;
  for (const CLI::Option* o : sub.get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string name = o->get_lnames().front();
    if (name == "help" || name == "out" || name == "workers") continue;
    std::string value;
    if (o->count() > 0) {
      // Every option takes its last value; echo that one.
      value = o->results().back();
    } else {
      value = o->get_default_str();
    }
    echo[name] = value;
  }
  return echo;
}

std::string error_record(const std::string& kind, const std::string& message, int code) {
  nlohmann::json j{{"error", kind}, {"message", message}, {"exit_code", code}};
  return j.dump();
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Common common;
  SigmaArgs sg;
  SimulateArgs sm;
  ObjectsArgs ob;
  RegularityArgs rg;
  ConvergeArgs cv;
  CountingArgs ct;
  WickArgs wk;
  XsbArgs xs;

  CLI::App app{"Monte Carlo experiments for the renormalized stochastic cubic wave equation on T^3", "snlw"};
  app.option_defaults()->take_last()->always_capture_default();
  app.require_subcommand(1);
  auto common_opts = [&common](CLI::App* s) {
    s->add_option("--out", common.out, "Output directory");
    s->add_option("--workers", common.workers, "Worker threads (0 = all cores); never changes results");
    s->add_option("--dump", common.dump, "Also write binary field dumps");
  };

  CLI::App* s_sigma = app.add_subcommand("sigma", "Tabulate the renormalization constant");
  s_sigma->add_option("--alpha", sg.alpha);
  s_sigma->add_option("--N", sg.n);
  s_sigma->add_option("--t-max", sg.t_max);
  s_sigma->add_option("--steps", sg.steps);

  CLI::App* s_sim = app.add_subcommand("simulate", "Solve the truncated renormalized equation");
  s_sim->add_option("--alpha", sm.alpha);
  s_sim->add_option("--N", sm.n);
  s_sim->add_option("--M", sm.m, "Galerkin cutoff (-1 = 2N)");
  s_sim->add_option("--dt", sm.dt);
  s_sim->add_option("--T", sm.t);
  s_sim->add_option("--seed", sm.seed);
  s_sim->add_option("--replicas", sm.replicas);
  s_sim->add_option("--renormalize", sm.renormalize);
  s_sim->add_option("--data-amplitude", sm.amplitude, "Amplitude of smooth random initial data (0 = zero data)");
  s_sim->add_option("--norms", sm.norms, "Comma-separated Sobolev indices");
  s_sim->add_option("--record-every", sm.record_every);
  s_sim->add_option("--blowup-ceiling", sm.ceiling);

  CLI::App* s_obj = app.add_subcommand("objects", "Build the stochastic objects on one path");
  s_obj->add_option("--alpha", ob.alpha);
  s_obj->add_option("--N", ob.n);
  s_obj->add_option("--M", ob.m);
  s_obj->add_option("--dt", ob.dt);
  s_obj->add_option("--T", ob.t);
  s_obj->add_option("--seed", ob.seed);
  s_obj->add_option("--objects", ob.objects);
  s_obj->add_option("--norms", ob.norms);
  s_obj->add_option("--record-every", ob.record_every);

  CLI::App* s_reg = app.add_subcommand("regularity", "Fit per-mode moment decay of an object");
  s_reg->add_option("--object", rg.object);
  s_reg->add_option("--alpha", rg.alpha);
  s_reg->add_option("--N", rg.n);
  s_reg->add_option("--M", rg.m);
  s_reg->add_option("--dt", rg.dt);
  s_reg->add_option("--t", rg.t);
  s_reg->add_option("--seed", rg.seed);
  s_reg->add_option("--replicas", rg.replicas);
  s_reg->add_option("--max-radius", rg.max_radius);

  CLI::App* s_conv = app.add_subcommand("converge", "Level differences on nested paths");
  s_conv->add_option("--object", cv.object);
  s_conv->add_option("--alpha", cv.alpha);
  s_conv->add_option("--levels", cv.levels);
  s_conv->add_option("--dt", cv.dt);
  s_conv->add_option("--t", cv.t);
  s_conv->add_option("--seed", cv.seed);
  s_conv->add_option("--replicas", cv.replicas);
  s_conv->add_option("--s", cv.s, "Sobolev index (default alpha - 0.6)");
  s_conv->add_option("--norm", cv.norm, "hs or wsinf");

  CLI::App* s_cnt = app.add_subcommand("counting", "Exhaustive lattice counting sums");
  s_cnt->add_option("--lemma", ct.lemmas, "Comma-separated subset of A1,A1a,A2,A5");
  s_cnt->add_option("--scales", ct.scales, "Diagonal dyadic scales");
  s_cnt->add_option("--s", ct.s);
  s_cnt->add_option("--beta", ct.beta);
  s_cnt->add_option("--beta-a5", ct.beta_a5);
  s_cnt->add_option("--epsilon", ct.epsilon);
  s_cnt->add_option("--pair-radius", ct.pair_radius);
  s_cnt->add_option("--budget", ct.budget);
  s_cnt->add_option("--quintic", ct.quintic, "Also run the quintic sum at unit scales");

  CLI::App* s_wick = app.add_subcommand("wick", "Wick-law z-scores");
  s_wick->add_option("--alpha", wk.alpha);
  s_wick->add_option("--N", wk.n);
  s_wick->add_option("--dt", wk.dt);
  s_wick->add_option("--t", wk.t);
  s_wick->add_option("--seed", wk.seed);
  s_wick->add_option("--replicas", wk.replicas);

  CLI::App* s_xsb = app.add_subcommand("xsb", "Windowed X^{s,b} norm of an object trajectory");
  s_xsb->add_option("--object", xs.object);
  s_xsb->add_option("--alpha", xs.alpha);
  s_xsb->add_option("--N", xs.n);
  s_xsb->add_option("--M", xs.m);
  s_xsb->add_option("--dt", xs.dt);
  s_xsb->add_option("--T", xs.t);
  s_xsb->add_option("--seed", xs.seed);
  s_xsb->add_option("--s", xs.s);
  s_xsb->add_option("--b", xs.b);
  s_xsb->add_option("--window", xs.window);

  for (CLI::App* s : {s_sigma, s_sim, s_obj, s_reg, s_conv, s_cnt, s_wick, s_xsb}) common_opts(s);

  Context ctx;
  bool dir_ready = false;
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&](const std::string& status, int code) {
    Manifest manifest(ctx.subcommand, ctx.echo);
    for (const auto& p : ctx.outputs) manifest.add_output(p);
    manifest.set_rng_blocks(ctx.rng_blocks);
    manifest.set_status(status, code != kOk);
    manifest.set_wall_clock(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return manifest.write(ctx.dir);
  };
  // Once the output directory exists every failure leaves error.json and a
  // manifest that lists it next to whatever was already written.
  auto fail = [&](const std::string& kind, const std::string& msg, int code) {
    const std::string rec = error_record(kind, msg, code);
    err << rec << "\n";
    if (dir_ready) {
      {
        std::ofstream f(ctx.dir / "error.json");
        f << rec << "\n";
      }
      ctx.outputs.push_back(ctx.dir / "error.json");
      finish(kind, code);
    }
    return code;
  };

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail("invalid_config", e.what(), kInvalidConfig);
  } catch (const ConfigError& e) {
    return fail("invalid_config", e.what(), kInvalidConfig);
  }

  CLI::App* sub = app.get_subcommands().front();
  ctx.subcommand = sub->get_name();
  ctx.echo = echo_options(*sub);
  ctx.echo["subcommand"] = ctx.subcommand;
  ctx.workers = resolve_workers(common.workers);
  ctx.dump = common.dump;
  std::string root = common.out;
  if (root.empty()) {
    const char* env = std::getenv(kOutputRootVariable);
    root = env && *env ? std::string(env) + "/" + ctx.subcommand : "snlw-output/" + ctx.subcommand;
  }
  ctx.dir = root;
  try {
    fs::create_directories(ctx.dir);
    dir_ready = true;
  } catch (const std::exception& e) {
    return fail("io", e.what(), kFailure);
  }

  int code = kOk;
  std::string status = "ok";
  try {
    if (sub == s_sigma) code = cmd_sigma(sg, ctx);
    if (sub == s_sim) code = cmd_simulate(sm, ctx);
    if (sub == s_obj) code = cmd_objects(ob, ctx);
    if (sub == s_reg) code = cmd_regularity(rg, ctx);
    if (sub == s_conv) code = cmd_converge(cv, ctx);
    if (sub == s_cnt) code = cmd_counting(ct, ctx);
    if (sub == s_wick) code = cmd_wick(wk, ctx);
    if (sub == s_xsb) code = cmd_xsb(xs, ctx);
  } catch (const BlowUpError& e) {
    return fail("blowup", e.what(), kBlowUp);
  } catch (const BudgetExceeded& e) {
    return fail("budget_exceeded", e.what(), kBudgetExceeded);
  } catch (const std::invalid_argument& e) {
    return fail("invalid_config", e.what(), kInvalidConfig);
  } catch (const std::exception& e) {
    return fail("error", e.what(), kFailure);
  }
  if (code == kBlowUp) status = "blowup";

  const fs::path mpath = finish(status, code);
  out << "wrote " << ctx.outputs.size() << " file(s) and " << mpath.string() << "\n";
  if (code == kBlowUp) err << error_record("blowup", "blow-up guard tripped; partial outputs kept", code) << "\n";
  return code;
}

}  // namespace snlw::cli
