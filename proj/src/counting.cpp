#include "snlw/counting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snlw {

namespace {

// Sums are accumulated exactly as integers in units of 2^-60, so the result
// is independent of the enumeration order.
using Fixed = __int128;
constexpr double kUnit = 0x1p60;
constexpr double kTie = 1e-9;

Fixed to_fixed(double w) { return static_cast<Fixed>(std::llround(w * kUnit)); }
double from_fixed(Fixed f) { return static_cast<double>(f) / kUnit; }

long lowest_bin(double kappa) { return static_cast<long>(std::ceil(kappa - 1.0 - kTie)); }
long highest_bin(double kappa) { return static_cast<long>(std::floor(kappa + 1.0 + kTie)); }

struct Rep {
  FreqIndex n;
  int mult;
};

// Representatives x >= y >= z >= 0 of a point set closed under the 48
// signed permutations, with orbit sizes.
std::vector<Rep> orbit_reps(const std::vector<FreqIndex>& points) {
  std::vector<Rep> out;
  for (const FreqIndex& n : points) {
    if (!(n.x >= n.y && n.y >= n.z && n.z >= 0)) continue;
    const int perms = (n.x == n.y && n.y == n.z) ? 1 : (n.x == n.y || n.y == n.z) ? 3 : 6;
    const int nonzero = (n.x != 0) + (n.y != 0) + (n.z != 0);
    out.push_back({n, perms << nonzero});
  }
  return out;
}

std::vector<FreqIndex> ball_points(int radius) {
  std::vector<FreqIndex> out;
  for (int x = -radius; x <= radius; ++x)
    for (int y = -radius; y <= radius; ++y)
      for (int z = -radius; z <= radius; ++z)
        if (x * x + y * y + z * z <= radius * radius) out.push_back({x, y, z});
  return out;
}

int max_norm2(const std::vector<FreqIndex>& pts) {
  int m = 0;
  for (const FreqIndex& n : pts) m = std::max(m, n.norm2());
  return m;
}

int radius_of(const std::vector<FreqIndex>& pts) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_norm2(pts)))));
}

template <class T>
void maybe_reverse(std::vector<T>& v, bool reversed) {
  if (reversed) std::reverse(v.begin(), v.end());
}

// Table f(|n|^2) for |n|^2 <= n2max.
template <class Fn>
std::vector<double> radial_table(int n2max, Fn fn) {
  std::vector<double> t(static_cast<std::size_t>(n2max) + 1);
  for (int r2 = 0; r2 <= n2max; ++r2) t[static_cast<std::size_t>(r2)] = fn(bracket_of_norm2(r2));
  return t;
}

void check_budget(std::uint64_t work, const CountingOptions& o, const std::string& what) {
  if (work > o.budget)
    throw BudgetExceeded(what + ": " + std::to_string(work) + " tuples exceed the enumeration budget of " +
                         std::to_string(o.budget));
}

void check_scale(int n) {
  if (n < 1 || (n & (n - 1)) != 0) throw std::invalid_argument("counting: scales must be dyadic (1, 2, 4, ...)");
}

int sign_index(std::initializer_list<int> signs) {
  int idx = 0;
  for (int e : signs) idx = (idx << 1) | (e < 0 ? 1 : 0);
  return idx;
}

// Histogram over integer m of an exact fixed-point sum.
struct Histogram {
  long offset = 0;
  std::vector<Fixed> bins;

  explicit Histogram(double kappa_max) {
    offset = static_cast<long>(std::ceil(kappa_max)) + 2;
    bins.assign(static_cast<std::size_t>(2 * offset + 1), 0);
  }
  void add(double kappa, Fixed w) {
    for (long m = lowest_bin(kappa); m <= highest_bin(kappa); ++m) bins[static_cast<std::size_t>(m + offset)] += w;
  }
  Fixed at(long m) const {
    const long i = m + offset;
    if (i < 0 || i >= static_cast<long>(bins.size())) return 0;
    return bins[static_cast<std::size_t>(i)];
  }
  // Largest bin; the smallest m wins ties.
  std::pair<Fixed, long> sup() const {
    Fixed best = 0;
    long arg = 0;
    for (std::size_t i = 0; i < bins.size(); ++i)
      if (bins[i] > best) {
        best = bins[i];
        arg = static_cast<long>(i) - offset;
      }
    return {best, arg};
  }
  void clear() { std::fill(bins.begin(), bins.end(), 0); }
};

CountingReport make_report(const char* lemma, std::vector<int> scales, std::vector<int> signs, double lhs,
                           double bound, long m, std::uint64_t work) {
  CountingReport r;
  r.lemma = lemma;
  r.scales = std::move(scales);
  r.signs = std::move(signs);
  r.lhs = lhs;
  r.bound = bound;
  r.ratio = lhs / bound;
  r.argmax_m = m;
  r.enumerated = work;
  return r;
}

struct Shells {
  std::vector<FreqIndex> s1, s2, s3;
  std::vector<double> bracket;  // by |n|^2
  int n2max = 0;
};

Shells make_shells(std::array<int, 3> scales, const CountingOptions& o, int extra_norm2 = 0) {
  for (int n : scales) check_scale(n);
  Shells sh{dyadic_shell(scales[0]), dyadic_shell(scales[1]), dyadic_shell(scales[2]), {}, 0};
  maybe_reverse(sh.s1, o.reversed);
  maybe_reverse(sh.s2, o.reversed);
  maybe_reverse(sh.s3, o.reversed);
  const int r = radius_of(sh.s1) + radius_of(sh.s2) + radius_of(sh.s3);
  sh.n2max = std::max(r * r, extra_norm2);
  sh.bracket = radial_table(sh.n2max, [](double b) { return b; });
  return sh;
}

double max_bracket(const std::vector<FreqIndex>& pts) { return bracket_of_norm2(max_norm2(pts)); }

// Sign-tuple histograms of the cubic sum; index by sign_index.
struct CubicHistograms {
  std::vector<Histogram> hist;
  std::uint64_t work = 0;
};

CubicHistograms cubic_histograms(double s, double beta, std::array<int, 3> scales, const CountingOptions& o) {
  Shells sh = make_shells(scales, o);
  std::vector<Rep> reps = orbit_reps(dyadic_shell(scales[0]));
  maybe_reverse(reps, o.reversed);
  const std::uint64_t work = static_cast<std::uint64_t>(reps.size()) * sh.s2.size() * sh.s3.size();
  check_budget(work, o, "cubic sum");

  const auto w123 = radial_table(sh.n2max, [s](double b) { return std::pow(b, 2.0 * (s - 1.0)); });
  const auto w12 = radial_table(sh.n2max, [beta](double b) { return std::pow(b, -2.0 * beta); });
  const auto inv2 = radial_table(sh.n2max, [](double b) { return 1.0 / (b * b); });
  const double kmax = 2.0 * (max_bracket(sh.s1) + max_bracket(sh.s2) + max_bracket(sh.s3));
  CubicHistograms out{std::vector<Histogram>(16, Histogram(kmax)), work};
  const int e0_count = o.sign_symmetry ? 1 : 2;

  for (const Rep& rep : reps) {
    const FreqIndex n1 = rep.n;
    const double b1 = sh.bracket[static_cast<std::size_t>(n1.norm2())];
    const double f1 = inv2[static_cast<std::size_t>(n1.norm2())];
    for (const FreqIndex& n2 : sh.s2) {
      const FreqIndex n12 = n1 + n2;
      const double b2 = sh.bracket[static_cast<std::size_t>(n2.norm2())];
      const double f12 = f1 * inv2[static_cast<std::size_t>(n2.norm2())] * w12[static_cast<std::size_t>(n12.norm2())];
      for (const FreqIndex& n3 : sh.s3) {
        const auto r123 = static_cast<std::size_t>((n12 + n3).norm2());
        const auto r3 = static_cast<std::size_t>(n3.norm2());
        const double b3 = sh.bracket[r3];
        const double b123 = sh.bracket[r123];
        const Fixed w = to_fixed(f12 * inv2[r3] * w123[r123]) * rep.mult;
        for (int a = 0; a < e0_count; ++a) {
          const int e0 = a == 0 ? 1 : -1;
          for (int e1 : {1, -1})
            for (int e2 : {1, -1})
              for (int e3 : {1, -1})
                out.hist[static_cast<std::size_t>(sign_index({e0, e1, e2, e3}))].add(
                    e0 * b123 + e1 * b1 + e2 * b2 + e3 * b3, w);
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<FreqIndex> dyadic_shell(int scale) {
  if (scale < 1) throw std::invalid_argument("dyadic_shell: scale must be >= 1");
  std::vector<FreqIndex> out;
  const int r = 2 * scale;
  for (const FreqIndex& n : ball_points(r)) {
    const int b2 = 1 + n.norm2();  // <n>^2
    if (b2 >= scale * scale && b2 < 4 * scale * scale) out.push_back(n);
  }
  return out;
}

std::vector<std::vector<int>> sign_tuples(int length) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < (1 << length); ++i) {
    std::vector<int> t;
    for (int j = length - 1; j >= 0; --j) t.push_back((i >> j) & 1 ? -1 : 1);
    out.push_back(t);
  }
  return out;
}

std::vector<CountingReport> check_cubic_sum(double s, double beta, std::array<int, 3> scales,
                                            const CountingOptions& o) {
  if (!(s > 0.0 && s <= 0.5)) throw std::invalid_argument("check_cubic_sum: need 0 < s <= 1/2");
  if (!(beta >= 0.0 && beta <= 0.5)) throw std::invalid_argument("check_cubic_sum: need 0 <= beta <= 1/2");
  const CubicHistograms h = cubic_histograms(s, beta, scales, o);
  const int nmax = *std::max_element(scales.begin(), scales.end());
  const double bound = std::pow(static_cast<double>(nmax), 2.0 * (s - beta));
  std::vector<CountingReport> out;
  const auto tuples = sign_tuples(4);
  for (std::size_t i = 0; i < 16; ++i) {
    const bool mirrored = o.sign_symmetry && i >= 8;
    const auto [best, m] = h.hist[mirrored ? 15 - i : i].sup();
    out.push_back(make_report("A1", {scales[0], scales[1], scales[2]}, tuples[i], from_fixed(best), bound,
                              mirrored ? -m : m, h.work));
  }
  return out;
}

double cubic_sum_at(double s, double beta, std::array<int, 3> scales, std::array<int, 4> signs, long m) {
  CountingOptions o;
  o.sign_symmetry = false;
  const CubicHistograms h = cubic_histograms(s, beta, scales, o);
  const int idx = sign_index({signs[0], signs[1], signs[2], signs[3]});
  return from_fixed(h.hist[static_cast<std::size_t>(idx)].at(m));
}

std::vector<CountingReport> check_lattice_count(std::array<int, 3> scales, const CountingOptions& o) {
  Shells sh = make_shells(scales, o);
  const int r1 = radius_of(sh.s1), r2 = radius_of(sh.s2), r3 = radius_of(sh.s3);
  std::vector<Rep> reps = orbit_reps(ball_points(r1 + r2 + r3));
  maybe_reverse(reps, o.reversed);
  // Pairs (n, n1) that survive the reach test, times the n2 loop.
  std::uint64_t work = 0;
  for (const Rep& rep : reps)
    for (const FreqIndex& n1 : sh.s1)
      if ((rep.n - n1).norm2() <= (r2 + r3) * (r2 + r3)) work += sh.s2.size();
  check_budget(work, o, "lattice count");

  // Membership mask for the third shell on the cube [-r3, r3]^3.
  const int side = 2 * r3 + 1;
  std::vector<char> in3(static_cast<std::size_t>(side) * side * side, 0);
  auto cube = [&](FreqIndex n) {
    return (static_cast<std::size_t>(n.x + r3) * side + static_cast<std::size_t>(n.y + r3)) * side +
           static_cast<std::size_t>(n.z + r3);
  };
  for (const FreqIndex& n : sh.s3) in3[cube(n)] = 1;

  const double kmax = 2.0 * (max_bracket(sh.s1) + max_bracket(sh.s2) + max_bracket(sh.s3));
  std::vector<Histogram> hist(16, Histogram(kmax));
  std::vector<Fixed> best(16, 0);
  std::vector<long> arg(16, 0);
  const int e0_count = o.sign_symmetry ? 1 : 2;
  const Fixed one = 1;
  for (const Rep& rep : reps) {
    const FreqIndex n = rep.n;
    const double b123 = sh.bracket[static_cast<std::size_t>(n.norm2())];
    for (auto& h : hist) h.clear();
    for (const FreqIndex& n1 : sh.s1) {
      const FreqIndex rest = n - n1;
      if (rest.norm2() > (r2 + r3) * (r2 + r3)) continue;
      const double b1 = sh.bracket[static_cast<std::size_t>(n1.norm2())];
      for (const FreqIndex& n2 : sh.s2) {
        const FreqIndex n3 = rest - n2;
        if (std::abs(n3.x) > r3 || std::abs(n3.y) > r3 || std::abs(n3.z) > r3 || !in3[cube(n3)]) continue;
        const double b2 = sh.bracket[static_cast<std::size_t>(n2.norm2())];
        const double b3 = sh.bracket[static_cast<std::size_t>(n3.norm2())];
        for (int a = 0; a < e0_count; ++a) {
          const int e0 = a == 0 ? 1 : -1;
          for (int e1 : {1, -1})
            for (int e2 : {1, -1})
              for (int e3 : {1, -1})
                hist[static_cast<std::size_t>(sign_index({e0, e1, e2, e3}))].add(e0 * b123 + e1 * b1 + e2 * b2 + e3 * b3,
                                                                               one);
        }
      }
    }
    for (std::size_t i = 0; i < 16; ++i) {
      const auto [c, m] = hist[i].sup();
      if (c > best[i]) {
        best[i] = c;
        arg[i] = m;
      }
    }
  }
  std::array<int, 3> sorted = scales;
  std::sort(sorted.begin(), sorted.end());
  const double bound = std::pow(static_cast<double>(sorted[1]), 3) * std::pow(static_cast<double>(sorted[0]), 2);
  std::vector<CountingReport> out;
  const auto tuples = sign_tuples(4);
  for (std::size_t i = 0; i < 16; ++i) {
    const bool mirrored = o.sign_symmetry && i >= 8;
    const std::size_t j = mirrored ? 15 - i : i;
    out.push_back(make_report("A1a", {scales[0], scales[1], scales[2]}, tuples[i], static_cast<double>(best[j]), bound,
                              mirrored ? -arg[j] : arg[j], work));
  }
  return out;
}

std::vector<CountingReport> check_resonant(int scale1, const CountingOptions& o) {
  check_scale(scale1);
  std::vector<FreqIndex> s1 = dyadic_shell(scale1);
  maybe_reverse(s1, o.reversed);
  const int rp = o.pair_radius;
  if (rp < 0) throw std::invalid_argument("check_resonant: pair radius must be >= 0");
  std::vector<FreqIndex> ball = ball_points(rp);
  maybe_reverse(ball, o.reversed);
  std::vector<Rep> reps = orbit_reps(ball_points(rp));
  maybe_reverse(reps, o.reversed);
  const std::uint64_t work = static_cast<std::uint64_t>(reps.size()) * ball.size() * s1.size();
  check_budget(work, o, "resonant sum");
  const int r = radius_of(s1) + 2 * rp;
  const auto br = radial_table(r * r, [](double b) { return b; });
  const double log_n = std::log(2.0 + scale1);
  const int e0_count = o.sign_symmetry ? 1 : 2;

  std::vector<double> best(16, 0.0);
  std::vector<Fixed> sums(16);
  for (const Rep& rep : reps) {
    const FreqIndex n2 = rep.n;
    const double b2 = br[static_cast<std::size_t>(n2.norm2())];
    for (const FreqIndex& n3 : ball) {
      const double b3 = br[static_cast<std::size_t>(n3.norm2())];
      const FreqIndex n23 = n2 + n3;
      std::fill(sums.begin(), sums.end(), 0);
      for (const FreqIndex& n1 : s1) {
        const double b1 = br[static_cast<std::size_t>(n1.norm2())];
        const double b123 = br[static_cast<std::size_t>((n1 + n23).norm2())];
        const double base = 1.0 / (b123 * b1 * b1);
        for (int a = 0; a < e0_count; ++a) {
          const int e0 = a == 0 ? 1 : -1;
          for (int e1 : {1, -1})
            for (int e2 : {1, -1})
              for (int e3 : {1, -1}) {
                const double kappa = e0 * b123 + e1 * b1 + e2 * b2 + e3 * b3;
                double msum = 0.0;
                for (long m = lowest_bin(kappa); m <= highest_bin(kappa); ++m)
                  msum += 1.0 / std::sqrt(1.0 + static_cast<double>(m) * static_cast<double>(m));
                sums[static_cast<std::size_t>(sign_index({e0, e1, e2, e3}))] += to_fixed(base * msum);
              }
        }
      }
      const double b23 = br[static_cast<std::size_t>(n23.norm2())];
      for (std::size_t i = 0; i < 16; ++i) best[i] = std::max(best[i], from_fixed(sums[i]) * b23);
    }
  }
  std::vector<CountingReport> out;
  const auto tuples = sign_tuples(4);
  for (std::size_t i = 0; i < 16; ++i) {
    const bool mirrored = o.sign_symmetry && i >= 8;
    out.push_back(make_report("A2", {scale1}, tuples[i], best[mirrored ? 15 - i : i], log_n, 0, work));
  }
  return out;
}

std::vector<CountingReport> check_A5(std::array<int, 3> scales, double beta, const CountingOptions& o) {
  if (!(beta > 0.0)) throw std::invalid_argument("check_A5: beta must be > 0");
  Shells sh = make_shells(scales, o);
  std::vector<Rep> reps = orbit_reps(dyadic_shell(scales[0]));
  maybe_reverse(reps, o.reversed);
  const std::uint64_t work = static_cast<std::uint64_t>(reps.size()) * sh.s2.size() * sh.s3.size();
  check_budget(work, o, "A5 sum");
  const auto w12 = radial_table(sh.n2max, [beta](double b) { return std::pow(b, -beta); });
  const auto inv1 = radial_table(sh.n2max, [](double b) { return 1.0 / b; });
  const auto inv2 = radial_table(sh.n2max, [](double b) { return 1.0 / (b * b); });
  const double kmax = 2.0 * (max_bracket(sh.s1) + max_bracket(sh.s2) + max_bracket(sh.s3));
  std::vector<Histogram> hist(16, Histogram(kmax));
  std::vector<Fixed> best(16, 0);
  std::vector<long> arg(16, 0);
  const int e0_count = o.sign_symmetry ? 1 : 2;

  for (const Rep& rep : reps) {
    const FreqIndex n1 = rep.n;
    const double b1 = sh.bracket[static_cast<std::size_t>(n1.norm2())];
    for (auto& h : hist) h.clear();
    for (const FreqIndex& n2 : sh.s2) {
      const FreqIndex n12 = n1 + n2;
      const double b2 = sh.bracket[static_cast<std::size_t>(n2.norm2())];
      const double f12 = w12[static_cast<std::size_t>(n12.norm2())] * inv2[static_cast<std::size_t>(n2.norm2())];
      for (const FreqIndex& n3 : sh.s3) {
        const auto r123 = static_cast<std::size_t>((n12 + n3).norm2());
        const auto r3 = static_cast<std::size_t>(n3.norm2());
        const double b3 = sh.bracket[r3];
        const double b123 = sh.bracket[r123];
        const Fixed w = to_fixed(f12 * inv2[r3] * inv1[r123]);
        for (int a = 0; a < e0_count; ++a) {
          const int e0 = a == 0 ? 1 : -1;
          for (int e1 : {1, -1})
            for (int e2 : {1, -1})
              for (int e3 : {1, -1})
                hist[static_cast<std::size_t>(sign_index({e0, e1, e2, e3}))].add(e0 * b123 - e1 * b1 - e2 * b2 - e3 * b3,
                                                                               w);
        }
      }
    }
    for (std::size_t i = 0; i < 16; ++i) {
      const auto [c, m] = hist[i].sup();
      if (c > best[i]) {
        best[i] = c;
        arg[i] = m;
      }
    }
  }
  const double bound = std::pow(static_cast<double>(std::max(scales[0], scales[1])), -beta + o.epsilon);
  std::vector<CountingReport> out;
  const auto tuples = sign_tuples(4);
  for (std::size_t i = 0; i < 16; ++i) {
    const bool mirrored = o.sign_symmetry && i >= 8;
    const std::size_t j = mirrored ? 15 - i : i;
    out.push_back(make_report("A5", {scales[0], scales[1], scales[2]}, tuples[i], from_fixed(best[j]), bound,
                              mirrored ? -arg[j] : arg[j], work));
  }
  return out;
}

std::vector<CountingReport> check_A3_unit(double s, double beta, double eta, const CountingOptions& o) {
  if (!(eta > 0.0) || s > 0.5 - eta) throw std::invalid_argument("check_A3_unit: need s <= 1/2 - eta, eta > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("check_A3_unit: beta must be > 0");
  std::vector<FreqIndex> unit = dyadic_shell(1);
  maybe_reverse(unit, o.reversed);
  std::vector<Rep> reps = orbit_reps(dyadic_shell(1));
  maybe_reverse(reps, o.reversed);
  const std::size_t u = unit.size();
  const std::uint64_t work = static_cast<std::uint64_t>(reps.size()) * u * u * u * u;
  check_budget(work, o, "quintic sum");
  const int n2max = 5 * 5 * 3;
  const auto br = radial_table(n2max, [](double b) { return b; });
  const double bmax = br[3];
  const double k2max = 4.0 * 4.0 * bmax;
  const double k34max = 6.0 * 5.0 * bmax;
  Histogram axis2(k2max), axis34(k34max);
  const std::size_t w2 = axis2.bins.size(), w34 = axis34.bins.size();
  // 2D histogram per sign tuple (e0, e123, e1..e5), flattened.
  const int tuples_computed = o.sign_symmetry ? 64 : 128;
  std::vector<Fixed> hist(static_cast<std::size_t>(128) * w2 * w34, 0);
  auto bins = [](double k, long off, std::vector<long>& out) {
    out.clear();
    for (long m = lowest_bin(k); m <= highest_bin(k); ++m) out.push_back(m + off);
  };
  std::vector<long> m2, m3, m4;
  for (const Rep& rep : reps) {
    const FreqIndex n1 = rep.n;
    for (const FreqIndex& n2 : unit)
      for (const FreqIndex& n3 : unit) {
        const FreqIndex n123 = n1 + n2 + n3;
        for (const FreqIndex& n4 : unit)
          for (const FreqIndex& n5 : unit) {
            const FreqIndex n1234 = n123 + n4, n12345 = n1234 + n5;
            const double b[6] = {br[static_cast<std::size_t>(n12345.norm2())], br[static_cast<std::size_t>(n1.norm2())],
                                 br[static_cast<std::size_t>(n2.norm2())],     br[static_cast<std::size_t>(n3.norm2())],
                                 br[static_cast<std::size_t>(n4.norm2())],     br[static_cast<std::size_t>(n5.norm2())]};
            const double b123 = br[static_cast<std::size_t>(n123.norm2())];
            const double b12 = br[static_cast<std::size_t>((n1 + n2).norm2())];
            const double b1234 = br[static_cast<std::size_t>(n1234.norm2())];
            double prod = 1.0;
            for (int j = 1; j <= 5; ++j) prod *= b[j] * b[j];
            const double w = std::pow(b[0], 2.0 * (s - 1.0)) /
                             (std::pow(b1234, 2.0 * beta) * std::pow(b12, 2.0 * beta) * b123 * b123 * prod);
            const Fixed fw = to_fixed(w) * rep.mult;
            for (int t = 0; t < tuples_computed; ++t) {
              int e[7];
              for (int j = 0; j < 7; ++j) e[j] = (t >> (6 - j)) & 1 ? -1 : 1;
              // e[0] = e0, e[1] = e123, e[2..6] = e1..e5
              const double k2 = e[1] * b123 - e[2] * b[1] - e[3] * b[2] - e[4] * b[3];
              const double k3 = e[0] * b[0] + e[1] * b123 + e[5] * b[4] + e[6] * b[5];
              double k4 = e[0] * b[0];
              for (int j = 1; j <= 5; ++j) k4 += e[j + 1] * b[j];
              bins(k2, axis2.offset, m2);
              bins(k3, axis34.offset, m3);
              bins(k4, axis34.offset, m4);
              Fixed* h = &hist[static_cast<std::size_t>(t) * w2 * w34];
              for (long a : m2) {
                for (long c : m3) h[static_cast<std::size_t>(a) * w34 + static_cast<std::size_t>(c)] += fw;
                for (long c : m4) h[static_cast<std::size_t>(a) * w34 + static_cast<std::size_t>(c)] += fw;
              }
            }
          }
      }
  }
  std::vector<CountingReport> out;
  const auto tuples = sign_tuples(7);
  for (std::size_t i = 0; i < 128; ++i) {
    const bool mirrored = o.sign_symmetry && i >= 64;
    const std::size_t j = mirrored ? 127 - i : i;
    const Fixed* h = &hist[j * w2 * w34];
    const Fixed best = *std::max_element(h, h + w2 * w34);
    out.push_back(make_report("A3", {1, 1, 1, 1, 1}, tuples[i], from_fixed(best), 1.0, 0, work));
  }
  return out;
}

}  // namespace snlw
