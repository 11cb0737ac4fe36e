#include <doctest.h>

#include <cmath>

#include "snlw/counting.hpp"

using namespace snlw;

namespace {

// Naive floating-point evaluation of the cubic sum at one m.
double naive_cubic(double s, double beta, std::array<int, 3> scales, std::array<int, 4> e, long m) {
  const auto s1 = dyadic_shell(scales[0]), s2 = dyadic_shell(scales[1]), s3 = dyadic_shell(scales[2]);
  double acc = 0.0;
  for (FreqIndex a : s1)
    for (FreqIndex b : s2)
      for (FreqIndex c : s3) {
        const FreqIndex n = a + b + c;
        const double kappa = e[0] * bracket(n) + e[1] * bracket(a) + e[2] * bracket(b) + e[3] * bracket(c);
        if (std::abs(kappa - static_cast<double>(m)) > 1.0 + 1e-9) continue;
        const double ba = bracket(a), bb = bracket(b), bc = bracket(c);
        acc += std::pow(bracket(n), 2.0 * (s - 1.0)) / (std::pow(bracket(a + b), 2.0 * beta) * ba * ba * bb * bb * bc * bc);
      }
  return acc;
}

}  // namespace

TEST_CASE("dyadic shells") {
  for (int n : {1, 2, 4}) {
    const auto shell = dyadic_shell(n);
    CHECK_FALSE(shell.empty());
    for (FreqIndex k : shell) {
      CHECK(bracket(k) >= n);
      CHECK(bracket(k) < 2 * n);
    }
  }
  CHECK(dyadic_shell(1).size() == 19);  // |n|^2 <= 2
}

TEST_CASE("sign tuples") {
  const auto t = sign_tuples(4);
  REQUIRE(t.size() == 16);
  CHECK(t.front() == std::vector<int>{1, 1, 1, 1});
  CHECK(t[1] == std::vector<int>{1, 1, 1, -1});
  CHECK(t.back() == std::vector<int>{-1, -1, -1, -1});
}

TEST_CASE("exact cubic sum matches a naive evaluation") {
  for (long m : {-3L, 0L, 2L, 5L}) {
    const double exact = cubic_sum_at(0.25, 0.25, {1, 1, 1}, {1, -1, 1, -1}, m);
    CHECK(exact == doctest::Approx(naive_cubic(0.25, 0.25, {1, 1, 1}, {1, -1, 1, -1}, m)).epsilon(1e-10));
  }
  CHECK(cubic_sum_at(0.25, 0.25, {1, 2, 1}, {1, 1, 1, 1}, 7) ==
        doctest::Approx(naive_cubic(0.25, 0.25, {1, 2, 1}, {1, 1, 1, 1}, 7)).epsilon(1e-10));
  // m beyond the range of kappa
  CHECK(cubic_sum_at(0.25, 0.25, {1, 1, 1}, {1, 1, 1, 1}, 1000) == 0.0);
  CHECK(cubic_sum_at(0.25, 0.25, {1, 1, 1}, {-1, -1, -1, -1}, 1000) == 0.0);
}

TEST_CASE("cubic sum reports") {
  const auto r = check_cubic_sum(0.25, 0.25, {1, 1, 1});
  REQUIRE(r.size() == 16);
  for (const CountingReport& x : r) {
    CHECK(x.lemma == "A1");
    CHECK(x.lhs > 0.0);
    CHECK(std::isfinite(x.ratio));
    CHECK(x.bound == 1.0);
    CHECK(x.lhs == doctest::Approx(cubic_sum_at(0.25, 0.25, {1, 1, 1},
                                                {x.signs[0], x.signs[1], x.signs[2], x.signs[3]}, x.argmax_m))
                       .epsilon(1e-14));
  }
  // kappa(-e) = -kappa(e) mirrors the supremum.
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(r[i].lhs == r[15 - i].lhs);
    CHECK(r[i].argmax_m == -r[15 - i].argmax_m);
  }
}

TEST_CASE("loop order and symmetry reduction do not change the sums") {
  CountingOptions plain;
  plain.sign_symmetry = false;
  CountingOptions rev;
  rev.reversed = true;
  const auto a = check_cubic_sum(0.3, 0.2, {1, 2, 1});
  const auto b = check_cubic_sum(0.3, 0.2, {1, 2, 1}, plain);
  const auto c = check_cubic_sum(0.3, 0.2, {1, 2, 1}, rev);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(a[i].lhs == b[i].lhs);
    CHECK(a[i].lhs == c[i].lhs);
  }
  const auto la = check_lattice_count({1, 1, 2});
  const auto lc = check_lattice_count({1, 1, 2}, rev);
  for (std::size_t i = 0; i < la.size(); ++i) CHECK(la[i].lhs == lc[i].lhs);
  const auto pa = check_A5({1, 1, 1}, 0.25);
  const auto pc = check_A5({1, 1, 1}, 0.25, rev);
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i].lhs == pc[i].lhs);
  const auto ra = check_resonant(1);
  const auto rc = check_resonant(1, rev);
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i].lhs == rc[i].lhs);
}

TEST_CASE("lattice counts") {
  const auto unit = check_lattice_count({1, 1, 1});
  for (const CountingReport& r : unit) {
    CHECK(r.bound == 1.0);
    CHECK(r.lhs >= 1.0);
    // n3 is fixed by (n, n1, n2)
    CHECK(r.lhs <= 19.0 * 19.0);
  }
  // med^3 min^2 = 1 for (1, 1, 4): the count cannot exceed |S1| |S2| whatever N3 is.
  const auto skew = check_lattice_count({1, 1, 4});
  for (std::size_t i = 0; i < skew.size(); ++i) {
    CHECK(skew[i].bound == 1.0);
    CHECK(skew[i].lhs <= 19.0 * 19.0);
  }
}

TEST_CASE("resonant and A5 sums are finite") {
  for (const CountingReport& r : check_resonant(1)) {
    CHECK(r.lemma == "A2");
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);
    CHECK(r.bound == doctest::Approx(std::log(3.0)));
  }
  for (const CountingReport& r : check_A5({1, 1, 1}, 0.25)) {
    CHECK(std::isfinite(r.ratio));
    CHECK(r.lhs >= 0.0);
  }
}

TEST_CASE("budget") {
  CountingOptions tiny;
  tiny.budget = 10;
  CHECK_THROWS_AS(check_cubic_sum(0.25, 0.25, {1, 1, 1}, tiny), BudgetExceeded);
  CHECK_THROWS_AS(check_lattice_count({2, 2, 2}, tiny), BudgetExceeded);
}
