#include "acceptance/oracles.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace oracle {

namespace {

double bracket(int norm2) { return std::sqrt(1.0 + norm2); }

// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration on P_k.
void gauss_legendre(int k, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(k), 0.0);
  w.assign(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

// E[<1>^(k, s) conj <1>^(k, r)] for |k|^2 = norm2.
double gamma(int norm2, double s, double r, double alpha) {
  const double w = bracket(norm2);
  const double m = std::min(s, r);
  const double integral =
      0.5 * (m * std::cos((s - r) * w) - (std::sin((s + r) * w) - std::sin((s + r - 2.0 * m) * w)) / (2.0 * w));
  return std::pow(w, -2.0 - 2.0 * alpha) * integral;
}

}  // namespace

double mode_variance(int norm2, double t, double alpha) { return gamma(norm2, t, t, alpha); }

double sigma(int cutoff, double t, double alpha) {
  double acc = 0.0;
  for (int x = -cutoff; x <= cutoff; ++x)
    for (int y = -cutoff; y <= cutoff; ++y)
      for (int z = -cutoff; z <= cutoff; ++z)
        if (x * x + y * y + z * z <= cutoff * cutoff) acc += mode_variance(x * x + y * y + z * z, t, alpha);
  return acc;
}

double covariance(int cutoff, double t, double alpha, const std::array<double, 3>& r) {
  double acc = 0.0;
  for (int x = -cutoff; x <= cutoff; ++x)
    for (int y = -cutoff; y <= cutoff; ++y)
      for (int z = -cutoff; z <= cutoff; ++z) {
        const int n2 = x * x + y * y + z * z;
        if (n2 <= cutoff * cutoff) acc += mode_variance(n2, t, alpha) * std::cos(x * r[0] + y * r[1] + z * r[2]);
      }
  return acc;
}

double tail_sum(int n1, int n2, double s, double t, double alpha) {
  double acc = 0.0;
  for (int x = -n2; x <= n2; ++x)
    for (int y = -n2; y <= n2; ++y)
      for (int z = -n2; z <= n2; ++z) {
        const int k = x * x + y * y + z * z;
        if (k > n1 * n1 && k <= n2 * n2) acc += std::pow(bracket(k), 2.0 * s) * mode_variance(k, t, alpha);
      }
  return acc;
}

double tree30_second_moment(const std::array<int, 3>& n, int cutoff, double t, double alpha, int nodes) {
  // Multiplicity of each sorted norm triple among n = n1 + n2 + n3.
  std::map<std::tuple<int, int, int>, long> triples;
  const int c2 = cutoff * cutoff;
  for (int ax = -cutoff; ax <= cutoff; ++ax)
    for (int ay = -cutoff; ay <= cutoff; ++ay)
      for (int az = -cutoff; az <= cutoff; ++az) {
        const int a2 = ax * ax + ay * ay + az * az;
        if (a2 > c2) continue;
        for (int bx = -cutoff; bx <= cutoff; ++bx)
          for (int by = -cutoff; by <= cutoff; ++by)
            for (int bz = -cutoff; bz <= cutoff; ++bz) {
              const int b2 = bx * bx + by * by + bz * bz;
              if (b2 > c2) continue;
              const int cx = n[0] - ax - bx, cy = n[1] - ay - by, cz = n[2] - az - bz;
              const int d2 = cx * cx + cy * cy + cz * cz;
              if (d2 > c2) continue;
              int k[3] = {a2, b2, d2};
              if (k[0] > k[1]) std::swap(k[0], k[1]);
              if (k[1] > k[2]) std::swap(k[1], k[2]);
              if (k[0] > k[1]) std::swap(k[0], k[1]);
              ++triples[{k[0], k[1], k[2]}];
            }
      }

  // s > r triangle via r = s u; the integrand is symmetric, so double it.
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  const double wn = bracket(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = t * x[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double r = s * x[j];
      const double weight = t * w[i] * s * w[j];
      const double kernel = std::sin((t - s) * wn) * std::sin((t - r) * wn) / (wn * wn);
      double cov = 0.0;
      std::map<int, double> g;
      for (const auto& [key, mult] : triples) {
        auto get = [&](int k) {
          auto it = g.find(k);
          if (it == g.end()) it = g.emplace(k, gamma(k, s, r, alpha)).first;
          return it->second;
        };
        cov += static_cast<double>(mult) * get(std::get<0>(key)) * get(std::get<1>(key)) * get(std::get<2>(key));
      }
      total += 2.0 * weight * kernel * 6.0 * cov;
    }
  }
  return total;
}

}  // namespace oracle
