#include "snlw/spectral_grid.hpp"

#include "snlw/detail/fftw_lock.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace snlw {

namespace {

std::mutex& planner_mutex() { return detail::fftw_planner_mutex(); }

// Per-thread buffers and plans for one grid size. FFTW_ESTIMATE keeps the
// chosen algorithm, and therefore the rounding, identical across runs.
class Workspace {
 public:
  explicit Workspace(int points) : points_(points) {
    const std::size_t m = static_cast<std::size_t>(points);
    real_ = fftw_alloc_real(m * m * m);
    spec_ = fftw_alloc_complex(m * m * (m / 2 + 1));
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_3d(points, points, points, real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_3d(points, points, points, spec_, real_, FFTW_ESTIMATE);
  }
  ~Workspace() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(backward_);
    }
    fftw_free(real_);
    fftw_free(spec_);
  }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  int points() const { return points_; }
  int half() const { return points_ / 2 + 1; }
  double* real() { return real_; }
  fftw_complex* spec() { return spec_; }
  std::size_t spec_size() const {
    const std::size_t m = static_cast<std::size_t>(points_);
    return m * m * static_cast<std::size_t>(half());
  }
  std::size_t spec_index(FreqIndex n) const {
    const int m = points_;
    const auto wrap = [m](int v) { return static_cast<std::size_t>(((v % m) + m) % m); };
    return (wrap(n.x) * static_cast<std::size_t>(m) + wrap(n.y)) * static_cast<std::size_t>(half()) +
           static_cast<std::size_t>(n.z);
  }
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  int points_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

Workspace& workspace(int points) {
  thread_local std::map<int, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<Workspace>(points);
  return *slot;
}

void fill_spectrum(const SpectralField& field, Workspace& ws) {
  std::memset(ws.spec(), 0, ws.spec_size() * sizeof(fftw_complex));
  auto data = field.raw();
  for (const FreqIndex& n : ball_modes(field.cutoff())) {
    if (n.z < 0) continue;
    const Complex c = data[field.offset(n)];
    auto& slot = ws.spec()[ws.spec_index(n)];
    slot[0] = c.real();
    slot[1] = c.imag();
  }
}

void require_resolves(int points, int cutoff, const char* what) {
  if (points < 2 * cutoff + 1)
    throw std::invalid_argument(std::string(what) + ": grid of " + std::to_string(points) +
                                " points cannot resolve cutoff " + std::to_string(cutoff));
}

}  // namespace

std::mutex& detail::fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double PhysicalGrid::mean() const {
  if (values_.empty()) return 0.0;
  // Pairwise summation keeps the average reproducible and accurate.
  std::vector<double> buf(values_);
  std::size_t len = buf.size();
  while (len > 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
    if (len % 2 == 1) buf[half] = buf[len - 1];
    len = half + len % 2;
  }
  return buf[0] / static_cast<double>(values_.size());
}

double PhysicalGrid::max_abs() const {
  double worst = 0.0;
  for (double v : values_) worst = std::max(worst, std::abs(v));
  return worst;
}

int smooth_fft_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

int dealiasing_grid_size(std::span<const int> cutoffs, int n_out) {
  const int total = std::accumulate(cutoffs.begin(), cutoffs.end(), 0);
  int needed = total + n_out + 1;
  for (int c : cutoffs) needed = std::max(needed, 2 * c + 1);
  needed = std::max(needed, 2 * n_out + 1);
  return smooth_fft_size(needed);
}

int dealiasing_grid_size(std::initializer_list<int> cutoffs, int n_out) {
  return dealiasing_grid_size(std::span<const int>(cutoffs.begin(), cutoffs.size()), n_out);
}

void to_physical(const SpectralField& field, PhysicalGrid& out) {
  require_resolves(out.points(), field.cutoff(), "to_physical");
  Workspace& ws = workspace(out.points());
  fill_spectrum(field, ws);
  ws.backward();
  std::copy_n(ws.real(), out.values().size(), out.values().begin());
}

PhysicalGrid to_physical(const SpectralField& field, int points) {
  PhysicalGrid out(points);
  to_physical(field, out);
  return out;
}

SpectralField to_spectral(const PhysicalGrid& grid, int cutoff) {
  require_resolves(grid.points(), cutoff, "to_spectral");
  Workspace& ws = workspace(grid.points());
  std::copy(grid.values().begin(), grid.values().end(), ws.real());
  ws.forward();
  const double m = static_cast<double>(grid.points());
  const double scale = 1.0 / (m * m * m);
  SpectralField out(cutoff);
  auto data = out.raw();
  for (const FreqIndex& n : free_modes(cutoff)) {
    // For z = 0 both n and -n live in the half spectrum; read the owner.
    const FreqIndex src = n.z >= 0 ? n : -n;
    const auto& slot = ws.spec()[ws.spec_index(src)];
    Complex c(slot[0] * scale, slot[1] * scale);
    if (src != n) c = std::conj(c);
    if (n == FreqIndex{}) {
      data[out.offset(n)] = c.real();
    } else {
      data[out.offset(n)] = c;
      data[out.offset(-n)] = std::conj(c);
    }
  }
  return out;
}

SpectralField product_on_grid(std::span<const SpectralField* const> fields, int n_out, int points) {
  if (fields.empty()) throw std::invalid_argument("product of zero fields");
  int total = 0;
  for (const SpectralField* f : fields) {
    total += f->cutoff();
    require_resolves(points, f->cutoff(), "product_on_grid");
  }
  if (points < total + n_out + 1)
    throw std::invalid_argument("product_on_grid: " + std::to_string(points) +
                                " points violate the dealiasing condition (need >= " +
                                std::to_string(total + n_out + 1) + ")");
  require_resolves(points, n_out, "product_on_grid");
  PhysicalGrid acc = to_physical(*fields[0], points);
  PhysicalGrid tmp(points);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    to_physical(*fields[i], tmp);
    auto a = acc.values();
    auto b = tmp.values();
    for (std::size_t j = 0; j < a.size(); ++j) a[j] *= b[j];
  }
  return to_spectral(acc, n_out);
}

SpectralField dealiased_product(std::span<const SpectralField* const> fields, int n_out) {
  std::vector<int> cutoffs;
  for (const SpectralField* f : fields) cutoffs.push_back(f->cutoff());
  return product_on_grid(fields, n_out, dealiasing_grid_size(cutoffs, n_out));
}

SpectralField dealiased_product(std::initializer_list<std::reference_wrapper<const SpectralField>> fields,
                                int n_out) {
  std::vector<const SpectralField*> ptrs;
  for (const auto& f : fields) ptrs.push_back(&f.get());
  return dealiased_product(std::span<const SpectralField* const>(ptrs), n_out);
}

}  // namespace snlw
