#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace snlw {

/// Mean and spread of a scalar sample (Welford update, Chan merge).
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }
  void merge(const RunningStats& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count_ + o.count_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.count_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(count_) * static_cast<double>(o.count_) / n;
    count_ += o.count_;
  }

  long count() const { return count_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance.
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double stderr_mean() const { return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0; }

 private:
  long count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Worker count: 0 selects the hardware concurrency.
inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(acc, replica) for replica = 0..replicas-1 and returns the merged
/// accumulator. Replicas are grouped into fixed chunks, each chunk is reduced
/// in replica order into a fresh accumulator, and chunks are merged in chunk
/// order, so the result does not depend on the number of workers.
template <class Acc>
Acc run_ensemble(int replicas, int workers, int chunk, const std::function<Acc()>& make,
                 const std::function<void(Acc&, int)>& body) {
  chunk = std::max(chunk, 1);
  const int chunks = (replicas + chunk - 1) / chunk;
  std::vector<Acc> parts;
  parts.reserve(static_cast<std::size_t>(chunks));
  for (int c = 0; c < chunks; ++c) parts.push_back(make());
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int c = next++; c < chunks; c = next++) {
      try {
        const int end = std::min(replicas, (c + 1) * chunk);
        for (int r = c * chunk; r < end; ++r) body(parts[static_cast<std::size_t>(c)], r);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    }
  };
  const int n = std::min(resolve_workers(workers), std::max(chunks, 1));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Acc total = make();
  for (const Acc& p : parts) total.merge(p);
  return total;
}

}  // namespace snlw
