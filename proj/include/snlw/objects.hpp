#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "snlw/duhamel.hpp"
#include "snlw/lattice.hpp"
#include "snlw/noise.hpp"
#include "snlw/renorm.hpp"

namespace snlw {

/// Members of the enhanced data set at truncation level N.
enum class ObjectKind {
  conv1,         // <1>   stochastic convolution
  wick2,         // <2>   u^2 - sigma
  wick3,         // <3>   u^3 - 3 sigma u
  tree30,        // <30>  I(<3>)
  tree30_conv1,  // <30><1>
  tree320,       // <320> I(<30><2>)
  tree70,        // <70>  I(<30>^2 <1>)
};

inline constexpr std::array<ObjectKind, 7> kAllObjects{ObjectKind::conv1,        ObjectKind::wick2,
                                                       ObjectKind::wick3,        ObjectKind::tree30,
                                                       ObjectKind::tree30_conv1, ObjectKind::tree320,
                                                       ObjectKind::tree70};

std::string_view object_name(ObjectKind kind);
/// Throws std::invalid_argument for an unknown name.
ObjectKind parse_object(std::string_view name);

/// Bit set over ObjectKind.
class ObjectMask {
 public:
  constexpr ObjectMask() = default;
  constexpr ObjectMask(std::initializer_list<ObjectKind> kinds) {
    for (ObjectKind k : kinds) bits_ |= bit(k);
  }
  static constexpr ObjectMask all() {
    ObjectMask m;
    for (ObjectKind k : kAllObjects) m.bits_ |= bit(k);
    return m;
  }
  constexpr bool has(ObjectKind k) const { return (bits_ & bit(k)) != 0; }
  constexpr void add(ObjectKind k) { bits_ |= bit(k); }
  /// Adds every member the requested ones are computed from.
  ObjectMask closure() const;

 private:
  static constexpr unsigned bit(ObjectKind k) { return 1u << static_cast<unsigned>(k); }
  unsigned bits_ = 0;
};

/// Values of the computed members at one grid time. Members that were not
/// requested stay empty (cutoff 0).
struct ObjectSnapshot {
  int step = 0;
  double time = 0.0;
  double sigma = 0.0;
  SpectralField conv1;
  SpectralField conv1_velocity;
  SpectralField wick2;
  SpectralField wick3;
  SpectralField tree30;
  SpectralField tree30_conv1;
  SpectralField tree320;
  SpectralField tree70;

  const SpectralField& member(ObjectKind kind) const;
};

/// Exact mild recursion for <1>_N and d_t<1>_N driven by the path's exact-step
/// increments. Distributionally exact at grid times.
Trajectory stochastic_convolution(const NoisePath& path);

/// Steps the whole enhanced data set forward in time one grid step at a time,
/// keeping only the current snapshot. Solver-facing members are truncated at
/// the Galerkin cutoff M; <1> stays at the noise cutoff N. Products are
/// formed on zero-padded grids, so the only truncation is the final
/// projection onto |n| <= M.
class ObjectBuilder {
 public:
  ObjectBuilder(const NoisePath& path, int galerkin_cutoff, ObjectMask members = ObjectMask::all());

  const ObjectSnapshot& current() const { return now_; }
  bool done() const { return now_.step >= path_->config().steps; }
  void advance();

  int noise_cutoff() const { return path_->config().cutoff; }
  int galerkin_cutoff() const { return galerkin_; }
  const SigmaTable& sigma_table() const { return sigma_; }
  ObjectMask computed() const { return computed_; }

 private:
  void compute_derived();

  const NoisePath* path_;
  int galerkin_;
  ObjectMask computed_;
  SigmaTable sigma_;
  ObjectSnapshot now_;
  // Forcing values at the current time, needed by the Duhamel steppers.
  SpectralField force30_, force320_, force70_;
  std::optional<DuhamelStepper> duhamel30_, duhamel320_, duhamel70_;
};

/// Trajectories of the requested members, all built from one NoisePath.
struct ObjectSet {
  double alpha = 0.0;
  int cutoff = 0;
  int galerkin_cutoff = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  SigmaTable sigma;
  ObjectMask members;
  std::array<Trajectory, kAllObjects.size()> trajectories;

  bool has(ObjectKind kind) const { return members.has(kind); }
  /// Throws std::out_of_range if the member was not built.
  const Trajectory& operator[](ObjectKind kind) const;
  /// Reassembles the snapshot at grid step k from stored trajectories.
  ObjectSnapshot snapshot(std::size_t step) const;
};

/// galerkin_cutoff < 0 selects the default M = 2N.
ObjectSet build_objects(const NoisePath& path, int galerkin_cutoff = -1, ObjectMask members = ObjectMask::all());

}  // namespace snlw
