#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "proteinoid/ensemble.hpp"
#include "proteinoid/netpbm.hpp"

namespace proteinoid {

/// FitzHugh-Nagumo constants:
///   du/dt = c1 u (u - a)(1 - u) - c2 u v + I + Du lap(u)
///   dv/dt = b (u - v)
struct FhnParams {
  double a = 0.13;
  double b = 0.013;
  double c1 = 0.26;
  double c2 = 0.095;
  double du = 1.0;
  double dt = 0.015;
  double dx = 2.0;

  /// dt * Du * 4 / dx^2; explicit Euler needs this below 1.
  double stability_number() const noexcept { return dt * du * 4.0 / (dx * dx); }

  /// Throws ConfigError when a constant is not positive or the stability
  /// number is >= 1.
  void validate() const;
};

/// Compact indexing of the conductive nodes of a mask, row-major.
///
/// Each node stores the compact index of its four neighbours; a neighbour
/// that is off-grid or non-conductive is replaced by the node itself
/// (mirroring), which makes the five-point stencil see a zero-flux boundary.
/// The stencil is evaluated as (sum of conductive neighbours - degree * u),
/// the same quantity with the mirrored terms cancelled.
class Lattice {
 public:
  struct Neighbors {
    std::int32_t west;
    std::int32_t east;
    std::int32_t north;
    std::int32_t south;
  };

  explicit Lattice(ConductiveMask mask);

  std::size_t size() const noexcept { return points_.size(); }
  const ConductiveMask& mask() const noexcept { return mask_; }
  int width() const noexcept { return mask_.width(); }
  int height() const noexcept { return mask_.height(); }

  /// -1 when (x, y) is off-grid or non-conductive.
  std::int32_t index_of(int x, int y) const noexcept {
    if (!mask_.contains(x, y)) return -1;
    return index_[static_cast<std::size_t>(y) * mask_.width() + x];
  }
  GridPoint point(std::size_t i) const noexcept { return points_[i]; }
  std::span<const Neighbors> neighbors() const noexcept { return neighbors_; }
  /// Number of conductive 4-neighbours of node i.
  int degree(std::size_t i) const noexcept { return degree_[i]; }

 private:
  ConductiveMask mask_;
  std::vector<std::int32_t> index_;
  std::vector<GridPoint> points_;
  std::vector<Neighbors> neighbors_;
  std::vector<std::uint8_t> degree_;
};

/// u and v over the conductive nodes of a Lattice (compact order).
struct FieldState {
  std::vector<double> u;
  std::vector<double> v;
  std::int64_t t = 0;

  static FieldState zeros(std::size_t nodes) {
    return FieldState{std::vector<double>(nodes, 0.0), std::vector<double>(nodes, 0.0), 0};
  }

  friend bool operator==(const FieldState&, const FieldState&) = default;
};

/// Constant current applied to `nodes` for start <= t < end.
struct StimulusEntry {
  std::vector<GridPoint> nodes;
  double current = 0.0;
  std::int64_t start = 0;
  std::int64_t end = 0;
};

struct StimulusSchedule {
  std::vector<StimulusEntry> entries;

  bool empty() const noexcept { return entries.empty(); }
};

/// (sum of the conductive 4-neighbours - degree * field(p)) / dx^2 at every node.
std::vector<double> masked_laplacian(const Lattice& lattice, std::span<const double> field,
                                     double dx);

/// One explicit Euler step from `state` (iteration state.t to state.t + 1).
/// Throws IntegrationError naming the first node that became non-finite.
///
/// Reference implementation over the compact node list; Simulation produces
/// bit-identical results. Both flush subnormal values to zero while stepping.
FieldState step(const Lattice& lattice, const FieldState& state, const FhnParams& params,
                const StimulusSchedule& schedule);

class Simulation;

/// Called after every step whose resulting iteration is a multiple of cadence.
struct Observer {
  std::int64_t cadence = 1;
  std::function<void(const Simulation&)> on_sample;
};

/// Double-buffered integrator over a fixed mask, stored as a zero-padded
/// full grid so that rows vectorise.
///
/// With workers > 1 the rows are split into contiguous chunks stepped by a
/// persistent thread team; every node's update reads only iteration t, so
/// results are bit-identical for any worker count.
class Simulation {
 public:
  Simulation(ConductiveMask mask, const FhnParams& params, StimulusSchedule schedule = {},
             unsigned workers = 1);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  const Lattice& lattice() const noexcept;
  const FhnParams& params() const noexcept;
  /// Compact copy of the current fields; O(nodes).
  FieldState state() const;
  std::int64_t iteration() const noexcept;
  void set_state(const FieldState& state);

  /// Sum of (u - v) over the given compact node indices, in order.
  double sum_u_minus_v(std::span<const std::int32_t> nodes) const noexcept;
  /// u at compact node i.
  double u(std::size_t i) const noexcept;

  void step();
  /// Applies step() `duration` times, dispatching observers in iteration order
  /// on the calling thread.
  void run(std::int64_t duration, std::span<const Observer> observers = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Foreground level for sites with u above the display threshold.
inline constexpr std::uint8_t kExcitedLevel = 0;
inline constexpr std::uint8_t kRestingLevel = 160;
inline constexpr std::uint8_t kEmptyLevel = 255;

/// Grayscale frame: kExcitedLevel where u > threshold, kRestingLevel on other
/// conductive nodes, kEmptyLevel elsewhere.
netpbm::GrayImage render_frame(const Lattice& lattice, const FieldState& state,
                               double threshold = 0.04);
netpbm::GrayImage render_frame(const Simulation& simulation, double threshold = 0.04);

}  // namespace proteinoid
