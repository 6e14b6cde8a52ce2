#pragma once

#include <cstdint>
#include <vector>

namespace proteinoid {

struct GridPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Random disc ensemble with density decaying away from the grid centre.
///
/// Candidate centres are drawn uniformly over the grid and accepted with
/// probability exp(-d / density_scale), d being the Euclidean distance to
/// ((width-1)/2, (height-1)/2). Overlapping discs are allowed.
struct EnsembleConfig {
  int grid_width = 1000;
  int grid_height = 960;
  int disc_diameter = 7;
  std::int64_t candidate_count = 200000;
  double density_scale = 500.0;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError.
  void validate() const;
};

struct DiscSet {
  std::vector<GridPoint> centers;  // generation order
  int diameter = 7;
};

/// Boolean grid of nodes occupied by microsphere material.
class ConductiveMask {
 public:
  ConductiveMask() = default;
  ConductiveMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool at(int x, int y) const noexcept {
    return contains(x, y) && cells_[index(x, y)] != 0;
  }
  void set(int x, int y, bool value = true) {
    cells_[index(x, y)] = value ? 1 : 0;
  }

  std::size_t conductive_count() const noexcept;

  friend bool operator==(const ConductiveMask&, const ConductiveMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  const Rgb& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

/// Acceptance probability exp(-d / scale) used by generate_ensemble.
double acceptance_probability(double distance, double density_scale);

/// Deterministic in config.rng_seed. The PRNG is std::mt19937_64, whose
/// output sequence is fixed by the standard; uniform doubles are taken from
/// the top 53 bits so no library distribution is involved.
DiscSet generate_ensemble(const EnsembleConfig& config);

/// Node (x, y) is conductive iff it lies within diameter/2 (closed) of some centre.
ConductiveMask rasterize(const DiscSet& discs, int width, int height);

/// Node is conductive iff r, g and b are all strictly below 20.
ConductiveMask mask_from_image(const RgbImage& image);

}  // namespace proteinoid
