#include "proteinoid/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "proteinoid/errors.hpp"

namespace proteinoid {

namespace {

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (disc_diameter < 1 || disc_diameter % 2 == 0) {
    throw ConfigError("ensemble: disc_diameter must be odd and >= 1, got " +
                      std::to_string(disc_diameter));
  }
  if (grid_width < disc_diameter || grid_height < disc_diameter) {
    throw ConfigError("ensemble: grid must be at least disc_diameter in each dimension");
  }
  if (candidate_count < 0) {
    throw ConfigError("ensemble: candidate_count must be >= 0");
  }
  if (!(density_scale > 0.0) || !std::isfinite(density_scale)) {
    throw ConfigError("ensemble: density_scale must be positive and finite");
  }
}

ConductiveMask::ConductiveMask(int width, int height, bool fill)
    : width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
             fill ? 1 : 0) {
  if (width < 0 || height < 0) throw ConfigError("mask dimensions must be non-negative");
}

std::size_t ConductiveMask::conductive_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double acceptance_probability(double distance, double density_scale) {
  return std::exp(-distance / density_scale);
}

DiscSet generate_ensemble(const EnsembleConfig& config) {
  config.validate();

  DiscSet discs;
  discs.diameter = config.disc_diameter;

  const double cx = (config.grid_width - 1) / 2.0;
  const double cy = (config.grid_height - 1) / 2.0;
  const auto w = static_cast<std::uint64_t>(config.grid_width);
  const auto h = static_cast<std::uint64_t>(config.grid_height);

  std::mt19937_64 rng(config.rng_seed);
  for (std::int64_t i = 0; i < config.candidate_count; ++i) {
    const auto x = static_cast<int>(rng() % w);
    const auto y = static_cast<int>(rng() % h);
    const double d = std::hypot(x - cx, y - cy);
    if (unit_interval(rng) < acceptance_probability(d, config.density_scale)) {
      discs.centers.push_back({x, y});
    }
  }
  return discs;
}

ConductiveMask rasterize(const DiscSet& discs, int width, int height) {
  if (width <= 0 || height <= 0) throw ConfigError("rasterize: dimensions must be positive");

  ConductiveMask mask(width, height);
  const double radius = discs.diameter / 2.0;
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;

  for (const auto& c : discs.centers) {
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        if (dx * dx + dy * dy > r2) continue;
        const int x = c.x + dx;
        const int y = c.y + dy;
        if (mask.contains(x, y)) mask.set(x, y);
      }
    }
  }
  return mask;
}

ConductiveMask mask_from_image(const RgbImage& image) {
  if (image.width < 0 || image.height < 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw LoadError("image: pixel count does not match dimensions");
  }
  ConductiveMask mask(image.width, image.height);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Rgb& p = image.at(x, y);
      if (p.r < 20 && p.g < 20 && p.b < 20) mask.set(x, y);
    }
  }
  return mask;
}

}  // namespace proteinoid
