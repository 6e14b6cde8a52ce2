#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "proteinoid/ensemble.hpp"

namespace proteinoid::netpbm {

/// Reads P1..P6. Bitmaps map 1 (black) to (0,0,0) and 0 to (255,255,255);
/// graymaps replicate the level into all three channels. Samples with a
/// maxval other than 255 are rescaled to 0..255 with rounding.
/// Throws LoadError on malformed input.
RgbImage read(std::istream& in);
RgbImage read(const std::filesystem::path& path);

/// Binary bitmap (P4); conductive nodes are written as 1 (black).
void write_mask(std::ostream& out, const ConductiveMask& mask);
void write_mask(const std::filesystem::path& path, const ConductiveMask& mask);

/// Convenience: read any Netpbm file and apply mask_from_image.
ConductiveMask read_mask(const std::filesystem::path& path);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> levels;  // row-major, maxval 255
};

/// Binary graymap (P5).
void write_gray(std::ostream& out, const GrayImage& image);
void write_gray(const std::filesystem::path& path, const GrayImage& image);

}  // namespace proteinoid::netpbm
