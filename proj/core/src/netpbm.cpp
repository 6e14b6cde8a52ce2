#include "proteinoid/netpbm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "proteinoid/errors.hpp"

namespace proteinoid::netpbm {

namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  long value = -1;
  if (!(in >> value) || value < 0 || value > (1L << 24)) {
    throw LoadError(std::string("netpbm: bad ") + what);
  }
  return static_cast<int>(value);
}

std::uint8_t rescale(int sample, int maxval) {
  if (sample > maxval) throw LoadError("netpbm: sample exceeds maxval");
  if (maxval == 255) return static_cast<std::uint8_t>(sample);
  return static_cast<std::uint8_t>((sample * 255 + maxval / 2) / maxval);
}

int read_ascii_sample(std::istream& in) {
  skip_space_and_comments(in);
  int v = -1;
  if (!(in >> v) || v < 0) throw LoadError("netpbm: truncated ASCII raster");
  return v;
}

int read_binary_sample(std::istream& in, int maxval) {
  const int hi = in.get();
  if (hi == EOF) throw LoadError("netpbm: truncated binary raster");
  if (maxval < 256) return hi;
  const int lo = in.get();
  if (lo == EOF) throw LoadError("netpbm: truncated binary raster");
  return (hi << 8) | lo;
}

}  // namespace

RgbImage read(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] < '1' || magic[1] > '6') {
    throw LoadError("netpbm: missing P1..P6 magic number");
  }
  const int kind = magic[1] - '0';
  const bool bitmap = kind == 1 || kind == 4;
  const bool color = kind == 3 || kind == 6;
  const bool binary = kind >= 4;

  RgbImage image;
  image.width = read_header_int(in, "width");
  image.height = read_header_int(in, "height");
  if (image.width == 0 || image.height == 0) throw LoadError("netpbm: empty image");
  const int maxval = bitmap ? 1 : read_header_int(in, "maxval");
  if (maxval < 1 || maxval > 65535) throw LoadError("netpbm: maxval out of range");
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (!std::isspace(in.get())) throw LoadError("netpbm: malformed header");
  }

  image.pixels.resize(static_cast<std::size_t>(image.width) * image.height);
  auto* px = image.pixels.data();

  if (bitmap) {
    for (int y = 0; y < image.height; ++y) {
      if (binary) {
        int byte = 0;
        for (int x = 0; x < image.width; ++x) {
          if (x % 8 == 0) {
            byte = in.get();
            if (byte == EOF) throw LoadError("netpbm: truncated bitmap raster");
          }
          const bool black = (byte >> (7 - x % 8)) & 1;
          const std::uint8_t level = black ? 0 : 255;
          *px++ = {level, level, level};
        }
      } else {
        for (int x = 0; x < image.width; ++x) {
          skip_space_and_comments(in);
          const int c = in.get();
          if (c != '0' && c != '1') throw LoadError("netpbm: bad bitmap sample");
          const std::uint8_t level = c == '1' ? 0 : 255;
          *px++ = {level, level, level};
        }
      }
    }
    return image;
  }

  const auto sample = [&] {
    return rescale(binary ? read_binary_sample(in, maxval) : read_ascii_sample(in), maxval);
  };
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    if (color) {
      const auto r = sample();
      const auto g = sample();
      const auto b = sample();
      *px++ = {r, g, b};
    } else {
      const auto level = sample();
      *px++ = {level, level, level};
    }
  }
  return image;
}

RgbImage read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("netpbm: cannot open " + path.string());
  return read(in);
}

ConductiveMask read_mask(const std::filesystem::path& path) {
  return mask_from_image(read(path));
}

void write_mask(std::ostream& out, const ConductiveMask& mask) {
  out << "P4\n" << mask.width() << ' ' << mask.height() << '\n';
  std::string row((mask.width() + 7) / 8, '\0');
  for (int y = 0; y < mask.height(); ++y) {
    std::fill(row.begin(), row.end(), '\0');
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) row[x / 8] = static_cast<char>(row[x / 8] | (0x80 >> (x % 8)));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_mask(const std::filesystem::path& path, const ConductiveMask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("netpbm: cannot write " + path.string());
  write_mask(out, mask);
}

void write_gray(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.levels.data()),
            static_cast<std::streamsize>(image.levels.size()));
}

void write_gray(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("netpbm: cannot write " + path.string());
  write_gray(out, image);
}

}  // namespace proteinoid::netpbm
