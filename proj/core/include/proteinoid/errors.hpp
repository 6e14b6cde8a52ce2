#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace proteinoid {

/// Invalid or inconsistent configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (image, trace, replay mapping).
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The explicit integrator produced a non-finite value. Maps to CLI exit code 3.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(int x, int y, std::int64_t iteration);

  int x() const noexcept { return x_; }
  int y() const noexcept { return y_; }
  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  int x_;
  int y_;
  std::int64_t iteration_;
};

}  // namespace proteinoid
