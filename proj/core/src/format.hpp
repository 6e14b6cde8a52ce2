#pragma once

#include <cstdint>
#include <string>

namespace proteinoid {

/// printf("%.9g"), with negative zero written as 0.
std::string format_g9(double value);
/// printf("%.17g"); round-trips every finite double.
std::string format_exact(double value);

/// FNV-1a, 64 bit. Stable across platforms, used for provenance hashes.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace proteinoid
