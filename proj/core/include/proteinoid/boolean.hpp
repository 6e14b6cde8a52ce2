#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace proteinoid {

/// Truth table of f: {0,1}^k -> {0,1}; entry x holds f(x), variable i being
/// bit i of x.
class BooleanFunction {
 public:
  static constexpr int kMaxArity = 24;

  /// Throws ConfigError unless the table has exactly 2^k entries in {0,1}.
  BooleanFunction(int arity, std::vector<std::uint8_t> table);

  static BooleanFunction from(int arity, const std::function<bool(std::uint32_t)>& f);

  int arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return table_.size(); }
  bool operator()(std::uint32_t x) const noexcept { return table_[x] != 0; }
  std::span<const std::uint8_t> table() const noexcept { return table_; }

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

 private:
  int arity_;
  std::vector<std::uint8_t> table_;
};

/// W(a) = sum_x (-1)^(f(x) xor a.x), by the fast Walsh-Hadamard transform.
std::vector<std::int64_t> walsh_spectrum(const BooleanFunction& f);

/// Algebraic normal form coefficients over GF(2). The transform is its own
/// inverse.
std::vector<std::uint8_t> mobius_transform(std::span<const std::uint8_t> table);

/// Largest monomial in the ANF; 0 for constant functions.
int algebraic_degree(const BooleanFunction& f);

/// 2^(k-1) - max|W| / 2.
std::uint64_t nonlinearity(const BooleanFunction& f);

int sensitivity(const BooleanFunction& f);
int block_sensitivity(const BooleanFunction& f);
int certificate_complexity(const BooleanFunction& f);
int decision_tree_depth(const BooleanFunction& f);

/// Largest arity for which each family of metrics is evaluated.
struct BoolMetricLimits {
  int spectral = 16;    // degree, nonlinearity, influence, sensitivity
  int exhaustive = 8;   // block sensitivity, certificate complexity
  int query = 4;        // decision-tree depth
};

struct BoolMetrics {
  int arity = 0;
  std::uint64_t weight = 0;
  std::optional<int> algebraic_degree;
  std::optional<std::uint64_t> nonlinearity;
  std::optional<std::vector<double>> influence;  // per variable
  std::optional<double> total_influence;
  std::optional<int> sensitivity;
  std::optional<int> block_sensitivity;
  std::optional<int> certificate_complexity;
  std::optional<int> decision_tree_depth;
};

/// Metrics beyond their arity limit are left empty.
BoolMetrics bool_metrics(const BooleanFunction& f, const BoolMetricLimits& limits = {});

}  // namespace proteinoid
