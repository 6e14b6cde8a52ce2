#include "proteinoid/boolean.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

#include "proteinoid/errors.hpp"

namespace proteinoid {

BooleanFunction::BooleanFunction(int arity, std::vector<std::uint8_t> table)
    : arity_(arity), table_(std::move(table)) {
  if (arity < 0 || arity > kMaxArity) {
    throw ConfigError("boolean function: arity must be in 0.." + std::to_string(kMaxArity));
  }
  if (table_.size() != (std::size_t{1} << arity)) {
    throw ConfigError("boolean function: table must have 2^k entries");
  }
  for (const auto b : table_) {
    if (b > 1) throw ConfigError("boolean function: table entries must be 0 or 1");
  }
}

BooleanFunction BooleanFunction::from(int arity, const std::function<bool(std::uint32_t)>& f) {
  if (arity < 0 || arity > kMaxArity) {
    throw ConfigError("boolean function: arity must be in 0.." + std::to_string(kMaxArity));
  }
  std::vector<std::uint8_t> table(std::size_t{1} << arity);
  for (std::uint32_t x = 0; x < table.size(); ++x) table[x] = f(x) ? 1 : 0;
  return BooleanFunction(arity, std::move(table));
}

std::vector<std::int64_t> walsh_spectrum(const BooleanFunction& f) {
  std::vector<std::int64_t> w(f.size());
  for (std::size_t x = 0; x < w.size(); ++x) w[x] = f(static_cast<std::uint32_t>(x)) ? -1 : 1;
  for (std::size_t half = 1; half < w.size(); half <<= 1) {
    for (std::size_t block = 0; block < w.size(); block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const std::int64_t a = w[i];
        const std::int64_t b = w[i + half];
        w[i] = a + b;
        w[i + half] = a - b;
      }
    }
  }
  return w;
}

std::vector<std::uint8_t> mobius_transform(std::span<const std::uint8_t> table) {
  std::vector<std::uint8_t> a(table.begin(), table.end());
  for (std::size_t bit = 1; bit < a.size(); bit <<= 1) {
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (x & bit) a[x] ^= a[x ^ bit];
    }
  }
  return a;
}

int algebraic_degree(const BooleanFunction& f) {
  const auto anf = mobius_transform(f.table());
  int degree = 0;
  for (std::uint32_t x = 0; x < anf.size(); ++x) {
    if (anf[x]) degree = std::max(degree, std::popcount(x));
  }
  return degree;
}

std::uint64_t nonlinearity(const BooleanFunction& f) {
  std::int64_t peak = 0;
  for (const auto w : walsh_spectrum(f)) peak = std::max(peak, std::abs(w));
  return static_cast<std::uint64_t>((static_cast<std::int64_t>(f.size()) - peak) / 2);
}

int sensitivity(const BooleanFunction& f) {
  int best = 0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    int s = 0;
    for (int i = 0; i < f.arity(); ++i) s += f(x) != f(x ^ (1u << i));
    best = std::max(best, s);
  }
  return best;
}

int block_sensitivity(const BooleanFunction& f) {
  const std::uint32_t full = static_cast<std::uint32_t>(f.size()) - 1;
  std::vector<std::uint8_t> sensitive(f.size());
  std::vector<int> packing(f.size());
  int best = 0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    for (std::uint32_t block = 0; block <= full; ++block) sensitive[block] = f(x) != f(x ^ block);
    // packing[S]: most disjoint sensitive blocks inside variable set S.
    packing[0] = 0;
    for (std::uint32_t set = 1; set <= full; ++set) {
      const std::uint32_t low = set & (~set + 1);
      int value = packing[set ^ low];
      const std::uint32_t rest = set ^ low;
      for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
        const std::uint32_t block = sub | low;
        if (sensitive[block]) value = std::max(value, 1 + packing[set ^ block]);
        if (sub == 0) break;
      }
      packing[set] = value;
    }
    best = std::max(best, packing[full]);
  }
  return best;
}

int certificate_complexity(const BooleanFunction& f) {
  const std::uint32_t full = static_cast<std::uint32_t>(f.size()) - 1;
  std::vector<std::uint32_t> by_size(f.size());
  for (std::uint32_t s = 0; s <= full; ++s) by_size[s] = s;
  std::stable_sort(by_size.begin(), by_size.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });

  int best = 0;
  std::vector<std::uint32_t> witnesses;
  for (std::uint32_t x = 0; x <= full; ++x) {
    witnesses.clear();
    for (std::uint32_t y = 0; y <= full; ++y) {
      if (f(y) != f(x)) witnesses.push_back(x ^ y);
    }
    // S certifies x iff every differing input disagrees with x somewhere in S.
    for (const std::uint32_t s : by_size) {
      const bool certifies = std::all_of(witnesses.begin(), witnesses.end(),
                                         [s](std::uint32_t d) { return (d & s) != 0; });
      if (certifies) {
        best = std::max(best, std::popcount(s));
        break;
      }
    }
  }
  return best;
}

namespace {

struct DepthSearch {
  const BooleanFunction& f;
  std::uint32_t full;
  std::vector<int> memo;  // index fixed << k | values, -1 = unknown

  bool constant_on(std::uint32_t fixed, std::uint32_t values) const {
    const std::uint32_t free = full & ~fixed;
    const bool first = f(values);
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
      if (f(values | sub) != first) return false;
      if (sub == 0) break;
    }
    return true;
  }

  int depth(std::uint32_t fixed, std::uint32_t values) {
    int& slot = memo[(static_cast<std::size_t>(fixed) << f.arity()) | values];
    if (slot >= 0) return slot;
    if (constant_on(fixed, values)) return slot = 0;
    int best = f.arity();
    for (int i = 0; i < f.arity(); ++i) {
      const std::uint32_t bit = 1u << i;
      if (fixed & bit) continue;
      const int d = 1 + std::max(depth(fixed | bit, values), depth(fixed | bit, values | bit));
      best = std::min(best, d);
    }
    return slot = best;
  }
};

}  // namespace

int decision_tree_depth(const BooleanFunction& f) {
  if (f.arity() > 10) throw ConfigError("decision tree depth: arity too large");
  DepthSearch search{f, static_cast<std::uint32_t>(f.size()) - 1,
                     std::vector<int>(f.size() * f.size(), -1)};
  return search.depth(0, 0);
}

BoolMetrics bool_metrics(const BooleanFunction& f, const BoolMetricLimits& limits) {
  BoolMetrics m;
  m.arity = f.arity();
  m.weight = static_cast<std::uint64_t>(std::count(f.table().begin(), f.table().end(), 1));
  const int k = f.arity();
  if (k <= limits.spectral) {
    m.algebraic_degree = algebraic_degree(f);
    m.nonlinearity = nonlinearity(f);
    std::vector<double> influence(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      std::size_t flips = 0;
      for (std::uint32_t x = 0; x < f.size(); ++x) flips += f(x) != f(x ^ (1u << i));
      influence[static_cast<std::size_t>(i)] =
          static_cast<double>(flips) / static_cast<double>(f.size());
    }
    double total = 0.0;
    for (const double v : influence) total += v;
    m.influence = std::move(influence);
    m.total_influence = total;
    m.sensitivity = sensitivity(f);
  }
  if (k <= limits.exhaustive) {
    m.block_sensitivity = block_sensitivity(f);
    m.certificate_complexity = certificate_complexity(f);
  }
  if (k <= limits.query) m.decision_tree_depth = decision_tree_depth(f);
  return m;
}

}  // namespace proteinoid
