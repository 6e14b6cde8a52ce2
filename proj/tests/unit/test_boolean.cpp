#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "proteinoid/boolean.hpp"
#include "proteinoid/errors.hpp"

using namespace proteinoid;

namespace {

std::vector<std::uint8_t> table_of(std::uint32_t code, int k) {
  std::vector<std::uint8_t> t(std::size_t{1} << k);
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = (code >> x) & 1;
  return t;
}

std::vector<std::uint8_t> random_table(std::mt19937_64& rng, int k) {
  std::vector<std::uint8_t> t(std::size_t{1} << k);
  for (auto& b : t) b = rng() & 1;
  return t;
}

}  // namespace

TEST(BoolMetrics, EveryThreeInputFunctionMatchesOracles) {
  for (std::uint32_t code = 0; code < 256; ++code) {
    const auto t = table_of(code, 3);
    const BooleanFunction f(3, t);
    const auto m = bool_metrics(f);
    ASSERT_EQ(m.weight, static_cast<std::uint64_t>(__builtin_popcount(code)));
    ASSERT_EQ(*m.nonlinearity, static_cast<std::uint64_t>(oracle::affine_distance(t, 3)));
    ASSERT_EQ(*m.algebraic_degree, oracle::naive_degree(t, 3));
    ASSERT_EQ(*m.sensitivity, oracle::brute_sensitivity(t, 3));
    ASSERT_EQ(*m.block_sensitivity, oracle::brute_block_sensitivity(t, 3));
    ASSERT_EQ(*m.certificate_complexity, oracle::brute_certificate(t, 3));
    ASSERT_EQ(*m.decision_tree_depth, oracle::brute_depth(t));
    ASSERT_LE(*m.sensitivity, *m.block_sensitivity);
    ASSERT_LE(*m.block_sensitivity, *m.certificate_complexity);
    ASSERT_LE(*m.certificate_complexity, *m.decision_tree_depth);
  }
}

TEST(BoolMetrics, RandomFourToSixInputFunctionsMatchOracles) {
  std::mt19937_64 rng(41);
  for (int k = 4; k <= 6; ++k) {
    for (int round = 0; round < 40; ++round) {
      const auto t = random_table(rng, k);
      const BooleanFunction f(k, t);
      ASSERT_EQ(nonlinearity(f), static_cast<std::uint64_t>(oracle::affine_distance(t, k)));
      ASSERT_EQ(algebraic_degree(f), oracle::naive_degree(t, k));
      ASSERT_EQ(block_sensitivity(f), oracle::brute_block_sensitivity(t, k));
      ASSERT_EQ(certificate_complexity(f), oracle::brute_certificate(t, k));
      if (k == 4) {
        ASSERT_EQ(decision_tree_depth(f), oracle::brute_depth(t));
      }
    }
  }
}

TEST(BoolMetrics, NonlinearityRespectsBentBoundForEvenArity) {
  std::mt19937_64 rng(8);
  for (int k = 2; k <= 8; k += 2) {
    const auto bound = (1u << (k - 1)) - (1u << (k / 2 - 1));
    for (int round = 0; round < 30; ++round) {
      ASSERT_LE(nonlinearity(BooleanFunction(k, random_table(rng, k))), bound);
    }
  }
  // x0 x1 + x2 x3 is bent.
  const auto bent = BooleanFunction::from(4, [](std::uint32_t x) {
    return ((x & 1) && (x & 2)) != ((x & 4) && (x & 8));
  });
  EXPECT_EQ(nonlinearity(bent), 6u);
}

TEST(WalshSpectrum, ParsevalHolds) {
  std::mt19937_64 rng(13);
  for (int k = 0; k <= 8; ++k) {
    const BooleanFunction f(k, random_table(rng, k));
    const auto w = walsh_spectrum(f);
    std::int64_t energy = 0;
    for (const auto v : w) energy += v * v;
    ASSERT_EQ(energy, std::int64_t{1} << (2 * k));
    // Direct evaluation at every frequency.
    for (std::uint32_t a = 0; a < f.size(); ++a) {
      std::int64_t sum = 0;
      for (std::uint32_t x = 0; x < f.size(); ++x) {
        sum += ((f(x) ? 1 : 0) ^ (__builtin_popcount(a & x) & 1)) ? -1 : 1;
      }
      ASSERT_EQ(w[a], sum);
    }
  }
}

TEST(MobiusTransform, IsAnInvolution) {
  std::mt19937_64 rng(21);
  for (int k = 0; k <= 10; ++k) {
    const auto t = random_table(rng, k);
    ASSERT_EQ(mobius_transform(mobius_transform(t)), t);
  }
}

TEST(BoolMetrics, KnownFunctions) {
  const auto x_xor_y = BooleanFunction::from(2, [](std::uint32_t x) { return x == 1 || x == 2; });
  const auto m = bool_metrics(x_xor_y);
  EXPECT_EQ(m.weight, 2u);
  EXPECT_EQ(*m.algebraic_degree, 1);
  EXPECT_EQ(*m.nonlinearity, 0u);
  EXPECT_EQ(*m.sensitivity, 2);
  EXPECT_EQ(*m.decision_tree_depth, 2);
  EXPECT_EQ((*m.influence)[0], 1.0);
  EXPECT_EQ(*m.total_influence, 2.0);

  const auto and2 = bool_metrics(BooleanFunction::from(2, [](std::uint32_t x) { return x == 3; }));
  EXPECT_EQ(and2.weight, 1u);
  EXPECT_EQ(*and2.algebraic_degree, 2);
  EXPECT_EQ(*and2.nonlinearity, 1u);
  EXPECT_EQ((*and2.influence)[1], 0.5);

  const auto zero = bool_metrics(BooleanFunction(5, std::vector<std::uint8_t>(32, 0)));
  EXPECT_EQ(zero.weight, 0u);
  EXPECT_EQ(*zero.algebraic_degree, 0);
  EXPECT_EQ(*zero.sensitivity, 0);
  EXPECT_EQ(*zero.certificate_complexity, 0);
  EXPECT_FALSE(zero.decision_tree_depth.has_value());
}

TEST(BoolMetrics, InfluenceMatchesCounting) {
  std::mt19937_64 rng(55);
  const auto t = random_table(rng, 7);
  const BooleanFunction f(7, t);
  const auto m = bool_metrics(f);
  double total = 0.0;
  for (int i = 0; i < 7; ++i) {
    int flips = 0;
    for (std::uint32_t x = 0; x < 128; ++x) flips += t[x] != t[x ^ (1u << i)];
    EXPECT_DOUBLE_EQ((*m.influence)[i], flips / 128.0);
    total += flips / 128.0;
  }
  EXPECT_DOUBLE_EQ(*m.total_influence, total);
}

TEST(BoolMetrics, LimitsLeaveMetricsEmpty) {
  std::mt19937_64 rng(1);
  const BooleanFunction f(10, random_table(rng, 10));
  const auto m = bool_metrics(f);
  EXPECT_TRUE(m.nonlinearity.has_value());
  EXPECT_FALSE(m.block_sensitivity.has_value());
  EXPECT_FALSE(m.certificate_complexity.has_value());
  EXPECT_FALSE(m.decision_tree_depth.has_value());
  const auto big = bool_metrics(BooleanFunction(17, std::vector<std::uint8_t>(1u << 17, 1)));
  EXPECT_EQ(big.weight, 1u << 17);
  EXPECT_FALSE(big.algebraic_degree.has_value());
}

TEST(BooleanFunction, RejectsBadTables) {
  EXPECT_THROW(BooleanFunction(2, {0, 1, 0}), ConfigError);
  EXPECT_THROW(BooleanFunction(1, {0, 2}), ConfigError);
  EXPECT_THROW(BooleanFunction(-1, {}), ConfigError);
}
