#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "proteinoid/errors.hpp"
#include "proteinoid/spikes.hpp"

using namespace proteinoid;

namespace {

PotentialTrace flat_trace(std::size_t n, double level = 0.0) {
  PotentialTrace t{"E1", {}, std::vector<double>(n, level)};
  for (std::size_t i = 0; i < n; ++i) t.iterations.push_back(static_cast<std::int64_t>(i));
  return t;
}

void add_pulse(PotentialTrace& t, std::int64_t from, std::int64_t to, double height) {
  for (std::int64_t i = from; i <= to; ++i) t.values[static_cast<std::size_t>(i)] += height;
}

SpikeTrain train_from_isis(const std::vector<std::int64_t>& isis, std::int64_t start = 0) {
  SpikeTrain train{"E1", {start}};
  for (const auto d : isis) train.times.push_back(train.times.back() + d);
  return train;
}

}  // namespace

TEST(DetectSpikes, ZeroTraceIsSilent) {
  EXPECT_TRUE(detect_spikes(flat_trace(20000), DetectorConfig{}).times.empty());
}

TEST(DetectSpikes, RectangularPulseGivesOneSpikeAtItsStart) {
  auto trace = flat_trace(20000);
  add_pulse(trace, 5000, 5100, 1.0);
  const auto train = detect_spikes(trace, DetectorConfig{});
  EXPECT_EQ(train.times, (std::vector<std::int64_t>{5000}));
  EXPECT_EQ(train.label, "E1");
}

TEST(DetectSpikes, PulsesInsideRefractoryMergeIntoOneSpike) {
  auto trace = flat_trace(20000);
  add_pulse(trace, 5000, 5010, 1.0);
  add_pulse(trace, 5050, 5060, 1.0);
  EXPECT_EQ(detect_spikes(trace, DetectorConfig{}).times, (std::vector<std::int64_t>{5000}));
  add_pulse(trace, 5200, 5210, 1.0);
  EXPECT_EQ(detect_spikes(trace, DetectorConfig{}).times,
            (std::vector<std::int64_t>{5000, 5200}));
}

TEST(DetectSpikes, ThresholdIsMeanPlusKSigma) {
  auto trace = flat_trace(2000);
  for (std::size_t i = 0; i < 1000; ++i) trace.values[i] = (i % 2 == 0) ? 1.0 : 3.0;
  DetectorConfig config;
  config.min_excursion = 0.0;
  EXPECT_DOUBLE_EQ(spike_threshold(trace, config), 2.0 + 4.0 * 1.0);
  config.min_excursion = 10.0;
  EXPECT_DOUBLE_EQ(spike_threshold(trace, config), 12.0);
  config.mode = ThresholdMode::kAbsolute;
  config.absolute_threshold = -3.5;
  EXPECT_EQ(spike_threshold(trace, config), -3.5);
}

TEST(DetectSpikes, FlatBaselineWithoutFloorUsesStrictExcess) {
  auto trace = flat_trace(3000, 2.0);
  DetectorConfig config;
  config.min_excursion = 0.0;
  EXPECT_EQ(spike_threshold(trace, config), 2.0);
  EXPECT_TRUE(detect_spikes(trace, config).times.empty());
  trace.values[2500] = 2.0 + 1e-12;
  EXPECT_EQ(detect_spikes(trace, config).times, (std::vector<std::int64_t>{2500}));
}

TEST(DetectSpikes, BaselineLongerThanTraceIsAConfigError) {
  EXPECT_THROW(detect_spikes(flat_trace(999), DetectorConfig{}), ConfigError);
  EXPECT_THROW(detect_spikes(flat_trace(0), DetectorConfig{}), ConfigError);
  DetectorConfig bad;
  bad.refractory = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = {};
  bad.baseline_window = 1;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(DetectSpikes, OutputIsIncreasingAndRespectsRefractory) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int round = 0; round < 20; ++round) {
    auto trace = flat_trace(6000);
    for (auto& v : trace.values) v = noise(rng);
    DetectorConfig config;
    config.k = 1.0;
    config.refractory = 1 + round * 7;
    const auto train = detect_spikes(trace, config);
    ASSERT_FALSE(train.times.empty());
    for (std::size_t i = 1; i < train.size(); ++i) {
      ASSERT_GE(train.times[i] - train.times[i - 1], config.refractory);
    }
  }
}

TEST(IsiStats, AlternatingIntervals) {
  std::vector<std::int64_t> isis;
  for (int i = 0; i < 10; ++i) isis.push_back(i % 2 == 0 ? 1 : 2);
  const auto stats = isi_stats(train_from_isis(isis), 2);
  ASSERT_TRUE(stats.cv.has_value());
  EXPECT_NEAR(*stats.cv, 1.0 / 3.0, 1e-12);
  ASSERT_EQ(stats.serial_correlation.size(), 2u);
  EXPECT_NEAR(*stats.serial_correlation[0], -1.0, 1e-12);
  EXPECT_NEAR(*stats.serial_correlation[1], 1.0, 1e-12);
}

TEST(IsiStats, PeriodicTrainHasZeroCvAndCorrelation) {
  const auto stats = isi_stats(train_from_isis(std::vector<std::int64_t>(12, 300)), 3);
  EXPECT_EQ(*stats.cv, 0.0);
  for (const auto& c : stats.serial_correlation) EXPECT_EQ(*c, 0.0);
}

TEST(IsiStats, TooFewSpikesIsReportedNotThrown) {
  const auto none = isi_stats(SpikeTrain{"E1", {}}, 1);
  EXPECT_FALSE(none.cv.has_value());
  EXPECT_FALSE(none.serial_correlation[0].has_value());
  const auto two = isi_stats(SpikeTrain{"E1", {0, 10}}, 1);
  EXPECT_FALSE(two.cv.has_value());
  const auto three = isi_stats(SpikeTrain{"E1", {0, 10, 30}}, 1);
  EXPECT_TRUE(three.cv.has_value());
  EXPECT_FALSE(three.serial_correlation[0].has_value());
  EXPECT_TRUE(isi_stats(SpikeTrain{"E1", {0, 10, 30, 35}}, 1).serial_correlation[0].has_value());
}

TEST(IsiStats, IndependentIntervalsAreUncorrelated) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::int64_t> draw(100, 2000);
  std::vector<std::int64_t> isis(10000);
  for (auto& d : isis) d = draw(rng);
  const auto stats = isi_stats(train_from_isis(isis), 1);
  EXPECT_NEAR(*stats.serial_correlation[0], 0.0, 0.05);
}

TEST(IsiStats, CvIsScaleInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> draw(1, 500);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::int64_t> isis(30);
    for (auto& d : isis) d = draw(rng);
    const auto base = train_from_isis(isis, 17);
    SpikeTrain scaled = base;
    for (auto& t : scaled.times) t *= 7;
    EXPECT_NEAR(*isi_stats(base).cv, *isi_stats(scaled).cv, 1e-12);
  }
}

TEST(GroupBursts, Examples) {
  EXPECT_TRUE(group_bursts(SpikeTrain{}, 200).bursts.empty());
  EXPECT_EQ(group_bursts(SpikeTrain{}, 200).isolated, 0u);

  const auto s = group_bursts(SpikeTrain{"E1", {0, 50, 100, 5000}}, 200);
  ASSERT_EQ(s.bursts.size(), 1u);
  EXPECT_EQ(s.bursts[0], (Burst{0, 100, 3, 2.0 / 100.0}));
  EXPECT_EQ(s.isolated, 1u);

  const auto sparse = group_bursts(SpikeTrain{"E1", {0, 500, 1000}}, 200);
  EXPECT_TRUE(sparse.bursts.empty());
  EXPECT_EQ(sparse.isolated, 3u);
}

TEST(GroupBursts, PartitionsTheTrainIntoOrderedRuns) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> gap(100, 1500);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::int64_t> isis(1 + round);
    for (auto& d : isis) d = gap(rng);
    const auto train = train_from_isis(isis);
    const auto s = group_bursts(train, 600);
    std::size_t total = s.isolated;
    for (std::size_t i = 0; i < s.bursts.size(); ++i) {
      total += s.bursts[i].spikes;
      ASSERT_GE(s.bursts[i].spikes, 2u);
      if (i > 0) {
        ASSERT_GT(s.bursts[i].start, s.bursts[i - 1].end);
      }
    }
    ASSERT_EQ(total, train.size());
  }
}

TEST(SimultaneityGroups, WindowAndSeparationRules) {
  const std::vector<std::vector<std::int64_t>> close = {{100}, {250}, {}};
  const auto one = simultaneity_groups(close, EventWindowConfig{});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], (EventWindow{100, 250, 0b011}));

  const std::vector<std::vector<std::int64_t>> far = {{100}, {2000}, {}};
  const auto two = simultaneity_groups(far, EventWindowConfig{});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_TRUE(two[0].has(0));
  EXPECT_TRUE(two[1].has(1));

  const std::vector<std::vector<std::int64_t>> single = {{}, {}, {4000}};
  const auto s = simultaneity_groups(single, EventWindowConfig{});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].presence, 0b100u);
}

TEST(SimultaneityGroups, GapZoneFollowsPolicy) {
  const std::vector<std::vector<std::int64_t>> mid = {{100}, {700}, {}};
  EventWindowConfig config;
  EXPECT_EQ(simultaneity_groups(mid, config).size(), 1u);
  config.gap_policy = GapPolicy::kSplit;
  EXPECT_EQ(simultaneity_groups(mid, config).size(), 2u);
  config.separation = config.window;
  EXPECT_THROW(simultaneity_groups(mid, config), ConfigError);
}

TEST(SimultaneityGroups, IndependentOfTrialOrder) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> when(0, 50000);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::vector<std::int64_t>> trials(3);
    for (auto& t : trials) {
      for (int i = 0; i < 8; ++i) t.push_back(when(rng));
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
    }
    std::vector<int> order = {0, 1, 2};
    const auto reference = simultaneity_groups(trials, EventWindowConfig{});
    while (std::next_permutation(order.begin(), order.end())) {
      std::vector<std::vector<std::int64_t>> permuted;
      for (const int i : order) permuted.push_back(trials[i]);
      auto events = simultaneity_groups(permuted, EventWindowConfig{});
      ASSERT_EQ(events.size(), reference.size());
      for (std::size_t e = 0; e < events.size(); ++e) {
        ASSERT_EQ(events[e].start, reference[e].start);
        ASSERT_EQ(events[e].end, reference[e].end);
        for (std::size_t p = 0; p < 3; ++p) {
          ASSERT_EQ(events[e].has(p), reference[e].has(order[p]));
        }
      }
    }
  }
}

TEST(SpikesCsv, ElectrodeMajorRows) {
  const std::vector<TrialSpikes> trials = {
      {"01", {SpikeTrain{"E1", {5}}, SpikeTrain{"E2", {}}}},
      {"10", {SpikeTrain{"E1", {7, 900}}, SpikeTrain{"E2", {3}}}}};
  std::ostringstream out;
  write_spikes_csv(out, trials);
  EXPECT_EQ(out.str(), "electrode,trial,iteration\nE1,01,5\nE1,10,7\nE1,10,900\nE2,10,3\n");
}
