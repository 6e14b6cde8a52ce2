#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "proteinoid/ensemble.hpp"
#include "proteinoid/errors.hpp"

using namespace proteinoid;

namespace {

// Lattice offsets of a closed disc of radius d/2, counted directly.
int disc_offsets(int diameter) {
  const double r = diameter / 2.0;
  int n = 0;
  for (int dy = -diameter; dy <= diameter; ++dy) {
    for (int dx = -diameter; dx <= diameter; ++dx) {
      if (dx * dx + dy * dy <= r * r) ++n;
    }
  }
  return n;
}

}  // namespace

TEST(Rasterize, SingleDiameterSevenDiscCoversThirtySevenNodes) {
  ASSERT_EQ(disc_offsets(7), 37);
  const ConductiveMask mask = rasterize(DiscSet{{{50, 50}}, 7}, 100, 100);
  EXPECT_EQ(mask.conductive_count(), 37u);
  EXPECT_TRUE(mask.at(53, 50));
  EXPECT_FALSE(mask.at(54, 50));
  EXPECT_TRUE(mask.at(52, 52));
  EXPECT_FALSE(mask.at(53, 53));
}

TEST(Rasterize, OtherDiametersMatchOffsetCount) {
  for (int d : {1, 3, 5, 9, 11}) {
    EXPECT_EQ(rasterize(DiscSet{{{30, 30}}, d}, 60, 60).conductive_count(),
              static_cast<std::size_t>(disc_offsets(d)))
        << "diameter " << d;
  }
}

TEST(Rasterize, EmptySetGivesEmptyMask) {
  EXPECT_EQ(rasterize(DiscSet{{}, 7}, 20, 10), ConductiveMask(20, 10));
}

TEST(Rasterize, DuplicateCentreIsIdempotent) {
  EXPECT_EQ(rasterize(DiscSet{{{10, 10}, {10, 10}}, 7}, 30, 30),
            rasterize(DiscSet{{{10, 10}}, 7}, 30, 30));
}

TEST(Rasterize, DiscsClipAtBorders) {
  EXPECT_EQ(rasterize(DiscSet{{{0, 0}}, 7}, 30, 30).conductive_count(), 13u);
}

TEST(Rasterize, AddingDiscsNeverClearsNodes) {
  std::mt19937_64 rng(7);
  DiscSet discs{{}, 7};
  ConductiveMask previous(80, 60);
  for (int i = 0; i < 200; ++i) {
    discs.centers.push_back({static_cast<int>(rng() % 80), static_cast<int>(rng() % 60)});
    const ConductiveMask next = rasterize(discs, 80, 60);
    for (int y = 0; y < 60; ++y) {
      for (int x = 0; x < 80; ++x) {
        if (previous.at(x, y)) {
          ASSERT_TRUE(next.at(x, y));
        }
      }
    }
    previous = next;
  }
}

TEST(GenerateEnsemble, ZeroCandidatesIsEmpty) {
  EnsembleConfig config;
  config.candidate_count = 0;
  EXPECT_TRUE(generate_ensemble(config).centers.empty());
}

TEST(GenerateEnsemble, SameSeedSameCentres) {
  EnsembleConfig config;
  config.candidate_count = 5000;
  const auto a = generate_ensemble(config);
  const auto b = generate_ensemble(config);
  EXPECT_EQ(a.centers, b.centers);
  config.rng_seed = 2;
  EXPECT_NE(generate_ensemble(config).centers, a.centers);
}

TEST(GenerateEnsemble, FirstDrawsAreFixed) {
  // mt19937_64 output is fixed by the C++ standard, so these are stable
  // across platforms.
  std::mt19937_64 rng(1);
  EnsembleConfig config;
  config.candidate_count = 1;
  config.density_scale = 1e300;
  const auto discs = generate_ensemble(config);
  ASSERT_EQ(discs.centers.size(), 1u);
  const int x = static_cast<int>(rng() % 1000);
  const int y = static_cast<int>(rng() % 960);
  EXPECT_EQ(discs.centers[0], (GridPoint{x, y}));
}

TEST(GenerateEnsemble, CentresLieOnGrid) {
  EnsembleConfig config;
  config.grid_width = 37;
  config.grid_height = 11;
  config.candidate_count = 3000;
  for (const auto& c : generate_ensemble(config).centers) {
    ASSERT_GE(c.x, 0);
    ASSERT_LT(c.x, 37);
    ASSERT_GE(c.y, 0);
    ASSERT_LT(c.y, 11);
  }
}

TEST(GenerateEnsemble, InnerAnnulusAcceptsMoreThanOuter) {
  EnsembleConfig config;
  config.candidate_count = 10000;
  config.density_scale = config.grid_width / 4.0;
  const auto discs = generate_ensemble(config);
  const double cx = (config.grid_width - 1) / 2.0;
  const double cy = (config.grid_height - 1) / 2.0;
  const double quarter = std::min(config.grid_width, config.grid_height) / 4.0;

  // Candidates are uniform, so accepted / lattice points per annulus is
  // proportional to the acceptance rate there.
  const auto rate = [&](double r0, double r1) {
    double accepted = 0;
    double points = 0;
    for (const auto& c : discs.centers) {
      const double d = std::hypot(c.x - cx, c.y - cy);
      if (d >= r0 && d < r1) accepted += 1;
    }
    for (int y = 0; y < config.grid_height; ++y) {
      for (int x = 0; x < config.grid_width; ++x) {
        const double d = std::hypot(x - cx, y - cy);
        if (d >= r0 && d < r1) points += 1;
      }
    }
    return accepted / points;
  };
  EXPECT_GT(rate(0, quarter), rate(quarter, 2 * quarter));
}

TEST(GenerateEnsemble, EmpiricalAcceptanceFollowsExponentialLaw) {
  EnsembleConfig config;
  config.grid_width = 200;
  config.grid_height = 160;
  config.candidate_count = 2000000;
  config.density_scale = 60.0;
  const auto discs = generate_ensemble(config);
  const double cx = (config.grid_width - 1) / 2.0;
  const double cy = (config.grid_height - 1) / 2.0;
  const double cells = 200.0 * 160.0;

  constexpr int kBins = 8;
  const double bin = 120.0 / kBins;
  std::vector<double> observed(kBins, 0.0);
  std::vector<double> expected(kBins, 0.0);
  std::vector<double> variance(kBins, 0.0);
  for (const auto& c : discs.centers) {
    const auto b = static_cast<int>(std::hypot(c.x - cx, c.y - cy) / bin);
    if (b < kBins) observed[b] += 1;
  }
  for (int y = 0; y < 160; ++y) {
    for (int x = 0; x < 200; ++x) {
      const double d = std::hypot(x - cx, y - cy);
      const auto b = static_cast<int>(d / bin);
      if (b >= kBins) continue;
      const double p = std::exp(-d / 60.0) / cells;
      expected[b] += config.candidate_count * p;
      variance[b] += config.candidate_count * p * (1 - p);
    }
  }
  for (int b = 0; b < kBins; ++b) {
    EXPECT_NEAR(observed[b], expected[b], 5 * std::sqrt(variance[b])) << "bin " << b;
  }
}

TEST(EnsembleConfig, RejectsInvalidFields) {
  EnsembleConfig config;
  config.disc_diameter = 6;
  EXPECT_THROW(config.validate(), ConfigError);
  config = {};
  config.candidate_count = -1;
  EXPECT_THROW(config.validate(), ConfigError);
  config = {};
  config.grid_width = 5;
  EXPECT_THROW(config.validate(), ConfigError);
  config = {};
  config.density_scale = 0;
  EXPECT_THROW(config.validate(), ConfigError);
}

TEST(AcceptanceProbability, DecaysExponentially) {
  EXPECT_DOUBLE_EQ(acceptance_probability(0, 5), 1.0);
  EXPECT_NEAR(acceptance_probability(5, 5), std::exp(-1.0), 1e-15);
  EXPECT_LT(acceptance_probability(10, 5), acceptance_probability(9, 5));
}

TEST(MaskFromImage, ChannelsComparedStrictlyBelowTwenty) {
  RgbImage image{2, 1, {{19, 19, 19}, {20, 19, 19}}};
  const ConductiveMask mask = mask_from_image(image);
  EXPECT_TRUE(mask.at(0, 0));
  EXPECT_FALSE(mask.at(1, 0));
  image.pixels = {{19, 20, 0}, {0, 0, 20}};
  EXPECT_EQ(mask_from_image(image).conductive_count(), 0u);
}

TEST(MaskFromImage, BlackAndWhiteImages) {
  RgbImage black{4, 3, std::vector<Rgb>(12, Rgb{0, 0, 0})};
  EXPECT_EQ(mask_from_image(black), ConductiveMask(4, 3, true));
  RgbImage white{4, 3, std::vector<Rgb>(12, Rgb{255, 255, 255})};
  EXPECT_EQ(mask_from_image(white), ConductiveMask(4, 3, false));
}

TEST(MaskFromImage, RejectsInconsistentDimensions) {
  RgbImage image{4, 3, std::vector<Rgb>(11)};
  EXPECT_THROW(mask_from_image(image), LoadError);
}
