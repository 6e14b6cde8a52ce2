#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proteinoid/electrodes.hpp"

namespace proteinoid {

struct SpikeTrain {
  std::string label;
  std::vector<std::int64_t> times;  // strictly increasing iterations

  std::size_t size() const noexcept { return times.size(); }
  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;
};

enum class ThresholdMode {
  kAbsolute,      // fixed level
  kBaselineSigma  // baseline mean + max(k * sigma, min_excursion)
};

struct DetectorConfig {
  ThresholdMode mode = ThresholdMode::kBaselineSigma;
  double k = 4.0;
  std::size_t baseline_window = 1000;  // leading samples used for mean/sigma
  double absolute_threshold = 1.0;
  // Floor on the height above the baseline. A perfectly flat baseline
  // otherwise makes any rounding-level excursion a spike.
  double min_excursion = 0.5;
  std::int64_t refractory = 100;

  void validate() const;
};

/// Level a sample must strictly exceed. Throws ConfigError when the
/// baseline window is longer than the trace.
double spike_threshold(const PotentialTrace& trace, const DetectorConfig& config);

/// A spike is the first sample of an upward threshold crossing; crossings
/// within `refractory` iterations of the previous spike are ignored.
SpikeTrain detect_spikes(const PotentialTrace& trace, const DetectorConfig& config);

struct IsiStats {
  std::optional<double> cv;  // population std / mean; needs >= 3 spikes
  /// Entry l-1 is the lag-l Pearson coefficient; empty optional when the
  /// train has fewer than l + 2 intervals.
  std::vector<std::optional<double>> serial_correlation;
};

/// Zero-variance interval sequences yield correlation 0.
IsiStats isi_stats(const SpikeTrain& train, std::size_t max_lag = 1);

struct Burst {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::size_t spikes = 0;
  double frequency = 0.0;  // (spikes - 1) / (end - start), per iteration

  friend bool operator==(const Burst&, const Burst&) = default;
};

struct BurstSummary {
  std::vector<Burst> bursts;
  std::size_t isolated = 0;
};

/// Maximal runs with consecutive gaps <= max_gap and at least two spikes.
BurstSummary group_bursts(const SpikeTrain& train, std::int64_t max_gap);

/// What to do with a spike whose distance from the current event is neither
/// "simultaneous" (< window from its first spike) nor "separated"
/// (> separation after its last spike).
enum class GapPolicy { kMergeEarlier, kSplit };

struct EventWindowConfig {
  std::int64_t window = 200;
  std::int64_t separation = 1000;
  GapPolicy gap_policy = GapPolicy::kMergeEarlier;

  void validate() const;
};

struct EventWindow {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::uint32_t presence = 0;  // bit i set when trial i spiked in the window

  bool has(std::size_t trial) const noexcept { return (presence >> trial) & 1u; }
  friend bool operator==(const EventWindow&, const EventWindow&) = default;
};

/// Merges the spikes of several trials at one electrode into event windows.
/// At most 32 trials.
std::vector<EventWindow> simultaneity_groups(std::span<const std::vector<std::int64_t>> trials,
                                             const EventWindowConfig& config);

struct TrialSpikes {
  std::string trial;
  std::vector<SpikeTrain> trains;  // one per electrode
};

/// `electrode,trial,iteration`, electrode-major in the order of the first
/// trial's trains.
void write_spikes_csv(std::ostream& out, std::span<const TrialSpikes> trials);

}  // namespace proteinoid
