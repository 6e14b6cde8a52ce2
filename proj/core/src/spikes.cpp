#include "proteinoid/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

#include "proteinoid/errors.hpp"

namespace proteinoid {

void DetectorConfig::validate() const {
  if (refractory < 1) throw ConfigError("detector: refractory must be >= 1");
  if (mode == ThresholdMode::kBaselineSigma) {
    if (baseline_window < 2) throw ConfigError("detector: baseline window must be >= 2 samples");
    if (!(k >= 0.0)) throw ConfigError("detector: k must be >= 0");
    if (!(min_excursion >= 0.0)) throw ConfigError("detector: min_excursion must be >= 0");
  } else if (!std::isfinite(absolute_threshold)) {
    throw ConfigError("detector: absolute threshold must be finite");
  }
}

double spike_threshold(const PotentialTrace& trace, const DetectorConfig& config) {
  config.validate();
  if (config.mode == ThresholdMode::kAbsolute) return config.absolute_threshold;
  if (config.baseline_window > trace.size()) {
    throw ConfigError("detector: baseline window (" + std::to_string(config.baseline_window) +
                      " samples) is longer than the trace (" + std::to_string(trace.size()) + ")");
  }
  const auto first = trace.values.begin();
  const auto last = first + static_cast<std::ptrdiff_t>(config.baseline_window);
  const double n = static_cast<double>(config.baseline_window);
  const double mean = std::accumulate(first, last, 0.0) / n;
  double ss = 0.0;
  for (auto it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
  const double sigma = std::sqrt(ss / n);
  return mean + std::max(config.k * sigma, config.min_excursion);
}

SpikeTrain detect_spikes(const PotentialTrace& trace, const DetectorConfig& config) {
  if (trace.values.empty()) throw ConfigError("detector: trace is empty");
  const double threshold = spike_threshold(trace, config);

  SpikeTrain train{trace.label, {}};
  bool above = false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const bool now = trace.values[i] > threshold;
    if (now && !above) {
      const std::int64_t t = trace.iterations[i];
      if (train.times.empty() || t - train.times.back() >= config.refractory) {
        train.times.push_back(t);
      }
    }
    above = now;
  }
  return train;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

IsiStats isi_stats(const SpikeTrain& train, std::size_t max_lag) {
  IsiStats stats;
  std::vector<double> isi;
  for (std::size_t i = 1; i < train.times.size(); ++i) {
    isi.push_back(static_cast<double>(train.times[i] - train.times[i - 1]));
  }
  if (isi.size() >= 2) {
    const double n = static_cast<double>(isi.size());
    const double mean = std::accumulate(isi.begin(), isi.end(), 0.0) / n;
    double ss = 0.0;
    for (const double d : isi) ss += (d - mean) * (d - mean);
    stats.cv = std::sqrt(ss / n) / mean;
  }
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    if (isi.size() < lag + 2) {
      stats.serial_correlation.emplace_back();
      continue;
    }
    const std::span<const double> all(isi);
    stats.serial_correlation.emplace_back(
        pearson(all.first(isi.size() - lag), all.subspan(lag)));
  }
  return stats;
}

BurstSummary group_bursts(const SpikeTrain& train, std::int64_t max_gap) {
  BurstSummary summary;
  const auto& t = train.times;
  std::size_t i = 0;
  while (i < t.size()) {
    std::size_t j = i;
    while (j + 1 < t.size() && t[j + 1] - t[j] <= max_gap) ++j;
    if (j == i) {
      ++summary.isolated;
    } else {
      const std::size_t count = j - i + 1;
      const std::int64_t span = t[j] - t[i];
      summary.bursts.push_back({t[i], t[j], count,
                                static_cast<double>(count - 1) / static_cast<double>(span)});
    }
    i = j + 1;
  }
  return summary;
}

void EventWindowConfig::validate() const {
  if (window < 1) throw ConfigError("events: window must be >= 1");
  if (!(window < separation)) throw ConfigError("events: window must be below separation");
}

std::vector<EventWindow> simultaneity_groups(std::span<const std::vector<std::int64_t>> trials,
                                             const EventWindowConfig& config) {
  config.validate();
  if (trials.size() > 32) throw ConfigError("events: at most 32 trials");

  std::vector<std::pair<std::int64_t, std::uint32_t>> spikes;
  for (std::uint32_t k = 0; k < trials.size(); ++k) {
    for (const auto t : trials[k]) spikes.emplace_back(t, k);
  }
  std::sort(spikes.begin(), spikes.end());

  std::vector<EventWindow> events;
  for (const auto& [t, trial] : spikes) {
    bool join = false;
    if (!events.empty()) {
      const EventWindow& cur = events.back();
      if (t - cur.end > config.separation) {
        join = false;
      } else if (t - cur.start < config.window) {
        join = true;
      } else {
        join = config.gap_policy == GapPolicy::kMergeEarlier;
      }
    }
    if (join) {
      events.back().end = t;
      events.back().presence |= 1u << trial;
    } else {
      events.push_back({t, t, 1u << trial});
    }
  }
  return events;
}

void write_spikes_csv(std::ostream& out, std::span<const TrialSpikes> trials) {
  out << "electrode,trial,iteration\n";
  if (trials.empty()) return;
  for (std::size_t e = 0; e < trials.front().trains.size(); ++e) {
    for (const auto& trial : trials) {
      if (e >= trial.trains.size()) continue;
      for (const auto t : trial.trains[e].times) {
        out << trial.trains[e].label << ',' << trial.trial << ',' << t << '\n';
      }
    }
  }
}

}  // namespace proteinoid
