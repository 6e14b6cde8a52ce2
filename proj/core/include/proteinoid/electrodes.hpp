#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "proteinoid/ensemble.hpp"
#include "proteinoid/fhn.hpp"

namespace proteinoid {

struct Electrode {
  std::string label;
  GridPoint center;
};

/// Ordered electrodes E1..En plus the radius of the sensing neighbourhood.
struct ElectrodeArray {
  std::vector<Electrode> electrodes;
  double sensing_radius = 2.0;

  /// 4x4 lattice, row-major E1..E16, spanning the central 60% of the grid
  /// (from 20% to 80% of each dimension).
  static ElectrodeArray grid_layout(int width, int height, int rows = 4, int cols = 4);

  /// Labels E1..En assigned in the given order.
  static ElectrodeArray from_centers(std::span<const GridPoint> centers,
                                     double sensing_radius = 2.0);

  std::size_t size() const noexcept { return electrodes.size(); }
  /// Throws ConfigError when the label is unknown.
  const Electrode& at(const std::string& label) const;
  std::size_t position(const std::string& label) const;

  /// Unique labels, centres inside the grid, positive radius. Throws ConfigError.
  void validate(int width, int height) const;
};

/// Compact node indices sensed by one electrode, in row-major offset order.
struct Probe {
  std::vector<std::int32_t> nodes;
};

/// Conductive nodes q with |q - center| < radius (strict).
Probe make_probe(const Lattice& lattice, GridPoint center, double radius);

/// Sum of (u - v) over the probe's nodes.
double measure(const FieldState& state, const Probe& probe);

/// Convenience over make_probe + measure.
double measure(const Lattice& lattice, const FieldState& state, const Electrode& electrode,
               double sensing_radius);

struct InputPair {
  bool x = false;
  bool y = false;

  friend bool operator==(const InputPair&, const InputPair&) = default;
};

/// "01", "10", "11", "00" (x first).
std::string to_string(InputPair pair);
/// Throws ConfigError for anything but two binary digits.
InputPair parse_input_pair(const std::string& text);

/// Shape of the impulse applied through a stimulating electrode.
struct StimulusParams {
  double amplitude = 0.5;
  double radius = 4.0;  // closed disc around the electrode centre
  std::int64_t duration = 500;
  std::int64_t onset = 0;

  void validate() const;
};

/// Conductive nodes within radius (closed) of the centre, row-major.
std::vector<GridPoint> stimulus_nodes(const ConductiveMask& mask, GridPoint center, double radius);

/// One schedule entry per set bit, in `labels` order.
StimulusSchedule encode_bits(std::span<const bool> bits, std::span<const std::string> labels,
                             const ElectrodeArray& array, const ConductiveMask& mask,
                             const StimulusParams& stim);

/// x drives `x_label` (default E9), y drives `y_label` (default E3).
StimulusSchedule encode_input(InputPair pair, const ElectrodeArray& array,
                              const ConductiveMask& mask, const StimulusParams& stim,
                              const std::string& x_label = "E9",
                              const std::string& y_label = "E3");

struct PotentialTrace {
  std::string label;
  std::vector<std::int64_t> iterations;  // strictly increasing
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const PotentialTrace&, const PotentialTrace&) = default;
};

struct TrialOptions {
  StimulusParams stimulus;
  std::int64_t sampling_cadence = 1;
  std::string x_label = "E9";
  std::string y_label = "E3";
  unsigned workers = 1;
  /// Extra observers run alongside the electrode sampler (e.g. snapshots).
  std::vector<Observer> extra_observers;
};

/// Samples every electrode after each step whose iteration is a multiple of
/// the cadence. Traces are returned in array order.
std::vector<PotentialTrace> record_schedule(const ConductiveMask& mask, const FhnParams& params,
                                            const ElectrodeArray& array,
                                            StimulusSchedule schedule, std::int64_t duration,
                                            std::int64_t sampling_cadence, unsigned workers = 1,
                                            std::span<const Observer> extra_observers = {});

std::vector<PotentialTrace> record_trial(const ConductiveMask& mask, const FhnParams& params,
                                         const ElectrodeArray& array, InputPair pair,
                                         std::int64_t duration, const TrialOptions& options = {});

/// Header `iteration,E1,...,En`; values with 9 significant digits.
void write_traces_csv(std::ostream& out, std::span<const PotentialTrace> traces);
/// Inverse of write_traces_csv. Throws LoadError.
std::vector<PotentialTrace> read_traces_csv(std::istream& in);

}  // namespace proteinoid
