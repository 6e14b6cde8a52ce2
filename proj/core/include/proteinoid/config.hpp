#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "proteinoid/electrodes.hpp"
#include "proteinoid/ensemble.hpp"
#include "proteinoid/fhn.hpp"
#include "proteinoid/spikes.hpp"

namespace proteinoid {

/// Every knob of a pipeline run. Serialised as an INI-style file with one
/// section per stage ([ensemble], [fhn], [electrodes], [stimulus],
/// [detector], [events], [spikes], [mapping], [run]).
struct RunConfig {
  EnsembleConfig ensemble;
  std::filesystem::path mask_image;  // when set, replaces the generated ensemble

  FhnParams fhn;

  int electrode_rows = 4;
  int electrode_cols = 4;
  std::vector<GridPoint> electrode_centers;  // explicit layout; overrides rows/cols
  double sensing_radius = 2.0;

  StimulusParams stimulus{0.5, 4.0, 500, 1000};
  std::string x_electrode = "E9";
  std::string y_electrode = "E3";

  DetectorConfig detector;
  EventWindowConfig events;
  std::int64_t pair_slack = 200;

  std::int64_t burst_gap = 1000;
  std::size_t isi_max_lag = 3;

  std::vector<std::string> mapping_inputs = {"E6", "E7", "E10", "E11"};
  std::vector<std::string> mapping_outputs = {"E1", "E4", "E13", "E16"};
  bool mapping_allow_shared = false;
  std::int64_t mapping_duration = 142000;
  std::int64_t mapping_response_delay = 0;
  std::int64_t mapping_response_length = 0;
  std::size_t mapping_samples = 0;  // 0 = exhaustive

  std::int64_t duration = 142000;
  std::int64_t sampling_cadence = 1;
  std::int64_t snapshot_cadence = 100;  // 0 disables frames
  double snapshot_threshold = 0.04;
  bool write_traces = false;  // mine-gates: also save the three trials' traces
  unsigned workers = 1;
  std::filesystem::path out_dir = "out";

  /// Field and cross-field checks (stability guard, window < separation,
  /// electrodes inside the grid). Throws ConfigError.
  void validate() const;

  ElectrodeArray electrode_array() const;
  int grid_width() const;
  int grid_height() const;
};

/// Keys absent from the input keep their defaults; unknown sections or keys
/// are rejected. Throws ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Commented, complete serialisation; parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const RunConfig& config);
std::string to_string(const RunConfig& config);

/// FNV-1a over the serialised config, excluding output location and worker
/// count (neither changes results).
std::uint64_t config_hash(const RunConfig& config);

}  // namespace proteinoid
