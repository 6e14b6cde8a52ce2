#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "proteinoid/config.hpp"
#include "proteinoid/gates.hpp"
#include "proteinoid/mapping.hpp"

namespace proteinoid {

/// Output layout under RunConfig::out_dir:
///   config.effective.ini        every command
///   mask/discs.csv, mask.pbm    gen-ensemble
///   traces/trial_XY.csv         simulate (and mine-gates with run.write_traces)
///   frames/NNNNNNNNN.pgm        simulate, one per snapshot cadence
///   gates/census.csv, records.csv, two_output.csv, spikes.csv
///   mapping/mapping.csv, edges.csv, graph.dot, graph_metrics.txt, bool_metrics.csv
///   spikes/spikes.csv, summary.csv, bursts.csv
///
/// Results are computed first and written afterwards from the calling thread.

/// Loaded from ensemble.mask_image when set, otherwise generated and rasterised.
ConductiveMask build_mask(const RunConfig& config);

/// Electrode layout for the mask's grid, validated against it.
ElectrodeArray electrode_array_for(const RunConfig& config, const ConductiveMask& mask);

struct EnsembleSummary {
  std::size_t discs = 0;
  std::size_t conductive = 0;
  std::size_t total = 0;
};

EnsembleSummary run_gen_ensemble(const RunConfig& config, std::ostream& log);

struct SimulateResult {
  std::vector<PotentialTrace> traces;
  std::size_t frames = 0;
};

SimulateResult run_simulate(const RunConfig& config, InputPair pair, std::ostream& log);

/// Trials (0,1), (1,0), (1,1) with the worker budget shared between them.
GateCensus run_mine_gates(const RunConfig& config, std::ostream& log);

/// Drives the configured electrodes, or loads `replay` (a mapping CSV)
/// instead of simulating. With mapping.samples > 0 only the sampled pairs
/// are written and no graph analysis is done; the returned record is empty.
MappingRecord run_map(const RunConfig& config, const std::optional<std::filesystem::path>& replay,
                      std::ostream& log);

/// Spike, ISI and burst summaries for saved traces, or for a fresh trial of
/// `pair` when no trace files are given.
std::vector<TrialSpikes> run_analyze_spikes(const RunConfig& config,
                                            const std::vector<std::filesystem::path>& traces,
                                            InputPair pair, std::ostream& log);

}  // namespace proteinoid
