#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "proteinoid/boolean.hpp"
#include "proteinoid/electrodes.hpp"
#include "proteinoid/graph.hpp"
#include "proteinoid/spikes.hpp"

namespace proteinoid {

/// Largest k for which every one of the 2^k inputs is simulated.
inline constexpr int kMaxExhaustiveBits = 16;
/// Largest k accepted by sample_mapping.
inline constexpr int kMaxSampledBits = 32;

/// E: {0,1}^k -> {0,1}^k. Bit i of an integer is position i of the string.
struct MappingRecord {
  int k = 0;
  std::vector<std::uint32_t> table;  // table[s] = E(s), 2^k entries
  std::string provenance;

  void validate() const;
  FunctionalGraph graph() const { return FunctionalGraph{table}; }
};

/// f(s) = bit j of E(s).
BooleanFunction project(const MappingRecord& mapping, int j);

/// How inputs are applied and responses decoded.
struct MappingSetup {
  std::vector<std::string> inputs;   // electrode i carries bit i
  std::vector<std::string> outputs;  // electrode j yields bit j
  bool allow_shared = false;         // inputs and outputs may name the same electrode
  StimulusParams stimulus;
  std::int64_t duration = 20000;     // iterations per input string
  std::int64_t response_delay = 0;   // response window opens at onset + delay
  std::int64_t response_length = 0; // 0 = until the end of the trial
  DetectorConfig detector;
  std::int64_t sampling_cadence = 1;
  unsigned workers = 1;              // concurrent trials

  /// Throws ConfigError (k bounds, label checks, overlapping electrodes).
  void validate(const ElectrodeArray& array, int max_bits) const;
};

/// Simulates one input string and returns the decoded output string.
std::uint32_t drive(const ConductiveMask& mask, const FhnParams& params,
                    const ElectrodeArray& array, const MappingSetup& setup, std::uint32_t input);

/// Exhaustive drive of all 2^k inputs, k <= kMaxExhaustiveBits. Deterministic
/// for any worker count.
MappingRecord build_mapping(const ConductiveMask& mask, const FhnParams& params,
                            const ElectrodeArray& array, const MappingSetup& setup,
                            std::string provenance = {});

/// Drives `samples` distinct inputs drawn with std::mt19937_64(seed), for
/// k up to kMaxSampledBits. Returned pairs are sorted by input.
std::vector<std::pair<std::uint32_t, std::uint32_t>> sample_mapping(
    const ConductiveMask& mask, const FhnParams& params, const ElectrodeArray& array,
    const MappingSetup& setup, std::size_t samples, std::uint64_t seed);

std::string to_bits(std::uint32_t value, int k);
/// Throws LoadError on anything but '0'/'1' characters.
std::uint32_t parse_bits(const std::string& text);

/// `input_bits,output_bits`, one row per input in ascending order.
void write_mapping_csv(std::ostream& out, const MappingRecord& mapping);
void write_pairs_csv(std::ostream& out, int k,
                     const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);
/// Inverse of write_mapping_csv; rows may come in any order. Throws LoadError.
MappingRecord read_mapping_csv(std::istream& in);

void write_edge_list(std::ostream& out, const MappingRecord& mapping);
void write_dot(std::ostream& out, const MappingRecord& mapping);
/// Flat `key = value` lines.
void write_graph_report(std::ostream& out, const MappingRecord& mapping,
                        const GraphMetrics& metrics);
/// One row per output bit; NA for metrics beyond their arity limit.
void write_bool_metrics_csv(std::ostream& out, const std::vector<BoolMetrics>& metrics);

}  // namespace proteinoid
