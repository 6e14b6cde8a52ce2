#include "proteinoid/mapping.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <type_traits>

#include "format.hpp"
#include "parallel.hpp"
#include "proteinoid/errors.hpp"

namespace proteinoid {

void MappingRecord::validate() const {
  if (k < 1 || k > kMaxExhaustiveBits) {
    throw ConfigError("mapping: k must be in 1.." + std::to_string(kMaxExhaustiveBits));
  }
  if (table.size() != (std::size_t{1} << k)) throw ConfigError("mapping: table must have 2^k rows");
  for (const auto out : table) {
    if (out >> k) throw ConfigError("mapping: output wider than k bits");
  }
}

BooleanFunction project(const MappingRecord& mapping, int j) {
  mapping.validate();
  if (j < 0 || j >= mapping.k) throw ConfigError("project: output index out of range");
  std::vector<std::uint8_t> table(mapping.table.size());
  for (std::size_t s = 0; s < table.size(); ++s) table[s] = (mapping.table[s] >> j) & 1u;
  return BooleanFunction(mapping.k, std::move(table));
}

void MappingSetup::validate(const ElectrodeArray& array, int max_bits) const {
  const auto k = static_cast<int>(inputs.size());
  if (k < 1) throw ConfigError("mapping: at least one input electrode is required");
  if (k > max_bits) {
    throw ConfigError("mapping: k = " + std::to_string(k) + " exceeds the limit of " +
                      std::to_string(max_bits) +
                      " for this mode; use sampled mapping (mapping.samples) for wider setups");
  }
  if (outputs.size() != inputs.size()) {
    throw ConfigError("mapping: need exactly as many output electrodes as inputs");
  }
  std::set<std::string> in(inputs.begin(), inputs.end());
  std::set<std::string> out(outputs.begin(), outputs.end());
  if (in.size() != inputs.size() || out.size() != outputs.size()) {
    throw ConfigError("mapping: electrode listed twice on the same side");
  }
  for (const auto& l : inputs) array.at(l);
  for (const auto& l : outputs) {
    array.at(l);
    if (!allow_shared && in.count(l)) {
      throw ConfigError("mapping: " + l + " is both input and output; set allow_shared");
    }
  }
  if (duration < 1) throw ConfigError("mapping: duration must be >= 1");
  if (response_delay < 0 || response_length < 0) {
    throw ConfigError("mapping: response window must be non-negative");
  }
  if (sampling_cadence < 1) throw ConfigError("mapping: sampling cadence must be >= 1");
  stimulus.validate();
  detector.validate();
}

std::uint32_t drive(const ConductiveMask& mask, const FhnParams& params,
                    const ElectrodeArray& array, const MappingSetup& setup, std::uint32_t input) {
  const std::size_t k = setup.inputs.size();
  auto bits = std::make_unique<bool[]>(k);
  for (std::size_t i = 0; i < k; ++i) bits[i] = ((input >> i) & 1u) != 0;
  auto schedule = encode_bits(std::span<const bool>(bits.get(), k), setup.inputs, array, mask,
                              setup.stimulus);

  ElectrodeArray sensors;
  sensors.sensing_radius = array.sensing_radius;
  for (const auto& l : setup.outputs) sensors.electrodes.push_back(array.at(l));
  const auto traces = record_schedule(mask, params, sensors, std::move(schedule), setup.duration,
                                      setup.sampling_cadence, 1);

  const std::int64_t open = setup.stimulus.onset + setup.response_delay;
  const std::int64_t close =
      setup.response_length == 0 ? std::numeric_limits<std::int64_t>::max()
                                 : open + setup.response_length;
  std::uint32_t output = 0;
  for (std::size_t j = 0; j < traces.size(); ++j) {
    const SpikeTrain train = detect_spikes(traces[j], setup.detector);
    const bool fired = std::any_of(train.times.begin(), train.times.end(),
                                   [&](std::int64_t t) { return t >= open && t < close; });
    if (fired) output |= 1u << j;
  }
  return output;
}

MappingRecord build_mapping(const ConductiveMask& mask, const FhnParams& params,
                            const ElectrodeArray& array, const MappingSetup& setup,
                            std::string provenance) {
  setup.validate(array, kMaxExhaustiveBits);
  array.validate(mask.width(), mask.height());
  MappingRecord record;
  record.k = static_cast<int>(setup.inputs.size());
  record.table.resize(std::size_t{1} << record.k);
  record.provenance = std::move(provenance);
  detail::parallel_for(record.table.size(), setup.workers, [&](std::size_t s) {
    record.table[s] = drive(mask, params, array, setup, static_cast<std::uint32_t>(s));
  });
  return record;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> sample_mapping(
    const ConductiveMask& mask, const FhnParams& params, const ElectrodeArray& array,
    const MappingSetup& setup, std::size_t samples, std::uint64_t seed) {
  setup.validate(array, kMaxSampledBits);
  array.validate(mask.width(), mask.height());
  const auto k = static_cast<int>(setup.inputs.size());
  const std::uint64_t space = std::uint64_t{1} << k;
  if (samples > space) throw ConfigError("mapping: more samples than distinct inputs");

  std::mt19937_64 rng(seed);
  std::set<std::uint32_t> chosen;
  while (chosen.size() < samples) chosen.insert(static_cast<std::uint32_t>(rng() % space));

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto s : chosen) pairs.emplace_back(s, 0);
  detail::parallel_for(pairs.size(), setup.workers, [&](std::size_t i) {
    pairs[i].second = drive(mask, params, array, setup, pairs[i].first);
  });
  return pairs;
}

std::string to_bits(std::uint32_t value, int k) {
  std::string s(static_cast<std::size_t>(k), '0');
  for (int i = 0; i < k; ++i) {
    if ((value >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::uint32_t parse_bits(const std::string& text) {
  if (text.empty() || text.size() > 32) throw LoadError("bits: expected 1..32 binary digits");
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      v |= 1u << i;
    } else if (text[i] != '0') {
      throw LoadError("bits: '" + text + "' is not a binary string");
    }
  }
  return v;
}

void write_mapping_csv(std::ostream& out, const MappingRecord& mapping) {
  out << "input_bits,output_bits\n";
  for (std::size_t s = 0; s < mapping.table.size(); ++s) {
    out << to_bits(static_cast<std::uint32_t>(s), mapping.k) << ','
        << to_bits(mapping.table[s], mapping.k) << '\n';
  }
}

void write_pairs_csv(std::ostream& out, int k,
                     const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
  out << "input_bits,output_bits\n";
  for (const auto& [in, res] : pairs) out << to_bits(in, k) << ',' << to_bits(res, k) << '\n';
}

MappingRecord read_mapping_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("input_bits,output_bits", 0) != 0) {
    throw LoadError("mapping: header must be input_bits,output_bits");
  }
  MappingRecord record;
  std::vector<char> seen;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw LoadError("mapping: row without a comma");
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (record.k == 0) {
      record.k = static_cast<int>(a.size());
      if (record.k > kMaxExhaustiveBits) throw LoadError("mapping: k too large for a full table");
      record.table.assign(std::size_t{1} << record.k, 0);
      seen.assign(record.table.size(), 0);
    }
    if (a.size() != static_cast<std::size_t>(record.k) || b.size() != a.size()) {
      throw LoadError("mapping: inconsistent bit-string width");
    }
    const std::uint32_t s = parse_bits(a);
    if (seen[s]) throw LoadError("mapping: input " + a + " listed twice");
    seen[s] = 1;
    record.table[s] = parse_bits(b);
  }
  if (record.k == 0) throw LoadError("mapping: no rows");
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw LoadError("mapping: table is not total");
  }
  return record;
}

void write_edge_list(std::ostream& out, const MappingRecord& mapping) {
  out << "source,target\n";
  for (std::size_t s = 0; s < mapping.table.size(); ++s) {
    out << to_bits(static_cast<std::uint32_t>(s), mapping.k) << ','
        << to_bits(mapping.table[s], mapping.k) << '\n';
  }
}

void write_dot(std::ostream& out, const MappingRecord& mapping) {
  out << "digraph mapping {\n";
  for (std::size_t s = 0; s < mapping.table.size(); ++s) {
    out << "  \"" << to_bits(static_cast<std::uint32_t>(s), mapping.k) << "\" -> \""
        << to_bits(mapping.table[s], mapping.k) << "\";\n";
  }
  out << "}\n";
}

namespace {

template <class T>
std::string join(const std::vector<T>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s << ' ';
    if constexpr (std::is_floating_point_v<T>) {
      s << format_g9(values[i]);
    } else {
      s << values[i];
    }
  }
  return s.str();
}

std::string join_distribution(const std::map<std::uint32_t, std::size_t>& d) {
  std::ostringstream s;
  bool first = true;
  for (const auto& [degree, count] : d) {
    if (!first) s << ' ';
    first = false;
    s << degree << ':' << count;
  }
  return s.str();
}

}  // namespace

void write_graph_report(std::ostream& out, const MappingRecord& mapping,
                        const GraphMetrics& m) {
  out << "# distances directed; eccentricity over reachable vertices only\n"
      << "# connectivity on the underlying simple undirected graph\n"
      << "# closeness from incoming distances, scaled by reach\n"
      << "# eigenvector centrality: in-edge power iteration on A^T + I, uniform start\n";
  out << "provenance = " << mapping.provenance << '\n'
      << "k = " << mapping.k << '\n'
      << "vertices = " << m.vertices << '\n'
      << "components = " << m.components << '\n'
      << "cycles = " << m.cycles << '\n'
      << "in_degree_distribution = " << join_distribution(m.in_degree_distribution) << '\n'
      << "out_degree_distribution = " << join_distribution(m.out_degree_distribution) << '\n'
      << "radius = " << m.radius << '\n'
      << "diameter = " << m.diameter << '\n'
      << "node_connectivity = " << m.node_connectivity << '\n'
      << "edge_connectivity = " << m.edge_connectivity << '\n'
      << "eccentricity = " << join(m.eccentricity) << '\n'
      << "degree_centrality = " << join(m.degree_centrality) << '\n'
      << "closeness_centrality = "
      << (m.closeness_centrality ? join(*m.closeness_centrality) : std::string("NA")) << '\n'
      << "eigenvector_centrality = " << join(m.eigenvector_centrality) << '\n'
      << "eigenvector_iterations = " << m.eigenvector_iterations << '\n'
      << "eigenvector_converged = " << (m.eigenvector_converged ? "true" : "false") << '\n';
  if (m.distance) {
    const std::size_t n = m.vertices;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::int32_t> row(m.distance->begin() + static_cast<std::ptrdiff_t>(s * n),
                                    m.distance->begin() + static_cast<std::ptrdiff_t>(s * n + n));
      out << "distance." << to_bits(static_cast<std::uint32_t>(s), mapping.k) << " = "
          << join(row) << '\n';
    }
  } else {
    out << "distance = NA\n";
  }
}

void write_bool_metrics_csv(std::ostream& out, const std::vector<BoolMetrics>& metrics) {
  out << "output,weight,algebraic_degree,nonlinearity,total_influence,influence,sensitivity,"
         "block_sensitivity,certificate_complexity,decision_tree_depth\n";
  const auto opt = [](const auto& v) -> std::string {
    if (!v) return "NA";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
      return format_g9(*v);
    } else {
      return std::to_string(*v);
    }
  };
  for (std::size_t j = 0; j < metrics.size(); ++j) {
    const BoolMetrics& m = metrics[j];
    out << j << ',' << m.weight << ',' << opt(m.algebraic_degree) << ','
        << opt(m.nonlinearity) << ',' << opt(m.total_influence) << ','
        << (m.influence ? join(*m.influence) : std::string("NA")) << ',' << opt(m.sensitivity)
        << ',' << opt(m.block_sensitivity) << ',' << opt(m.certificate_complexity) << ','
        << opt(m.decision_tree_depth) << '\n';
  }
}

}  // namespace proteinoid
