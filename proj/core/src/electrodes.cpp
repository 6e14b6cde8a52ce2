#include "proteinoid/electrodes.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "format.hpp"
#include "proteinoid/errors.hpp"

namespace proteinoid {

ElectrodeArray ElectrodeArray::grid_layout(int width, int height, int rows, int cols) {
  if (rows < 1 || cols < 1) throw ConfigError("electrodes: layout needs at least one row/column");
  const auto coord = [](int extent, int i, int n) {
    if (n == 1) return static_cast<int>(std::lround((extent - 1) / 2.0));
    return static_cast<int>(std::lround(0.2 * extent + 0.6 * extent * i / (n - 1)));
  };
  ElectrodeArray array;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      array.electrodes.push_back({"E" + std::to_string(r * cols + c + 1),
                                  {coord(width, c, cols), coord(height, r, rows)}});
    }
  }
  return array;
}

ElectrodeArray ElectrodeArray::from_centers(std::span<const GridPoint> centers,
                                            double sensing_radius) {
  ElectrodeArray array;
  array.sensing_radius = sensing_radius;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    array.electrodes.push_back({"E" + std::to_string(i + 1), centers[i]});
  }
  return array;
}

std::size_t ElectrodeArray::position(const std::string& label) const {
  for (std::size_t i = 0; i < electrodes.size(); ++i) {
    if (electrodes[i].label == label) return i;
  }
  throw ConfigError("electrodes: unknown label '" + label + "'");
}

const Electrode& ElectrodeArray::at(const std::string& label) const {
  return electrodes[position(label)];
}

void ElectrodeArray::validate(int width, int height) const {
  if (!(sensing_radius > 0.0)) throw ConfigError("electrodes: sensing_radius must be positive");
  std::set<std::string> seen;
  for (const auto& e : electrodes) {
    if (!seen.insert(e.label).second) throw ConfigError("electrodes: duplicate label " + e.label);
    if (e.center.x < 0 || e.center.y < 0 || e.center.x >= width || e.center.y >= height) {
      throw ConfigError("electrodes: " + e.label + " lies outside the grid");
    }
  }
}

Probe make_probe(const Lattice& lattice, GridPoint center, double radius) {
  Probe probe;
  const int reach = static_cast<int>(std::ceil(radius));
  const double r2 = radius * radius;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx * dx + dy * dy >= r2) continue;
      const std::int32_t i = lattice.index_of(center.x + dx, center.y + dy);
      if (i >= 0) probe.nodes.push_back(i);
    }
  }
  return probe;
}

double measure(const FieldState& state, const Probe& probe) {
  double sum = 0.0;
  for (const auto i : probe.nodes) sum += state.u[i] - state.v[i];
  return sum;
}

double measure(const Lattice& lattice, const FieldState& state, const Electrode& electrode,
               double sensing_radius) {
  return measure(state, make_probe(lattice, electrode.center, sensing_radius));
}

std::string to_string(InputPair pair) {
  return std::string{pair.x ? '1' : '0', pair.y ? '1' : '0'};
}

InputPair parse_input_pair(const std::string& text) {
  if (text.size() != 2 || (text[0] != '0' && text[0] != '1') ||
      (text[1] != '0' && text[1] != '1')) {
    throw ConfigError("input pair must be one of 00, 01, 10, 11; got '" + text + "'");
  }
  return {text[0] == '1', text[1] == '1'};
}

void StimulusParams::validate() const {
  if (!std::isfinite(amplitude)) throw ConfigError("stimulus: amplitude must be finite");
  if (!(radius >= 0.0)) throw ConfigError("stimulus: radius must be >= 0");
  if (duration < 0) throw ConfigError("stimulus: duration must be >= 0");
  if (onset < 0) throw ConfigError("stimulus: onset must be >= 0");
}

std::vector<GridPoint> stimulus_nodes(const ConductiveMask& mask, GridPoint center,
                                      double radius) {
  std::vector<GridPoint> nodes;
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx * dx + dy * dy > r2) continue;
      if (mask.at(center.x + dx, center.y + dy)) nodes.push_back({center.x + dx, center.y + dy});
    }
  }
  return nodes;
}

StimulusSchedule encode_bits(std::span<const bool> bits, std::span<const std::string> labels,
                             const ElectrodeArray& array, const ConductiveMask& mask,
                             const StimulusParams& stim) {
  stim.validate();
  if (bits.size() != labels.size()) throw ConfigError("encode: bits/labels size mismatch");
  StimulusSchedule schedule;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    schedule.entries.push_back({stimulus_nodes(mask, array.at(labels[i]).center, stim.radius),
                                stim.amplitude, stim.onset, stim.onset + stim.duration});
  }
  return schedule;
}

StimulusSchedule encode_input(InputPair pair, const ElectrodeArray& array,
                              const ConductiveMask& mask, const StimulusParams& stim,
                              const std::string& x_label, const std::string& y_label) {
  const bool bits[] = {pair.x, pair.y};
  const std::string labels[] = {x_label, y_label};
  return encode_bits(bits, labels, array, mask, stim);
}

std::vector<PotentialTrace> record_schedule(const ConductiveMask& mask, const FhnParams& params,
                                            const ElectrodeArray& array,
                                            StimulusSchedule schedule, std::int64_t duration,
                                            std::int64_t sampling_cadence, unsigned workers,
                                            std::span<const Observer> extra_observers) {
  if (sampling_cadence < 1) throw ConfigError("trial: sampling cadence must be >= 1");
  if (duration < 0) throw ConfigError("trial: duration must be >= 0");
  array.validate(mask.width(), mask.height());

  Simulation sim(mask, params, std::move(schedule), workers);
  std::vector<Probe> probes;
  std::vector<PotentialTrace> traces;
  const auto samples = static_cast<std::size_t>(duration / sampling_cadence);
  for (const auto& e : array.electrodes) {
    probes.push_back(make_probe(sim.lattice(), e.center, array.sensing_radius));
    PotentialTrace trace{e.label, {}, {}};
    trace.iterations.reserve(samples);
    trace.values.reserve(samples);
    traces.push_back(std::move(trace));
  }

  std::vector<Observer> observers;
  observers.push_back({sampling_cadence, [&](const Simulation& s) {
                         for (std::size_t i = 0; i < probes.size(); ++i) {
                           traces[i].iterations.push_back(s.iteration());
                           traces[i].values.push_back(s.sum_u_minus_v(probes[i].nodes));
                         }
                       }});
  observers.insert(observers.end(), extra_observers.begin(), extra_observers.end());
  sim.run(duration, observers);
  return traces;
}

std::vector<PotentialTrace> record_trial(const ConductiveMask& mask, const FhnParams& params,
                                         const ElectrodeArray& array, InputPair pair,
                                         std::int64_t duration, const TrialOptions& options) {
  array.validate(mask.width(), mask.height());
  auto schedule =
      encode_input(pair, array, mask, options.stimulus, options.x_label, options.y_label);
  return record_schedule(mask, params, array, std::move(schedule), duration,
                         options.sampling_cadence, options.workers, options.extra_observers);
}

void write_traces_csv(std::ostream& out, std::span<const PotentialTrace> traces) {
  out << "iteration";
  for (const auto& t : traces) out << ',' << t.label;
  out << '\n';
  if (traces.empty()) return;
  const std::size_t rows = traces.front().size();
  for (const auto& t : traces) {
    if (t.size() != rows || t.iterations != traces.front().iterations) {
      throw ConfigError("traces: electrodes were sampled on different iterations");
    }
  }
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    line = std::to_string(traces.front().iterations[r]);
    for (const auto& t : traces) {
      line += ',';
      line += format_g9(t.values[r]);
    }
    line += '\n';
    out << line;
  }
}

std::vector<PotentialTrace> read_traces_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw LoadError("traces: empty file");
  std::vector<PotentialTrace> traces;
  {
    std::istringstream header(line);
    std::string cell;
    if (!std::getline(header, cell, ',') || cell != "iteration") {
      throw LoadError("traces: header must start with 'iteration'");
    }
    while (std::getline(header, cell, ',')) traces.push_back({cell, {}, {}});
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    std::int64_t iteration = 0;
    try {
      iteration = std::stoll(cell);
    } catch (const std::exception&) {
      throw LoadError("traces: bad iteration on row " + std::to_string(row));
    }
    for (auto& t : traces) {
      if (!std::getline(cells, cell, ',')) {
        throw LoadError("traces: short row " + std::to_string(row));
      }
      if (!t.iterations.empty() && iteration <= t.iterations.back()) {
        throw LoadError("traces: iterations must be strictly increasing");
      }
      t.iterations.push_back(iteration);
      try {
        t.values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw LoadError("traces: bad value on row " + std::to_string(row));
      }
    }
  }
  return traces;
}

}  // namespace proteinoid
