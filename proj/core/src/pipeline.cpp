#include "proteinoid/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "format.hpp"
#include "parallel.hpp"
#include "proteinoid/errors.hpp"
#include "proteinoid/netpbm.hpp"

namespace proteinoid {

namespace fs = std::filesystem;

namespace {

fs::path prepare_dir(const RunConfig& config, const char* sub) {
  const fs::path dir = config.out_dir / sub;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw LoadError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw LoadError("write failed: " + path.string());
}

template <class Writer>
void write_file(const fs::path& path, const Writer& writer) {
  auto out = open_out(path);
  writer(out);
  finish(out, path);
}

void write_effective_config(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw LoadError("cannot create " + config.out_dir.string() + ": " + ec.message());
  write_file(config.out_dir / "config.effective.ini", [&](std::ostream& out) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    out << "# config hash " << hash << '\n';
    write_config(out, config);
  });
}

TrialOptions trial_options(const RunConfig& config, unsigned workers) {
  TrialOptions options;
  options.stimulus = config.stimulus;
  options.sampling_cadence = config.sampling_cadence;
  options.x_label = config.x_electrode;
  options.y_label = config.y_electrode;
  options.workers = workers;
  return options;
}

std::string frame_name(std::int64_t iteration) {
  char name[32];
  std::snprintf(name, sizeof name, "%09lld.pgm", static_cast<long long>(iteration));
  return name;
}

std::vector<TrialSpikes> detect_all(const std::string& trial,
                                    const std::vector<PotentialTrace>& traces,
                                    const DetectorConfig& detector) {
  TrialSpikes spikes{trial, {}};
  for (const auto& t : traces) spikes.trains.push_back(detect_spikes(t, detector));
  return {spikes};
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_g9(*v) : std::string("NA");
}

}  // namespace

ConductiveMask build_mask(const RunConfig& config) {
  if (!config.mask_image.empty()) return mask_from_image(netpbm::read(config.mask_image));
  return rasterize(generate_ensemble(config.ensemble), config.ensemble.grid_width,
                   config.ensemble.grid_height);
}

ElectrodeArray electrode_array_for(const RunConfig& config, const ConductiveMask& mask) {
  ElectrodeArray array =
      config.electrode_centers.empty()
          ? ElectrodeArray::grid_layout(mask.width(), mask.height(), config.electrode_rows,
                                        config.electrode_cols)
          : ElectrodeArray::from_centers(config.electrode_centers);
  array.sensing_radius = config.sensing_radius;
  array.validate(mask.width(), mask.height());
  array.at(config.x_electrode);
  array.at(config.y_electrode);
  return array;
}

EnsembleSummary run_gen_ensemble(const RunConfig& config, std::ostream& log) {
  config.validate();
  const DiscSet discs = generate_ensemble(config.ensemble);
  const ConductiveMask mask =
      rasterize(discs, config.ensemble.grid_width, config.ensemble.grid_height);

  write_effective_config(config);
  const fs::path dir = prepare_dir(config, "mask");
  write_file(dir / "discs.csv", [&](std::ostream& out) {
    out << "x,y,diameter\n";
    for (const auto& c : discs.centers) out << c.x << ',' << c.y << ',' << discs.diameter << '\n';
  });
  write_file(dir / "mask.pbm", [&](std::ostream& out) { netpbm::write_mask(out, mask); });

  EnsembleSummary summary{discs.centers.size(), mask.conductive_count(),
                          static_cast<std::size_t>(mask.width()) * mask.height()};
  log << "discs " << summary.discs << "\nconductive nodes " << summary.conductive
      << "\ntotal nodes " << summary.total << '\n';
  return summary;
}

SimulateResult run_simulate(const RunConfig& config, InputPair pair, std::ostream& log) {
  config.validate();
  const ConductiveMask mask = build_mask(config);
  const ElectrodeArray array = electrode_array_for(config, mask);

  write_effective_config(config);
  const fs::path frames_dir = prepare_dir(config, "frames");
  const fs::path traces_dir = prepare_dir(config, "traces");

  // Frames are written as they are produced; only the coordinating thread
  // calls observers, so this is still a single writer.
  SimulateResult result;
  TrialOptions options = trial_options(config, config.workers);
  if (config.snapshot_cadence > 0) {
    options.extra_observers.push_back(
        {config.snapshot_cadence, [&](const Simulation& sim) {
           const fs::path path = frames_dir / frame_name(sim.iteration());
           write_file(path, [&](std::ostream& out) {
             netpbm::write_gray(out, render_frame(sim, config.snapshot_threshold));
           });
           ++result.frames;
         }});
  }
  result.traces = record_trial(mask, config.fhn, array, pair, config.duration, options);

  const fs::path path = traces_dir / ("trial_" + to_string(pair) + ".csv");
  write_file(path, [&](std::ostream& out) { write_traces_csv(out, result.traces); });
  log << "trial " << to_string(pair) << ": " << config.duration << " iterations, "
      << result.frames << " frames\n";
  return result;
}

GateCensus run_mine_gates(const RunConfig& config, std::ostream& log) {
  config.validate();
  const ConductiveMask mask = build_mask(config);
  const ElectrodeArray array = electrode_array_for(config, mask);
  const std::array<InputPair, 3> pairs = {InputPair{false, true}, InputPair{true, false},
                                          InputPair{true, true}};

  // Trials run side by side; leftover workers go to the earliest trials.
  const unsigned concurrent = std::min(config.workers, 3u);
  std::array<std::vector<PotentialTrace>, 3> traces;
  detail::parallel_for(3, concurrent, [&](std::size_t i) {
    unsigned share = config.workers / 3 + (i < config.workers % 3 ? 1 : 0);
    if (share == 0) share = 1;
    traces[i] = record_trial(mask, config.fhn, array, pairs[i], config.duration,
                             trial_options(config, share));
  });

  TrialSet trials;
  trials.duration = config.duration;
  std::vector<TrialSpikes> spikes;
  for (std::size_t i = 0; i < 3; ++i) {
    TrialSpikes t{to_string(pairs[i]), {}};
    for (const auto& trace : traces[i]) t.trains.push_back(detect_spikes(trace, config.detector));
    trials.trains[i] = t.trains;
    spikes.push_back(std::move(t));
  }
  GateCensus census = mine_gates(trials, config.events);

  std::vector<TwoOutputGate> pairs_found;
  for (std::size_t a = 0; a < array.size(); ++a) {
    for (std::size_t b = a + 1; b < array.size(); ++b) {
      auto found = find_two_output_gates(census.records, array.electrodes[a].label,
                                         array.electrodes[b].label, config.pair_slack);
      pairs_found.insert(pairs_found.end(), found.begin(), found.end());
    }
  }

  write_effective_config(config);
  const fs::path dir = prepare_dir(config, "gates");
  write_file(dir / "census.csv", [&](std::ostream& out) { write_census_csv(out, census); });
  write_file(dir / "records.csv",
             [&](std::ostream& out) { write_gate_records_csv(out, census.records); });
  write_file(dir / "two_output.csv",
             [&](std::ostream& out) { write_two_output_csv(out, pairs_found); });
  write_file(dir / "spikes.csv", [&](std::ostream& out) { write_spikes_csv(out, spikes); });
  if (config.write_traces) {
    const fs::path tdir = prepare_dir(config, "traces");
    for (std::size_t i = 0; i < 3; ++i) {
      write_file(tdir / ("trial_" + to_string(pairs[i]) + ".csv"),
                 [&](std::ostream& out) { write_traces_csv(out, traces[i]); });
    }
  }

  std::size_t active = 0;
  for (std::size_t e = 0; e < census.electrodes.size(); ++e) {
    if (census.electrode_total(e) > 0) ++active;
  }
  log << "gates " << census.grand_total() << " on " << active << " electrodes, "
      << pairs_found.size() << " two-output pairs\n";
  return census;
}

MappingRecord run_map(const RunConfig& config, const std::optional<fs::path>& replay,
                      std::ostream& log) {
  config.validate();
  MappingRecord record;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sampled;

  if (replay) {
    std::ifstream in(*replay);
    if (!in) throw LoadError("cannot open " + replay->string());
    record = read_mapping_csv(in);
    record.provenance = "replay " + replay->filename().string();
  } else {
    const ConductiveMask mask = build_mask(config);
    const ElectrodeArray array = electrode_array_for(config, mask);
    MappingSetup setup;
    setup.inputs = config.mapping_inputs;
    setup.outputs = config.mapping_outputs;
    setup.allow_shared = config.mapping_allow_shared;
    setup.stimulus = config.stimulus;
    setup.duration = config.mapping_duration;
    setup.response_delay = config.mapping_response_delay;
    setup.response_length = config.mapping_response_length;
    setup.detector = config.detector;
    setup.sampling_cadence = config.sampling_cadence;
    setup.workers = config.workers;
    if (config.mapping_samples > 0) {
      sampled = sample_mapping(mask, config.fhn, array, setup, config.mapping_samples,
                               config.ensemble.rng_seed);
    } else {
      char hash[32];
      std::snprintf(hash, sizeof hash, "%016llx",
                    static_cast<unsigned long long>(config_hash(config)));
      record = build_mapping(mask, config.fhn, array, setup, std::string("config ") + hash);
    }
  }

  write_effective_config(config);
  const fs::path dir = prepare_dir(config, "mapping");
  if (config.mapping_samples > 0 && !replay) {
    const int k = static_cast<int>(config.mapping_inputs.size());
    write_file(dir / "mapping.csv", [&](std::ostream& out) { write_pairs_csv(out, k, sampled); });
    log << "sampled " << sampled.size() << " of 2^" << k << " inputs\n";
    return {};
  }

  const GraphMetrics metrics = graph_metrics(record.graph());
  std::vector<BoolMetrics> bool_rows;
  for (int j = 0; j < record.k; ++j) bool_rows.push_back(bool_metrics(project(record, j)));

  write_file(dir / "mapping.csv", [&](std::ostream& out) { write_mapping_csv(out, record); });
  write_file(dir / "edges.csv", [&](std::ostream& out) { write_edge_list(out, record); });
  write_file(dir / "graph.dot", [&](std::ostream& out) { write_dot(out, record); });
  write_file(dir / "graph_metrics.txt",
             [&](std::ostream& out) { write_graph_report(out, record, metrics); });
  write_file(dir / "bool_metrics.csv",
             [&](std::ostream& out) { write_bool_metrics_csv(out, bool_rows); });
  log << "k " << record.k << ": " << metrics.cycles << " cycles, diameter " << metrics.diameter
      << '\n';
  return record;
}

std::vector<TrialSpikes> run_analyze_spikes(const RunConfig& config,
                                            const std::vector<fs::path>& traces,
                                            InputPair pair, std::ostream& log) {
  config.validate();
  std::vector<TrialSpikes> trials;
  if (traces.empty()) {
    const ConductiveMask mask = build_mask(config);
    const ElectrodeArray array = electrode_array_for(config, mask);
    const auto recorded = record_trial(mask, config.fhn, array, pair, config.duration,
                                       trial_options(config, config.workers));
    trials = detect_all(to_string(pair), recorded, config.detector);
  } else {
    for (const auto& path : traces) {
      std::ifstream in(path);
      if (!in) throw LoadError("cannot open " + path.string());
      auto found = detect_all(path.stem().string(), read_traces_csv(in), config.detector);
      trials.push_back(std::move(found.front()));
    }
  }

  write_effective_config(config);
  const fs::path dir = prepare_dir(config, "spikes");
  write_file(dir / "spikes.csv", [&](std::ostream& out) { write_spikes_csv(out, trials); });
  write_file(dir / "summary.csv", [&](std::ostream& out) {
    out << "electrode,trial,spikes,cv";
    for (std::size_t l = 1; l <= config.isi_max_lag; ++l) out << ",isi_corr_lag" << l;
    out << ",bursts,isolated\n";
    for (const auto& t : trials) {
      for (const auto& train : t.trains) {
        const IsiStats stats = isi_stats(train, config.isi_max_lag);
        const BurstSummary bursts = group_bursts(train, config.burst_gap);
        out << train.label << ',' << t.trial << ',' << train.size() << ','
            << optional_field(stats.cv);
        for (const auto& c : stats.serial_correlation) out << ',' << optional_field(c);
        out << ',' << bursts.bursts.size() << ',' << bursts.isolated << '\n';
      }
    }
  });
  write_file(dir / "bursts.csv", [&](std::ostream& out) {
    out << "electrode,trial,start,end,spikes,frequency\n";
    for (const auto& t : trials) {
      for (const auto& train : t.trains) {
        for (const auto& b : group_bursts(train, config.burst_gap).bursts) {
          out << train.label << ',' << t.trial << ',' << b.start << ',' << b.end << ','
              << b.spikes << ',' << format_g9(b.frequency) << '\n';
        }
      }
    }
  });

  std::size_t total = 0;
  for (const auto& t : trials) {
    for (const auto& train : t.trains) total += train.size();
  }
  log << total << " spikes over " << trials.size() << " trial(s)\n";
  return trials;
}

}  // namespace proteinoid
