#include "proteinoid/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "format.hpp"
#include "proteinoid/errors.hpp"

namespace proteinoid {

namespace {

struct Field {
  const char* section;
  const char* key;
  const char* comment;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("expected an integer, got '" + text + "'");
  }
  return value;
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("expected true/false, got '" + text + "'");
}

std::vector<std::string> parse_words(const std::string& text) {
  std::istringstream s(text);
  std::vector<std::string> words;
  for (std::string w; s >> w;) words.push_back(w);
  return words;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::vector<GridPoint> parse_points(const std::string& text) {
  std::vector<GridPoint> points;
  for (const auto& w : parse_words(text)) {
    const auto colon = w.find(':');
    if (colon == std::string::npos) throw ConfigError("electrode centre must be x:y, got " + w);
    points.push_back({parse_integer<int>(w.substr(0, colon)),
                      parse_integer<int>(w.substr(colon + 1))});
  }
  return points;
}

std::string join_points(const std::vector<GridPoint>& points) {
  std::string out;
  for (const auto& p : points) {
    if (!out.empty()) out += ' ';
    out += std::to_string(p.x) + ':' + std::to_string(p.y);
  }
  return out;
}

#define PROTEINOID_INT_FIELD(sec, name, member, type, doc)                                   \
  Field {                                                                                    \
    sec, name, doc, [](const RunConfig& c) { return std::to_string(c.member); },              \
        [](RunConfig& c, const std::string& v) { c.member = parse_integer<type>(v); }        \
  }
#define PROTEINOID_REAL_FIELD(sec, name, member, doc)                                        \
  Field {                                                                                    \
    sec, name, doc, [](const RunConfig& c) { return format_exact(c.member); },                \
        [](RunConfig& c, const std::string& v) { c.member = parse_double(v); }               \
  }
#define PROTEINOID_BOOL_FIELD(sec, name, member, doc)                                        \
  Field {                                                                                    \
    sec, name, doc,                                                                          \
        [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); },         \
        [](RunConfig& c, const std::string& v) { c.member = parse_bool(v); }                 \
  }
#define PROTEINOID_STRING_FIELD(sec, name, member, doc)                                      \
  Field {                                                                                    \
    sec, name, doc, [](const RunConfig& c) { return std::string(c.member); },                 \
        [](RunConfig& c, const std::string& v) { c.member = trim(v); }                       \
  }
#define PROTEINOID_WORDS_FIELD(sec, name, member, doc)                                       \
  Field {                                                                                    \
    sec, name, doc, [](const RunConfig& c) { return join_words(c.member); },                  \
        [](RunConfig& c, const std::string& v) { c.member = parse_words(v); }                \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      PROTEINOID_INT_FIELD("ensemble", "grid_width", ensemble.grid_width, int, "nodes"),
      PROTEINOID_INT_FIELD("ensemble", "grid_height", ensemble.grid_height, int, "nodes"),
      PROTEINOID_INT_FIELD("ensemble", "disc_diameter", ensemble.disc_diameter, int,
                           "odd, nodes"),
      PROTEINOID_INT_FIELD("ensemble", "candidate_count", ensemble.candidate_count, std::int64_t,
                           "uniform candidate centres before thinning"),
      PROTEINOID_REAL_FIELD("ensemble", "density_scale", ensemble.density_scale,
                            "acceptance exp(-d / density_scale), d from grid centre"),
      PROTEINOID_INT_FIELD("ensemble", "seed", ensemble.rng_seed, std::uint64_t,
                           "std::mt19937_64 seed"),
      PROTEINOID_STRING_FIELD("ensemble", "mask_image", mask_image,
                              "optional Netpbm image; black (<20 in r, g, b) is conductive"),

      PROTEINOID_REAL_FIELD("fhn", "a", fhn.a, "threshold"),
      PROTEINOID_REAL_FIELD("fhn", "b", fhn.b, "recovery rate"),
      PROTEINOID_REAL_FIELD("fhn", "c1", fhn.c1, nullptr),
      PROTEINOID_REAL_FIELD("fhn", "c2", fhn.c2, "excitability"),
      PROTEINOID_REAL_FIELD("fhn", "du", fhn.du, "conductance"),
      PROTEINOID_REAL_FIELD("fhn", "dt", fhn.dt, "time step"),
      PROTEINOID_REAL_FIELD("fhn", "dx", fhn.dx, "grid spacing"),

      PROTEINOID_INT_FIELD("electrodes", "rows", electrode_rows, int, nullptr),
      PROTEINOID_INT_FIELD("electrodes", "cols", electrode_cols, int,
                           "lattice spans 20%..80% of the grid, labels row-major"),
      Field{"electrodes", "centers", "explicit x:y list, labelled E1..En; overrides rows/cols",
            [](const RunConfig& c) { return join_points(c.electrode_centers); },
            [](RunConfig& c, const std::string& v) { c.electrode_centers = parse_points(v); }},
      PROTEINOID_REAL_FIELD("electrodes", "sensing_radius", sensing_radius,
                            "nodes strictly closer than this are summed"),

      PROTEINOID_REAL_FIELD("stimulus", "amplitude", stimulus.amplitude, "current I"),
      PROTEINOID_REAL_FIELD("stimulus", "radius", stimulus.radius, "closed disc, nodes"),
      PROTEINOID_INT_FIELD("stimulus", "duration", stimulus.duration, std::int64_t,
                           "iterations"),
      PROTEINOID_INT_FIELD("stimulus", "onset", stimulus.onset, std::int64_t,
                           "first stimulated iteration; the quiet lead-in is the detector baseline"),
      PROTEINOID_STRING_FIELD("stimulus", "x_electrode", x_electrode, "carries input x"),
      PROTEINOID_STRING_FIELD("stimulus", "y_electrode", y_electrode, "carries input y"),

      Field{"detector", "mode", "baseline_sigma | absolute",
            [](const RunConfig& c) {
              return std::string(c.detector.mode == ThresholdMode::kAbsolute ? "absolute"
                                                                             : "baseline_sigma");
            },
            [](RunConfig& c, const std::string& v) {
              const std::string t = trim(v);
              if (t == "absolute") {
                c.detector.mode = ThresholdMode::kAbsolute;
              } else if (t == "baseline_sigma") {
                c.detector.mode = ThresholdMode::kBaselineSigma;
              } else {
                throw ConfigError("detector mode must be baseline_sigma or absolute");
              }
            }},
      PROTEINOID_REAL_FIELD("detector", "k", detector.k, "sigmas above the baseline mean"),
      PROTEINOID_INT_FIELD("detector", "baseline_window", detector.baseline_window, std::size_t,
                           "leading samples"),
      PROTEINOID_REAL_FIELD("detector", "min_excursion", detector.min_excursion,
                            "floor on the height above the baseline mean"),
      PROTEINOID_REAL_FIELD("detector", "absolute_threshold", detector.absolute_threshold,
                            "used in absolute mode"),
      PROTEINOID_INT_FIELD("detector", "refractory", detector.refractory, std::int64_t,
                           "iterations"),

      PROTEINOID_INT_FIELD("events", "window", events.window, std::int64_t,
                           "spikes closer than this are simultaneous"),
      PROTEINOID_INT_FIELD("events", "separation", events.separation, std::int64_t,
                           "spikes further apart than this are separate events"),
      Field{"events", "gap_policy", "merge | split, for gaps between window and separation",
            [](const RunConfig& c) {
              return std::string(c.events.gap_policy == GapPolicy::kSplit ? "split" : "merge");
            },
            [](RunConfig& c, const std::string& v) {
              const std::string t = trim(v);
              if (t == "merge") {
                c.events.gap_policy = GapPolicy::kMergeEarlier;
              } else if (t == "split") {
                c.events.gap_policy = GapPolicy::kSplit;
              } else {
                throw ConfigError("events gap_policy must be merge or split");
              }
            }},
      PROTEINOID_INT_FIELD("events", "pair_slack", pair_slack, std::int64_t,
                           "two-output gates: windows overlap after widening by this much"),

      PROTEINOID_INT_FIELD("spikes", "burst_gap", burst_gap, std::int64_t,
                           "largest intra-burst interval"),
      PROTEINOID_INT_FIELD("spikes", "isi_max_lag", isi_max_lag, std::size_t,
                           "serial correlation lags 1..n"),

      PROTEINOID_WORDS_FIELD("mapping", "inputs", mapping_inputs, "electrode i carries bit i"),
      PROTEINOID_WORDS_FIELD("mapping", "outputs", mapping_outputs, "electrode j yields bit j"),
      PROTEINOID_BOOL_FIELD("mapping", "allow_shared", mapping_allow_shared, nullptr),
      PROTEINOID_INT_FIELD("mapping", "duration", mapping_duration, std::int64_t,
                           "iterations per input string"),
      PROTEINOID_INT_FIELD("mapping", "response_delay", mapping_response_delay, std::int64_t,
                           "window opens this long after stimulus onset"),
      PROTEINOID_INT_FIELD("mapping", "response_length", mapping_response_length, std::int64_t,
                           "0 = until the end of the trial"),
      PROTEINOID_INT_FIELD("mapping", "samples", mapping_samples, std::size_t,
                           "0 = all 2^k inputs; otherwise a seeded random subset"),

      PROTEINOID_INT_FIELD("run", "duration", duration, std::int64_t, "iterations per trial"),
      PROTEINOID_INT_FIELD("run", "sampling_cadence", sampling_cadence, std::int64_t,
                           "electrode sampling period"),
      PROTEINOID_INT_FIELD("run", "snapshot_cadence", snapshot_cadence, std::int64_t,
                           "frame period; 0 disables"),
      PROTEINOID_REAL_FIELD("run", "snapshot_threshold", snapshot_threshold,
                            "sites with u above this are drawn"),
      PROTEINOID_BOOL_FIELD("run", "write_traces", write_traces,
                            "mine-gates also saves its traces"),
      PROTEINOID_INT_FIELD("run", "workers", workers, unsigned, "threads"),
      PROTEINOID_STRING_FIELD("run", "out_dir", out_dir, nullptr),
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  if (mask_image.empty()) ensemble.validate();
  fhn.validate();
  stimulus.validate();
  detector.validate();
  events.validate();
  if (pair_slack < 0) throw ConfigError("events: pair_slack must be >= 0");
  if (burst_gap < 0) throw ConfigError("spikes: burst_gap must be >= 0");
  if (duration < 0) throw ConfigError("run: duration must be >= 0");
  if (sampling_cadence < 1) throw ConfigError("run: sampling_cadence must be >= 1");
  if (snapshot_cadence < 0) throw ConfigError("run: snapshot_cadence must be >= 0");
  if (workers < 1) throw ConfigError("run: workers must be >= 1");
  if (electrode_centers.empty() && (electrode_rows < 1 || electrode_cols < 1)) {
    throw ConfigError("electrodes: rows and cols must be >= 1");
  }
  if (mask_image.empty()) {
    const ElectrodeArray array = electrode_array();
    array.validate(ensemble.grid_width, ensemble.grid_height);
    array.at(x_electrode);
    array.at(y_electrode);
  }
}

int RunConfig::grid_width() const { return ensemble.grid_width; }
int RunConfig::grid_height() const { return ensemble.grid_height; }

ElectrodeArray RunConfig::electrode_array() const {
  ElectrodeArray array =
      electrode_centers.empty()
          ? ElectrodeArray::grid_layout(ensemble.grid_width, ensemble.grid_height, electrode_rows,
                                        electrode_cols)
          : ElectrodeArray::from_centers(electrode_centers);
  array.sensing_radius = sensing_radius;
  return array;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  RunConfig config;
  std::set<std::string> known_sections;
  for (const auto& f : fields()) known_sections.insert(f.section);
  for (const auto& [section, keys] : tree) {
    if (!known_sections.count(section)) {
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : keys) {
      const Field* match = nullptr;
      for (const auto& f : fields()) {
        if (section == f.section && key == f.key) match = &f;
      }
      if (!match) throw ConfigError("config: unknown key " + section + "." + key);
      try {
        match->set(config, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError("config: " + section + "." + key + ": " + e.what());
      }
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& config) {
  out << "# proteinoid run configuration\n";
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      section = f.section;
      out << "\n[" << section << "]\n";
    }
    if (f.comment) out << "# " << f.comment << '\n';
    out << f.key << " = " << f.get(config) << '\n';
  }
}

std::string to_string(const RunConfig& config) {
  std::ostringstream s;
  write_config(s, config);
  return s.str();
}

std::uint64_t config_hash(const RunConfig& config) {
  RunConfig canonical = config;
  canonical.out_dir.clear();
  canonical.workers = 1;
  return fnv1a64(to_string(canonical));
}

}  // namespace proteinoid
