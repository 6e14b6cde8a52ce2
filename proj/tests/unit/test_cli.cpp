#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "proteinoid/ensemble.hpp"
#include "proteinoid/netpbm.hpp"

namespace fs = std::filesystem;
using namespace proteinoid;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / ("proteinoid_cli_" + std::string(info->name()) + "_" +
                                         std::to_string(::getpid()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = root_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(PROTEINOID_CLI) + " " + args + " > " +
                            (root_ / "stdout.txt").string() + " 2> " +
                            (root_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path root_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> read_report(const fs::path& p) {
  std::map<std::string, std::string> kv;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

std::vector<int> ints(const std::string& text) {
  std::istringstream in(text);
  std::vector<int> v;
  for (int x; in >> x;) v.push_back(x);
  return v;
}

// 100 x 96 grid: electrode E9 sits at (20, 58), E10 at (40, 58), E3 at (60, 19).
constexpr const char* kSmallGrid =
    "[ensemble]\ngrid_width = 100\ngrid_height = 96\n"
    "[run]\nduration = 3000\nsnapshot_cadence = 100\n";

}  // namespace

TEST_F(Cli, GenEnsembleMaskRoundTrips) {
  ASSERT_EQ(run("gen-ensemble --out " + (root_ / "out").string()), 0);
  const auto mask = netpbm::read_mask(root_ / "out/mask/mask.pbm");
  EXPECT_EQ(mask.width(), 1000);
  EXPECT_EQ(mask.height(), 960);
  EXPECT_EQ(mask, rasterize(generate_ensemble(EnsembleConfig{}), 1000, 960));
  EXPECT_TRUE(fs::exists(root_ / "out/config.effective.ini"));
  EXPECT_NE(slurp(root_ / "stdout.txt").find("conductive"), std::string::npos);
}

TEST_F(Cli, SeedChangesDiscList) {
  ASSERT_EQ(run("gen-ensemble --seed 1 --out " + (root_ / "a").string()), 0);
  ASSERT_EQ(run("gen-ensemble --seed 2 --out " + (root_ / "b").string()), 0);
  ASSERT_EQ(run("gen-ensemble --seed 1 --out " + (root_ / "c").string()), 0);
  EXPECT_NE(slurp(root_ / "a/mask/discs.csv"), slurp(root_ / "b/mask/discs.csv"));
  EXPECT_EQ(slurp(root_ / "a/mask/discs.csv"), slurp(root_ / "c/mask/discs.csv"));
}

TEST_F(Cli, NoCandidatesGivesEmptyMask) {
  const auto cfg = write("c.ini", "[ensemble]\ncandidate_count = 0\n");
  ASSERT_EQ(run("gen-ensemble --config " + cfg.string() + " --out " + (root_ / "o").string()),
            0);
  EXPECT_EQ(netpbm::read_mask(root_ / "o/mask/mask.pbm").conductive_count(), 0u);
}

TEST_F(Cli, SimulateSilentPairWritesZeroTracesAndFrames) {
  const auto cfg = write("c.ini", kSmallGrid);
  const fs::path out = root_ / "o";
  ASSERT_EQ(run("simulate --input 00 --config " + cfg.string() + " --out " + out.string()), 0);
  std::ifstream in(out / "traces/trial_00.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 13), "iteration,E1,");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line.substr(line.find(',') + 1));
    for (std::string cell; std::getline(cells, cell, ',');) ASSERT_EQ(cell, "0");
  }
  EXPECT_EQ(rows, 3000u);
  std::size_t frames = 0;
  for (const auto& e : fs::directory_iterator(out / "frames")) frames += e.is_regular_file();
  EXPECT_EQ(frames, 30u);
  EXPECT_TRUE(fs::exists(out / "frames/000003000.pgm"));
}

TEST_F(Cli, SimulateIsIdempotent) {
  const auto cfg = write("c.ini", kSmallGrid);
  ASSERT_EQ(run("simulate --config " + cfg.string() + " --out " + (root_ / "a").string()), 0);
  ASSERT_EQ(run("simulate --workers 2 --config " + cfg.string() + " --out " +
                (root_ / "b").string()),
            0);
  EXPECT_EQ(slurp(root_ / "a/traces/trial_11.csv"), slurp(root_ / "b/traces/trial_11.csv"));
  EXPECT_EQ(slurp(root_ / "a/frames/000001500.pgm"), slurp(root_ / "b/frames/000001500.pgm"));
  EXPECT_EQ(slurp(root_ / "a/config.effective.ini").substr(0, 40),
            slurp(root_ / "b/config.effective.ini").substr(0, 40));
}

TEST_F(Cli, MineGatesOnEmptyMaskCountsNothing) {
  const auto merged = write("m.ini",
                            "[ensemble]\ngrid_width = 100\ngrid_height = 96\ncandidate_count = 0\n"
                            "[run]\nduration = 3000\n");
  ASSERT_EQ(run("mine-gates --config " + merged.string() + " --out " + (root_ / "o").string()),
            0);
  std::ifstream in(root_ / "o/gates/census.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "electrode,or,sel_y,xor,sel_x,notand,andnot,and,total");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',')), ",0,0,0,0,0,0,0,0");
  }
  EXPECT_EQ(rows, 17u);
}

TEST_F(Cli, CorridorFromXElectrodeYieldsOnlyXGates) {
  // Conductive strip y in [56, 60], x in [14, 46] joins E9 to E10; E3 sits on
  // insulator, so the y stimulus reaches nothing.
  std::ostringstream pbm;
  pbm << "P1\n100 96\n";
  for (int y = 0; y < 96; ++y) {
    for (int x = 0; x < 100; ++x) pbm << ((y >= 56 && y <= 60 && x >= 14 && x <= 46) ? '1' : '0');
    pbm << '\n';
  }
  const auto image = write("corridor.pbm", pbm.str());
  const auto cfg = write("c.ini", "[ensemble]\nmask_image = " + image.string() +
                                      "\n[run]\nduration = 30000\nwrite_traces = true\n");
  ASSERT_EQ(run("mine-gates --config " + cfg.string() + " --out " + (root_ / "o").string()), 0)
      << slurp(root_ / "stderr.txt");

  std::ifstream in(root_ / "o/gates/census.csv");
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::vector<int>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    std::string rest = line.substr(comma + 1);
    for (auto& c : rest) c = c == ',' ? ' ' : c;
    rows[line.substr(0, comma)] = ints(rest);
  }
  ASSERT_EQ(rows.size(), 17u);
  for (const auto& [electrode, c] : rows) {
    ASSERT_EQ(c.size(), 8u);
    // Columns: or, sel_y, xor, sel_x, notand, andnot, and, total.
    EXPECT_EQ(c[0] + c[1] + c[2] + c[4] + c[6], 0) << electrode;
  }
  EXPECT_GE(rows["E10"][3] + rows["E10"][5], 1);
  EXPECT_GE(rows["E9"][3] + rows["E9"][5], 1);
  EXPECT_EQ(rows["E1"][7], 0);
}

TEST_F(Cli, ReplayedMappingMetricsMatchBreadthFirstSearch) {
  std::mt19937_64 rng(314);
  std::vector<std::uint32_t> image(16);
  std::ostringstream csv;
  csv << "input_bits,output_bits\n";
  const auto bits = [](std::uint32_t v) {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[i] = ((v >> i) & 1) ? '1' : '0';
    return s;
  };
  for (std::uint32_t s = 0; s < 16; ++s) {
    image[s] = static_cast<std::uint32_t>(rng() % 16);
    csv << bits(s) << ',' << bits(image[s]) << '\n';
  }
  const auto replay = write("e.csv", csv.str());
  ASSERT_EQ(run("map --replay " + replay.string() + " --out " + (root_ / "o").string()), 0)
      << slurp(root_ / "stderr.txt");

  const auto report = read_report(root_ / "o/mapping/graph_metrics.txt");
  std::vector<std::vector<std::uint32_t>> out(16);
  for (std::uint32_t v = 0; v < 16; ++v) out[v] = {image[v]};
  std::vector<int> ecc;
  for (std::uint32_t s = 0; s < 16; ++s) {
    const auto d = oracle::bfs(out, s);
    EXPECT_EQ(ints(report.at("distance." + bits(s))), d);
    ecc.push_back(*std::max_element(d.begin(), d.end()));
  }
  EXPECT_EQ(ints(report.at("eccentricity")), ecc);
  EXPECT_EQ(std::stoi(report.at("radius")), *std::min_element(ecc.begin(), ecc.end()));
  EXPECT_EQ(std::stoi(report.at("diameter")), *std::max_element(ecc.begin(), ecc.end()));
  EXPECT_EQ(slurp(root_ / "o/mapping/mapping.csv"), csv.str());
  EXPECT_TRUE(fs::exists(root_ / "o/mapping/graph.dot"));
  EXPECT_TRUE(fs::exists(root_ / "o/mapping/bool_metrics.csv"));
}

TEST_F(Cli, MapOnEmptyMaskIsConstant) {
  const auto cfg = write("c.ini",
                         "[ensemble]\ngrid_width = 60\ngrid_height = 60\ncandidate_count = 0\n"
                         "[mapping]\ninputs = E6 E7\noutputs = E1 E4\nduration = 2000\n");
  ASSERT_EQ(run("map --config " + cfg.string() + " --out " + (root_ / "o").string()), 0)
      << slurp(root_ / "stderr.txt");
  EXPECT_EQ(slurp(root_ / "o/mapping/mapping.csv"),
            "input_bits,output_bits\n00,00\n10,00\n01,00\n11,00\n");
  std::ifstream in(root_ / "o/mapping/bool_metrics.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',') + 1, 2), "0,");  // weight 0
  }
  EXPECT_EQ(rows, 2);
}

TEST_F(Cli, AnalyzeSavedTraces) {
  const auto traces = write("t.csv", [] {
    std::ostringstream s;
    s << "iteration,E1\n";
    for (int i = 1; i <= 6000; ++i) s << i << ',' << ((i % 1000 >= 500 && i % 1000 < 520 && i > 1000) ? 3 : 0) << '\n';
    return s.str();
  }());
  ASSERT_EQ(run("analyze-spikes --traces " + traces.string() + " --out " + (root_ / "o").string()),
            0)
      << slurp(root_ / "stderr.txt");
  EXPECT_EQ(slurp(root_ / "o/spikes/spikes.csv"),
            "electrode,trial,iteration\nE1,t,1500\nE1,t,2500\nE1,t,3500\nE1,t,4500\nE1,t,5500\n");
  EXPECT_TRUE(fs::exists(root_ / "o/spikes/summary.csv"));
  EXPECT_TRUE(fs::exists(root_ / "o/spikes/bursts.csv"));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("simulate --input 21"), 2);
  EXPECT_EQ(run("gen-ensemble --config " + write("bad.ini", "[fhn]\ndt = 1\n").string()), 2);
  EXPECT_EQ(run("gen-ensemble --config " + write("bad2.ini", "[fhn]\nsurprise = 1\n").string()),
            2);
  EXPECT_EQ(run("map --replay " + write("bad.csv", "input_bits,output_bits\n0,1\n").string() +
                " --out " + (root_ / "r").string()),
            1);
  const auto blow = write("blow.ini",
                          "[ensemble]\ngrid_width = 60\ngrid_height = 60\n"
                          "[stimulus]\namplitude = 1e200\n[run]\nduration = 2000\n");
  EXPECT_EQ(run("simulate --config " + blow.string() + " --out " + (root_ / "b").string()), 3);
}
