#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proteinoid/spikes.hpp"

namespace proteinoid {

/// Two-input gates recognisable from spike presence under inputs
/// (0,1), (1,0) and (1,1). Declaration order is the census column order.
enum class Gate : std::uint8_t {
  kOr,       // x + y
  kSelectY,  // y
  kXor,      // x ^ y
  kSelectX,  // x
  kNotAnd,   // !x y
  kAndNot,   // x !y
  kAnd,      // x y
  kNone,
};

inline constexpr std::size_t kGateKinds = 7;
inline constexpr std::array<Gate, kGateKinds> kAllGates = {
    Gate::kOr,     Gate::kSelectY, Gate::kXor, Gate::kSelectX,
    Gate::kNotAnd, Gate::kAndNot,  Gate::kAnd};

/// "OR", "SELECT-Y", "XOR", "SELECT-X", "NOT-AND", "AND-NOT", "AND", "NONE".
std::string_view gate_name(Gate gate);
/// Census column keys: or, sel_y, xor, sel_x, notand, andnot, and.
std::string_view gate_column(Gate gate);

/// Spike presence in the (0,1), (1,0) and (1,1) trials.
struct PresenceTriple {
  bool s01 = false;
  bool s10 = false;
  bool s11 = false;

  friend bool operator==(const PresenceTriple&, const PresenceTriple&) = default;
};

Gate classify_gate(PresenceTriple triple);

/// Truth value of the gate; every gate maps (0,0) to 0.
bool evaluate(Gate gate, bool x, bool y);

/// Trains for the (0,1), (1,0), (1,1) stimulations in that order, each with
/// one SpikeTrain per electrode.
struct TrialSet {
  std::array<std::vector<SpikeTrain>, 3> trains;
  std::int64_t duration = 0;

  /// Same electrode labels in the same order in every trial. Throws ConfigError.
  void validate() const;
};

struct GateRecord {
  std::string electrode;
  std::int64_t start = 0;
  std::int64_t end = 0;
  PresenceTriple presence;
  Gate gate = Gate::kNone;
};

struct GateCensus {
  std::vector<std::string> electrodes;
  std::vector<std::array<std::size_t, kGateKinds>> counts;  // per electrode
  std::vector<GateRecord> records;                          // electrode-major, time order

  std::size_t electrode_total(std::size_t e) const;
  std::array<std::size_t, kGateKinds> gate_totals() const;
  std::size_t grand_total() const;
  std::size_t count(std::size_t e, Gate gate) const {
    return counts[e][static_cast<std::size_t>(gate)];
  }
};

/// One gate per event window per electrode.
GateCensus mine_gates(const TrialSet& trials, const EventWindowConfig& events = {});

enum class Circuit { kNone, kHalfAdder, kToffoli };
std::string_view circuit_name(Circuit circuit);
/// (AND, XOR) is a half adder; (SELECT-X or SELECT-Y, XOR) a Toffoli gate.
Circuit name_circuit(Gate first, Gate second);

struct TwoOutputGate {
  std::string first;
  std::string second;
  std::int64_t start = 0;  // union of the two windows
  std::int64_t end = 0;
  Gate first_gate = Gate::kNone;
  Gate second_gate = Gate::kNone;
  Circuit circuit = Circuit::kNone;
};

/// Pairs every window at `first` with every window at `second` that overlaps
/// it once widened by `slack` iterations on both sides.
std::vector<TwoOutputGate> find_two_output_gates(std::span<const GateRecord> records,
                                                 const std::string& first,
                                                 const std::string& second,
                                                 std::int64_t slack = 200);

/// Rows per electrode, columns or,sel_y,xor,sel_x,notand,andnot,and,total,
/// followed by a `total` row.
void write_census_csv(std::ostream& out, const GateCensus& census);
void write_gate_records_csv(std::ostream& out, std::span<const GateRecord> records);
void write_two_output_csv(std::ostream& out, std::span<const TwoOutputGate> pairs);

}  // namespace proteinoid
