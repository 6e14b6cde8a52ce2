#include "proteinoid/gates.hpp"

#include <algorithm>
#include <ostream>

#include "proteinoid/errors.hpp"

namespace proteinoid {

std::string_view gate_name(Gate gate) {
  switch (gate) {
    case Gate::kOr: return "OR";
    case Gate::kSelectY: return "SELECT-Y";
    case Gate::kXor: return "XOR";
    case Gate::kSelectX: return "SELECT-X";
    case Gate::kNotAnd: return "NOT-AND";
    case Gate::kAndNot: return "AND-NOT";
    case Gate::kAnd: return "AND";
    case Gate::kNone: return "NONE";
  }
  return "NONE";
}

std::string_view gate_column(Gate gate) {
  switch (gate) {
    case Gate::kOr: return "or";
    case Gate::kSelectY: return "sel_y";
    case Gate::kXor: return "xor";
    case Gate::kSelectX: return "sel_x";
    case Gate::kNotAnd: return "notand";
    case Gate::kAndNot: return "andnot";
    case Gate::kAnd: return "and";
    case Gate::kNone: return "none";
  }
  return "none";
}

Gate classify_gate(PresenceTriple t) {
  const unsigned code = (t.s01 ? 4u : 0u) | (t.s10 ? 2u : 0u) | (t.s11 ? 1u : 0u);
  switch (code) {
    case 0b111: return Gate::kOr;
    case 0b101: return Gate::kSelectY;
    case 0b110: return Gate::kXor;
    case 0b011: return Gate::kSelectX;
    case 0b100: return Gate::kNotAnd;
    case 0b010: return Gate::kAndNot;
    case 0b001: return Gate::kAnd;
    default: return Gate::kNone;
  }
}

bool evaluate(Gate gate, bool x, bool y) {
  switch (gate) {
    case Gate::kOr: return x || y;
    case Gate::kSelectY: return y;
    case Gate::kXor: return x != y;
    case Gate::kSelectX: return x;
    case Gate::kNotAnd: return !x && y;
    case Gate::kAndNot: return x && !y;
    case Gate::kAnd: return x && y;
    case Gate::kNone: return false;
  }
  return false;
}

void TrialSet::validate() const {
  const auto& ref = trains[0];
  for (const auto& trial : trains) {
    if (trial.size() != ref.size()) throw ConfigError("trials: electrode counts differ");
    for (std::size_t e = 0; e < ref.size(); ++e) {
      if (trial[e].label != ref[e].label) throw ConfigError("trials: electrode labels differ");
    }
  }
  if (duration < 0) throw ConfigError("trials: negative duration");
}

std::size_t GateCensus::electrode_total(std::size_t e) const {
  std::size_t sum = 0;
  for (const auto c : counts[e]) sum += c;
  return sum;
}

std::array<std::size_t, kGateKinds> GateCensus::gate_totals() const {
  std::array<std::size_t, kGateKinds> totals{};
  for (const auto& row : counts) {
    for (std::size_t g = 0; g < kGateKinds; ++g) totals[g] += row[g];
  }
  return totals;
}

std::size_t GateCensus::grand_total() const {
  std::size_t sum = 0;
  for (const auto c : gate_totals()) sum += c;
  return sum;
}

GateCensus mine_gates(const TrialSet& trials, const EventWindowConfig& events) {
  trials.validate();
  events.validate();

  GateCensus census;
  const std::size_t electrodes = trials.trains[0].size();
  for (std::size_t e = 0; e < electrodes; ++e) {
    const std::string& label = trials.trains[0][e].label;
    census.electrodes.push_back(label);
    census.counts.push_back({});

    const std::array<std::vector<std::int64_t>, 3> times = {
        trials.trains[0][e].times, trials.trains[1][e].times, trials.trains[2][e].times};
    for (const auto& w : simultaneity_groups(times, events)) {
      const PresenceTriple triple{w.has(0), w.has(1), w.has(2)};
      const Gate gate = classify_gate(triple);
      if (gate == Gate::kNone) continue;
      ++census.counts.back()[static_cast<std::size_t>(gate)];
      census.records.push_back({label, w.start, w.end, triple, gate});
    }
  }
  return census;
}

std::string_view circuit_name(Circuit circuit) {
  switch (circuit) {
    case Circuit::kHalfAdder: return "HALF-ADDER";
    case Circuit::kToffoli: return "TOFFOLI";
    case Circuit::kNone: return "";
  }
  return "";
}

Circuit name_circuit(Gate first, Gate second) {
  const auto is_select = [](Gate g) { return g == Gate::kSelectX || g == Gate::kSelectY; };
  if ((first == Gate::kAnd && second == Gate::kXor) ||
      (first == Gate::kXor && second == Gate::kAnd)) {
    return Circuit::kHalfAdder;
  }
  if ((is_select(first) && second == Gate::kXor) || (first == Gate::kXor && is_select(second))) {
    return Circuit::kToffoli;
  }
  return Circuit::kNone;
}

std::vector<TwoOutputGate> find_two_output_gates(std::span<const GateRecord> records,
                                                 const std::string& first,
                                                 const std::string& second,
                                                 std::int64_t slack) {
  std::vector<const GateRecord*> a, b;
  for (const auto& r : records) {
    if (r.electrode == first) a.push_back(&r);
    if (r.electrode == second) b.push_back(&r);
  }
  std::vector<TwoOutputGate> out;
  for (const auto* ra : a) {
    for (const auto* rb : b) {
      if (ra->start - slack > rb->end || rb->start > ra->end + slack) continue;
      out.push_back({first, second, std::min(ra->start, rb->start), std::max(ra->end, rb->end),
                     ra->gate, rb->gate, name_circuit(ra->gate, rb->gate)});
    }
  }
  return out;
}

void write_census_csv(std::ostream& out, const GateCensus& census) {
  out << "electrode";
  for (const auto g : kAllGates) out << ',' << gate_column(g);
  out << ",total\n";
  for (std::size_t e = 0; e < census.electrodes.size(); ++e) {
    out << census.electrodes[e];
    for (const auto c : census.counts[e]) out << ',' << c;
    out << ',' << census.electrode_total(e) << '\n';
  }
  out << "total";
  for (const auto c : census.gate_totals()) out << ',' << c;
  out << ',' << census.grand_total() << '\n';
}

void write_gate_records_csv(std::ostream& out, std::span<const GateRecord> records) {
  out << "electrode,start,end,s01,s10,s11,gate\n";
  for (const auto& r : records) {
    out << r.electrode << ',' << r.start << ',' << r.end << ',' << int{r.presence.s01} << ','
        << int{r.presence.s10} << ',' << int{r.presence.s11} << ',' << gate_name(r.gate) << '\n';
  }
}

void write_two_output_csv(std::ostream& out, std::span<const TwoOutputGate> pairs) {
  out << "first,second,start,end,first_gate,second_gate,circuit\n";
  for (const auto& p : pairs) {
    out << p.first << ',' << p.second << ',' << p.start << ',' << p.end << ','
        << gate_name(p.first_gate) << ',' << gate_name(p.second_gate) << ','
        << circuit_name(p.circuit) << '\n';
  }
}

}  // namespace proteinoid
