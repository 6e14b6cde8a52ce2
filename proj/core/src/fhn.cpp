#include "proteinoid/fhn.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#if defined(__SSE2__)
#include <immintrin.h>
#endif

#include "proteinoid/errors.hpp"

namespace proteinoid {

IntegrationError::IntegrationError(int x, int y, std::int64_t iteration)
    : std::runtime_error("integration blow-up: non-finite value at node (" + std::to_string(x) +
                         ", " + std::to_string(y) + ") producing iteration " +
                         std::to_string(iteration)),
      x_(x),
      y_(y),
      iteration_(iteration) {}

void FhnParams::validate() const {
  const std::pair<const char*, double> fields[] = {{"a", a},   {"b", b},   {"c1", c1}, {"c2", c2},
                                                   {"du", du}, {"dt", dt}, {"dx", dx}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ConfigError(std::string("fhn: ") + name + " must be positive and finite");
    }
  }
  if (!(stability_number() < 1.0)) {
    throw ConfigError("fhn: explicit Euler unstable, dt*Du*4/dx^2 = " +
                      std::to_string(stability_number()) + " must be < 1");
  }
}

Lattice::Lattice(ConductiveMask mask)
    : mask_(std::move(mask)),
      index_(static_cast<std::size_t>(mask_.width()) * mask_.height(), -1) {
  const int w = mask_.width();
  const int h = mask_.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask_.at(x, y)) continue;
      index_[static_cast<std::size_t>(y) * w + x] = static_cast<std::int32_t>(points_.size());
      points_.push_back({x, y});
    }
  }
  neighbors_.reserve(points_.size());
  degree_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto self = static_cast<std::int32_t>(i);
    const auto [x, y] = points_[i];
    std::uint8_t degree = 0;
    const auto pick = [&](int nx, int ny) {
      const std::int32_t j = index_of(nx, ny);
      if (j < 0) return self;
      ++degree;
      return j;
    };
    neighbors_.push_back({pick(x - 1, y), pick(x + 1, y), pick(x, y - 1), pick(x, y + 1)});
    degree_.push_back(degree);
  }
}

namespace {

struct Coefficients {
  double a, b, c1, c2, du, dt, dt_b, inv_dx2;

  explicit Coefficients(const FhnParams& p)
      : a(p.a),
        b(p.b),
        c1(p.c1),
        c2(p.c2),
        du(p.du),
        dt(p.dt),
        dt_b(p.dt * p.b),
        inv_dx2(1.0 / (p.dx * p.dx)) {}
};

// Shared by every code path so all of them round identically. `sum` is the
// sum of the conductive neighbours, west+east then north+south.
inline void update(const Coefficients& k, double uu, double vv, double sum, double degree,
                   double current, double& u_out, double& v_out) {
  const double lap = (sum - degree * uu) * k.inv_dx2;
  const double rate = k.c1 * uu * (uu - k.a) * (1.0 - uu) - k.c2 * uu * vv + current + k.du * lap;
  u_out = uu + k.dt * rate;
  v_out = vv + k.dt_b * (uu - vv);
}

inline bool finite(double x) { return std::fabs(x) <= DBL_MAX; }

// Subnormals only appear in the far diffusion tail ahead of a wave, where
// they are physically zero but cost a microcode assist per operation.
class FlushDenormals {
 public:
#if defined(__SSE2__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

struct CompiledEntry {
  std::vector<std::int32_t> nodes;
  double current;
  std::int64_t start;
  std::int64_t end;

  bool active(std::int64_t t) const noexcept { return start <= t && t < end; }
};

std::vector<CompiledEntry> compile(const Lattice& lattice, const StimulusSchedule& schedule) {
  std::vector<CompiledEntry> out;
  out.reserve(schedule.entries.size());
  for (const auto& e : schedule.entries) {
    if (e.start > e.end) throw ConfigError("stimulus: start must not exceed end");
    if (!std::isfinite(e.current)) throw ConfigError("stimulus: current must be finite");
    CompiledEntry c{{}, e.current, e.start, e.end};
    for (const auto& p : e.nodes) {
      const std::int32_t i = lattice.index_of(p.x, p.y);
      if (i < 0) {
        throw ConfigError("stimulus: node (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") is not conductive");
      }
      c.nodes.push_back(i);
    }
    std::sort(c.nodes.begin(), c.nodes.end());
    c.nodes.erase(std::unique(c.nodes.begin(), c.nodes.end()), c.nodes.end());
    out.push_back(std::move(c));
  }
  return out;
}

/// Summed current per stimulated node, ascending node order.
std::vector<std::pair<std::int32_t, double>> active_currents(
    std::span<const CompiledEntry> entries, std::int64_t t) {
  std::vector<std::pair<std::int32_t, double>> out;
  for (const auto& e : entries) {
    if (!e.active(t)) continue;
    for (const auto i : e.nodes) out.emplace_back(i, 0.0);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& e : entries) {
    if (!e.active(t)) continue;
    for (const auto i : e.nodes) {
      auto it = std::lower_bound(out.begin(), out.end(), std::make_pair(i, 0.0));
      it->second += e.current;
    }
  }
  return out;
}

[[noreturn]] void report_failure(const Lattice& lattice, std::size_t node, std::int64_t t) {
  const GridPoint p = lattice.point(node);
  throw IntegrationError(p.x, p.y, t + 1);
}

// Padded row cells [first, last]; the row has zero cells at both ends. `keep` is
// all ones on conductive cells and zero elsewhere, so non-conductive cells
// are written as exact zeros. Returns nonzero when some output is not finite.
__attribute__((target_clones("avx2", "default"))) std::uint64_t euler_row(
    const Coefficients& k, const double* __restrict up, const double* __restrict uc,
    const double* __restrict ud, const double* __restrict vc, const double* __restrict degree,
    const std::uint64_t* __restrict keep, double* __restrict u_out, double* __restrict v_out,
    int first, int last) {
  constexpr std::uint64_t kExponent = 0x7ff0000000000000ull;
  std::uint64_t bad = 0;
  for (int x = first; x <= last; ++x) {
    double un;
    double vn;
    update(k, uc[x], vc[x], (uc[x - 1] + uc[x + 1]) + (up[x] + ud[x]), degree[x], 0.0, un, vn);
    const std::uint64_t ub = std::bit_cast<std::uint64_t>(un) & keep[x];
    const std::uint64_t vb = std::bit_cast<std::uint64_t>(vn) & keep[x];
    bad |= static_cast<std::uint64_t>((ub & kExponent) == kExponent) |
           static_cast<std::uint64_t>((vb & kExponent) == kExponent);
    u_out[x] = std::bit_cast<double>(ub);
    v_out[x] = std::bit_cast<double>(vb);
  }
  return bad;
}

}  // namespace

std::vector<double> masked_laplacian(const Lattice& lattice, std::span<const double> field,
                                     double dx) {
  if (field.size() != lattice.size()) throw ConfigError("laplacian: field size mismatch");
  const double inv_dx2 = 1.0 / (dx * dx);
  const auto nb = lattice.neighbors();
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto self = static_cast<std::int32_t>(i);
    const auto at = [&](std::int32_t j) { return j == self ? 0.0 : field[j]; };
    const double sum = (at(nb[i].west) + at(nb[i].east)) + (at(nb[i].north) + at(nb[i].south));
    out[i] = (sum - lattice.degree(i) * field[i]) * inv_dx2;
  }
  return out;
}

FieldState step(const Lattice& lattice, const FieldState& state, const FhnParams& params,
                const StimulusSchedule& schedule) {
  const std::size_t n = lattice.size();
  if (state.u.size() != n || state.v.size() != n) {
    throw ConfigError("step: state size does not match lattice");
  }
  params.validate();
  const auto entries = compile(lattice, schedule);
  std::vector<double> current(n, 0.0);
  for (const auto& [i, c] : active_currents(entries, state.t)) current[i] = c;

  FlushDenormals flush;
  const Coefficients k(params);
  const auto nb = lattice.neighbors();
  const double* u = state.u.data();
  FieldState next{std::vector<double>(n), std::vector<double>(n), state.t + 1};
  for (std::size_t i = 0; i < n; ++i) {
    const auto self = static_cast<std::int32_t>(i);
    const auto at = [&](std::int32_t j) { return j == self ? 0.0 : u[j]; };
    const double sum = (at(nb[i].west) + at(nb[i].east)) + (at(nb[i].north) + at(nb[i].south));
    update(k, u[i], state.v[i], sum, lattice.degree(i), current[i], next.u[i], next.v[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!finite(next.u[i]) || !finite(next.v[i])) report_failure(lattice, i, state.t);
  }
  return next;
}

struct Simulation::Impl {
  Lattice lattice;
  FhnParams params;
  Coefficients coefficients;
  std::vector<CompiledEntry> entries;
  std::vector<char> active;
  std::vector<std::pair<std::int32_t, double>> currents;  // compact node, current

  // Padded grid: (width + 2) x (height + 2), row-major, zero border.
  int stride;
  std::vector<std::size_t> cell;  // compact node -> padded cell
  std::vector<double> degree;
  std::vector<std::uint64_t> keep;
  // A connected component whose nodes are all zero and unstimulated stays
  // exactly zero, so only cells of live components are swept.
  std::vector<std::int32_t> component;
  std::vector<char> live;
  struct Span {
    std::size_t base;  // padded row offset
    int first;
    int last;
  };
  std::vector<Span> spans;
  std::vector<double> u, v, u_next, v_next;
  std::int64_t t = 0;

  unsigned workers;
  std::vector<std::size_t> bounds;  // into spans
  std::vector<std::uint64_t> failures;
  std::barrier<> start_gate;
  std::barrier<> done_gate;
  std::atomic<bool> stopping{false};
  std::vector<std::jthread> team;

  Impl(ConductiveMask mask, const FhnParams& p, const StimulusSchedule& schedule, unsigned w)
      : lattice(std::move(mask)),
        params(p),
        coefficients(p),
        entries(compile(lattice, schedule)),
        active(entries.size(), 0),
        stride(lattice.width() + 2),
        workers(std::max(1u, std::min<unsigned>(w, std::max(1, lattice.height())))),
        failures(workers, 0),
        start_gate(workers),
        done_gate(workers) {
    params.validate();
    const std::size_t cells = static_cast<std::size_t>(stride) * (lattice.height() + 2);
    degree.assign(cells, 0.0);
    keep.assign(cells, 0);
    u.assign(cells, 0.0);
    v.assign(cells, 0.0);
    u_next.assign(cells, 0.0);
    v_next.assign(cells, 0.0);
    cell.reserve(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const GridPoint q = lattice.point(i);
      cell.push_back(static_cast<std::size_t>(q.y + 1) * stride + (q.x + 1));
      degree[cell.back()] = lattice.degree(i);
      keep[cell.back()] = ~std::uint64_t{0};
    }
    label_components();
    for (const auto& e : entries) {
      for (const auto i : e.nodes) live[component[i]] = 1;
    }
    build_spans();
    refresh_currents(true);
    for (unsigned i = 1; i < workers; ++i) {
      team.emplace_back([this, i] {
        FlushDenormals flush;
        for (;;) {
          start_gate.arrive_and_wait();
          if (stopping.load(std::memory_order_relaxed)) return;
          failures[i] = chunk(i);
          done_gate.arrive_and_wait();
        }
      });
    }
  }

  ~Impl() {
    if (!team.empty()) {
      stopping.store(true, std::memory_order_relaxed);
      start_gate.arrive_and_wait();
    }
  }

  void label_components() {
    component.assign(lattice.size(), -1);
    std::int32_t count = 0;
    std::vector<std::int32_t> stack;
    const auto nb = lattice.neighbors();
    for (std::size_t s = 0; s < lattice.size(); ++s) {
      if (component[s] >= 0) continue;
      component[s] = count;
      stack.push_back(static_cast<std::int32_t>(s));
      while (!stack.empty()) {
        const std::int32_t i = stack.back();
        stack.pop_back();
        for (const std::int32_t j : {nb[i].west, nb[i].east, nb[i].north, nb[i].south}) {
          if (component[j] < 0) {
            component[j] = count;
            stack.push_back(j);
          }
        }
      }
      ++count;
    }
    live.assign(static_cast<std::size_t>(count), 0);
  }

  // Row spans covering live cells; short gaps are swept too, since cells
  // there are empty or dead and evaluate to exact zeros.
  void build_spans() {
    constexpr int kMergeGap = 16;
    spans.clear();
    std::vector<std::size_t> weight;
    for (std::size_t i = 0; i < cell.size(); ++i) {
      if (!live[component[i]]) continue;
      const std::size_t c = cell[i];
      const std::size_t base = c - c % stride;
      const int x = static_cast<int>(c - base);
      if (!spans.empty() && spans.back().base == base && x - spans.back().last <= kMergeGap) {
        spans.back().last = x;
      } else {
        spans.push_back({base, x, x});
      }
    }
    // Contiguous chunks of roughly equal cell count.
    std::size_t total = 0;
    for (const auto& sp : spans) total += static_cast<std::size_t>(sp.last - sp.first + 1);
    bounds.assign(1, 0);
    std::size_t acc = 0;
    for (std::size_t k = 0; k < spans.size() && bounds.size() < workers; ++k) {
      acc += static_cast<std::size_t>(spans[k].last - spans[k].first + 1);
      if (acc * workers >= total * bounds.size()) bounds.push_back(k + 1);
    }
    while (bounds.size() <= workers) bounds.push_back(spans.size());
    bounds.back() = spans.size();
  }

  std::uint64_t chunk(unsigned i) {
    std::uint64_t bad = 0;
    for (std::size_t k = bounds[i]; k < bounds[i + 1]; ++k) {
      const std::size_t base = spans[k].base;
      bad |= euler_row(coefficients, u.data() + base - stride, u.data() + base,
                       u.data() + base + stride, v.data() + base, degree.data() + base,
                       keep.data() + base, u_next.data() + base, v_next.data() + base,
                       spans[k].first, spans[k].last);
    }
    return bad;
  }

  void refresh_currents(bool force) {
    bool changed = force;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const char now = entries[e].active(t) ? 1 : 0;
      if (now != active[e]) {
        active[e] = now;
        changed = true;
      }
    }
    if (changed) currents = active_currents(entries, t);
  }

  // Stimulated nodes are recomputed with their current after the sweep.
  std::uint64_t apply_currents() {
    std::uint64_t bad = 0;
    for (const auto& [i, current] : currents) {
      const std::size_t c = cell[i];
      const double sum = (u[c - 1] + u[c + 1]) + (u[c - stride] + u[c + stride]);
      update(coefficients, u[c], v[c], sum, degree[c], current, u_next[c], v_next[c]);
      bad |= static_cast<unsigned>(!finite(u_next[c]) || !finite(v_next[c]));
    }
    return bad;
  }

  void step() {
    FlushDenormals flush;
    refresh_currents(false);
    if (workers == 1) {
      failures[0] = chunk(0);
    } else {
      start_gate.arrive_and_wait();
      failures[0] = chunk(0);
      done_gate.arrive_and_wait();
    }
    std::uint64_t bad = apply_currents();
    for (const auto f : failures) bad |= f;
    if (bad) {
      for (std::size_t i = 0; i < cell.size(); ++i) {
        if (!finite(u_next[cell[i]]) || !finite(v_next[cell[i]])) report_failure(lattice, i, t);
      }
    }
    std::swap(u, u_next);
    std::swap(v, v_next);
    ++t;
  }
};

Simulation::Simulation(ConductiveMask mask, const FhnParams& params, StimulusSchedule schedule,
                       unsigned workers)
    : impl_(std::make_unique<Impl>(std::move(mask), params, schedule, workers)) {}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

const Lattice& Simulation::lattice() const noexcept { return impl_->lattice; }
const FhnParams& Simulation::params() const noexcept { return impl_->params; }
std::int64_t Simulation::iteration() const noexcept { return impl_->t; }

FieldState Simulation::state() const {
  FieldState s = FieldState::zeros(impl_->cell.size());
  for (std::size_t i = 0; i < impl_->cell.size(); ++i) {
    s.u[i] = impl_->u[impl_->cell[i]];
    s.v[i] = impl_->v[impl_->cell[i]];
  }
  s.t = impl_->t;
  return s;
}

void Simulation::set_state(const FieldState& state) {
  if (state.u.size() != impl_->cell.size() || state.v.size() != impl_->cell.size()) {
    throw ConfigError("simulation: state size does not match lattice");
  }
  for (std::size_t i = 0; i < impl_->cell.size(); ++i) {
    impl_->u[impl_->cell[i]] = state.u[i];
    impl_->v[impl_->cell[i]] = state.v[i];
  }
  impl_->t = state.t;
  bool woke = false;
  for (std::size_t i = 0; i < impl_->cell.size(); ++i) {
    auto& alive = impl_->live[impl_->component[i]];
    if (!alive && (state.u[i] != 0.0 || state.v[i] != 0.0)) {
      alive = 1;
      woke = true;
    }
  }
  if (woke) impl_->build_spans();
  impl_->refresh_currents(true);
}

double Simulation::sum_u_minus_v(std::span<const std::int32_t> nodes) const noexcept {
  double sum = 0.0;
  for (const auto i : nodes) {
    const std::size_t c = impl_->cell[i];
    sum += impl_->u[c] - impl_->v[c];
  }
  return sum;
}

double Simulation::u(std::size_t i) const noexcept { return impl_->u[impl_->cell[i]]; }

void Simulation::step() { impl_->step(); }

void Simulation::run(std::int64_t duration, std::span<const Observer> observers) {
  if (duration < 0) throw ConfigError("run: duration must be >= 0");
  for (const auto& o : observers) {
    if (o.cadence < 1) throw ConfigError("run: observer cadence must be >= 1");
  }
  for (std::int64_t i = 0; i < duration; ++i) {
    impl_->step();
    const std::int64_t t = impl_->t;
    for (const auto& o : observers) {
      if (t % o.cadence == 0 && o.on_sample) o.on_sample(*this);
    }
  }
}

namespace {

template <class ValueAt>
netpbm::GrayImage render(const Lattice& lattice, double threshold, const ValueAt& u_at) {
  netpbm::GrayImage frame{lattice.width(), lattice.height(),
                          std::vector<std::uint8_t>(
                              static_cast<std::size_t>(lattice.width()) * lattice.height(),
                              kEmptyLevel)};
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const GridPoint p = lattice.point(i);
    frame.levels[static_cast<std::size_t>(p.y) * lattice.width() + p.x] =
        u_at(i) > threshold ? kExcitedLevel : kRestingLevel;
  }
  return frame;
}

}  // namespace

netpbm::GrayImage render_frame(const Lattice& lattice, const FieldState& state,
                               double threshold) {
  if (state.u.size() != lattice.size()) throw ConfigError("render: state size mismatch");
  return render(lattice, threshold, [&](std::size_t i) { return state.u[i]; });
}

netpbm::GrayImage render_frame(const Simulation& simulation, double threshold) {
  return render(simulation.lattice(), threshold,
                [&](std::size_t i) { return simulation.u(i); });
}

}  // namespace proteinoid
