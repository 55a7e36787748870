#pragma once

#include "urn/urn_model.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace urn {

// Floating-point form of a spec for the hot loop.
struct CompiledUrn {
  struct Delta {
    std::uint32_t colour;
    double amount;
  };
  struct Row {
    std::vector<double> cumulative;          // cumulative atom probabilities
    std::vector<std::vector<Delta>> deltas;  // nonzero entries of each atom
  };
  std::size_t q = 0;
  std::vector<double> activity;
  std::vector<double> initial;
  std::vector<Row> rows;
  bool integral = false;  // x0 and every atom integer-valued

  static CompiledUrn compile(const UrnSpec& spec);
};

enum class RunStatus { Running, Finished, Extinct, Truncated, NoDynamics };

struct UrnState {
  std::vector<double> x;
  std::vector<std::uint64_t> drawn;
  std::uint64_t step = 0;
  double t = 0;
  RunStatus status = RunStatus::Running;
  bool approximate = false;  // an integer count passed 2^53

  static UrnState initial_state(const CompiledUrn& urn);
};

struct Checkpoint {
  std::uint64_t n = 0;
  double t = 0;
  std::vector<double> x;
  std::vector<std::uint64_t> drawn;
};

struct Trajectory {
  std::vector<Checkpoint> checkpoints;
  UrnState final_state;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  // Checkpoint recorded at step n (discrete) or nullptr.
  const Checkpoint* at_step(std::uint64_t n) const;
  // Checkpoint recorded at time t (continuous) or nullptr.
  const Checkpoint* at_time(double t) const;
};

using Engine = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64 seeded by seed_seq(master, replicate, stream)";

struct RngPlan {
  std::uint64_t master_seed = 0;
};

struct Streams {
  Engine draws;  // colour and atom choices
  Engine clock;  // holding times
};

Streams make_streams(const RngPlan& plan, std::uint64_t replicate);

inline double uniform01(Engine& e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; }

enum class TimeMode { Discrete, Continuous };

struct RunPlan {
  TimeMode mode = TimeMode::Discrete;
  std::uint64_t steps = 1000;        // discrete horizon
  double t_max = 10;                 // continuous horizon
  std::vector<double> checkpoints;   // steps or times; empty = geometric default
  std::size_t replicates = 1;
  RngPlan rng;
  unsigned workers = 0;              // 0 = hardware concurrency
  std::uint64_t step_cap = 1'000'000'000;
};

class NegativeCount : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Powers of two up to the horizon, then the horizon.
std::vector<double> geometric_steps(std::uint64_t horizon);
// horizon * 2^-k for k = 9..0.
std::vector<double> geometric_times(double horizon);

// One draw: colour i with probability a_i x_i / sum, then one atom of row i.
void step_discrete(UrnState& s, const CompiledUrn& urn, Engine& draws);
// Exponential holding time at the current total activity, then one draw.
void step_continuous(UrnState& s, const CompiledUrn& urn, Engine& draws, Engine& clock);

namespace detail {

inline double total_activity(const UrnState& s, const CompiledUrn& urn) {
  double total = 0;
  for (std::size_t i = 0; i < urn.q; ++i) total += urn.activity[i] * s.x[i];
  return total;
}

// Applies one draw given the current total activity (> 0).
inline void apply_draw(UrnState& s, const CompiledUrn& urn, Engine& draws, double total) {
  const std::size_t q = urn.q;
  double u = uniform01(draws) * total;
  std::size_t i = 0;
  for (; i + 1 < q; ++i) {
    const double w = urn.activity[i] * s.x[i];
    if (u < w) break;
    u -= w;
  }
  // Guard against rounding landing on a colour with zero weight.
  while (urn.activity[i] * s.x[i] <= 0) --i;

  const auto& row = urn.rows[i];
  std::size_t k = 0;
  if (row.cumulative.size() > 1) {
    const double v = uniform01(draws);
    while (k + 1 < row.cumulative.size() && v >= row.cumulative[k]) ++k;
  }
  for (const auto& d : row.deltas[k]) {
    double& x = s.x[d.colour];
    x += d.amount;
    if (x < 0) throw NegativeCount("colour " + std::to_string(d.colour) + " went negative");
    if (urn.integral && x > 9007199254740992.0) s.approximate = true;
  }
  ++s.drawn[i];
  ++s.step;
}

}  // namespace detail

// Runs one replicate. obs(state) is called after every draw.
template <class Observer>
Trajectory simulate_replicate(const CompiledUrn& urn, const RunPlan& plan, std::uint64_t replicate, Observer&& obs) {
  Trajectory tr;
  tr.seed = plan.rng.master_seed;
  tr.replicate = replicate;
  Streams st = make_streams(plan.rng, replicate);
  UrnState s = UrnState::initial_state(urn);
  std::vector<double> cps = plan.checkpoints;
  if (cps.empty()) cps = plan.mode == TimeMode::Discrete ? geometric_steps(plan.steps) : geometric_times(plan.t_max);
  std::size_t next = 0;
  auto record = [&](double t_value) {
    tr.checkpoints.push_back(Checkpoint{s.step, t_value, s.x, s.drawn});
  };

  double total = detail::total_activity(s, urn);
  if (total <= 0) {
    s.status = RunStatus::NoDynamics;
    for (double c : cps) record(plan.mode == TimeMode::Continuous ? c : 0.0);
    tr.final_state = std::move(s);
    return tr;
  }

  if (plan.mode == TimeMode::Discrete) {
    for (; next < cps.size() && cps[next] <= 0; ++next) record(0);
    while (s.step < plan.steps) {
      detail::apply_draw(s, urn, st.draws, total);
      obs(static_cast<const UrnState&>(s));
      while (next < cps.size() && cps[next] <= static_cast<double>(s.step)) {
        if (cps[next] == static_cast<double>(s.step)) record(0);
        ++next;
      }
      total = detail::total_activity(s, urn);
      if (total <= 0) {
        s.status = RunStatus::Extinct;
        break;
      }
    }
    if (s.status == RunStatus::Running) s.status = RunStatus::Finished;
  } else {
    while (true) {
      const double tau = -std::log1p(-uniform01(st.clock)) / total;
      const double t_next = s.t + tau;
      while (next < cps.size() && cps[next] < t_next && cps[next] <= plan.t_max) record(cps[next++]);
      if (t_next > plan.t_max) {
        s.t = plan.t_max;
        s.status = RunStatus::Finished;
        break;
      }
      if (s.step >= plan.step_cap) {
        s.status = RunStatus::Truncated;
        break;
      }
      s.t = t_next;
      detail::apply_draw(s, urn, st.draws, total);
      obs(static_cast<const UrnState&>(s));
      total = detail::total_activity(s, urn);
      if (total <= 0) {
        s.status = RunStatus::Extinct;
        // Frozen from here on.
        while (next < cps.size() && cps[next] <= plan.t_max) record(cps[next++]);
        break;
      }
    }
  }
  tr.final_state = std::move(s);
  return tr;
}

Trajectory simulate_replicate(const CompiledUrn& urn, const RunPlan& plan, std::uint64_t replicate);

// Replicates 0..R-1 on a worker pool; output indexed by replicate.
std::vector<Trajectory> run(const UrnSpec& spec, const RunPlan& plan);
std::vector<Trajectory> run(const CompiledUrn& urn, const RunPlan& plan);

unsigned resolve_workers(unsigned requested);

class TreeTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Composition = std::vector<Rational>;
using ExactDistribution = std::map<Composition, Rational>;

// Exact law of X_n by expanding every draw and atom; equal compositions merge.
// Throws TreeTooLarge when a level needs more than max_expansions branches.
ExactDistribution enumerate_exact(const UrnSpec& spec, unsigned n, std::size_t max_expansions = 1'000'000);
std::vector<Rational> exact_mean(const ExactDistribution& d);

const char* status_name(RunStatus s);

}  // namespace urn
