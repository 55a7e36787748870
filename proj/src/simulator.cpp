#include "urn/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace urn {

CompiledUrn CompiledUrn::compile(const UrnSpec& spec) {
  CompiledUrn u;
  u.q = spec.q();
  u.integral = true;
  for (std::size_t i = 0; i < u.q; ++i) {
    u.activity.push_back(to_double(spec.activity[i]));
    u.initial.push_back(to_double(spec.initial[i]));
    if (!is_integer(spec.initial[i])) u.integral = false;
    Row row;
    Rational cum = 0;
    for (const auto& atom : spec.rows[i].atoms) {
      cum += atom.p;
      row.cumulative.push_back(to_double(cum));
      std::vector<Delta> d;
      for (std::size_t j = 0; j < u.q; ++j)
        if (atom.v[j] != 0) {
          d.push_back({static_cast<std::uint32_t>(j), to_double(atom.v[j])});
          if (!is_integer(atom.v[j])) u.integral = false;
        }
      row.deltas.push_back(std::move(d));
    }
    row.cumulative.back() = 1.0;
    u.rows.push_back(std::move(row));
  }
  return u;
}

UrnState UrnState::initial_state(const CompiledUrn& urn) {
  UrnState s;
  s.x = urn.initial;
  s.drawn.assign(urn.q, 0);
  return s;
}

const Checkpoint* Trajectory::at_step(std::uint64_t n) const {
  for (const auto& c : checkpoints)
    if (c.n == n) return &c;
  return nullptr;
}

const Checkpoint* Trajectory::at_time(double t) const {
  for (const auto& c : checkpoints)
    if (c.t == t) return &c;
  return nullptr;
}

Streams make_streams(const RngPlan& plan, std::uint64_t replicate) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq a{lo(plan.master_seed), hi(plan.master_seed), lo(replicate), hi(replicate), 1u};
  std::seed_seq b{lo(plan.master_seed), hi(plan.master_seed), lo(replicate), hi(replicate), 2u};
  return Streams{Engine(a), Engine(b)};
}

std::vector<double> geometric_steps(std::uint64_t horizon) {
  std::vector<double> out;
  for (std::uint64_t n = 1; n < horizon; n *= 2) out.push_back(static_cast<double>(n));
  out.push_back(static_cast<double>(horizon));
  return out;
}

std::vector<double> geometric_times(double horizon) {
  std::vector<double> out;
  for (int k = 9; k >= 0; --k) out.push_back(std::ldexp(horizon, -k));
  return out;
}

void step_discrete(UrnState& s, const CompiledUrn& urn, Engine& draws) {
  if (s.status != RunStatus::Running) throw std::logic_error("step on a stopped urn");
  const double total = detail::total_activity(s, urn);
  if (total <= 0) {
    s.status = RunStatus::Extinct;
    return;
  }
  detail::apply_draw(s, urn, draws, total);
  if (detail::total_activity(s, urn) <= 0) s.status = RunStatus::Extinct;
}

void step_continuous(UrnState& s, const CompiledUrn& urn, Engine& draws, Engine& clock) {
  if (s.status != RunStatus::Running) throw std::logic_error("step on a stopped urn");
  const double total = detail::total_activity(s, urn);
  if (total <= 0) {
    s.status = RunStatus::Extinct;
    return;
  }
  s.t += -std::log1p(-uniform01(clock)) / total;
  detail::apply_draw(s, urn, draws, total);
  if (detail::total_activity(s, urn) <= 0) s.status = RunStatus::Extinct;
}

Trajectory simulate_replicate(const CompiledUrn& urn, const RunPlan& plan, std::uint64_t replicate) {
  return simulate_replicate(urn, plan, replicate, [](const UrnState&) {});
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Trajectory> run(const CompiledUrn& urn, const RunPlan& plan) {
  std::vector<Trajectory> out(plan.replicates);
  const unsigned workers = std::min<unsigned>(resolve_workers(plan.workers),
                                              static_cast<unsigned>(std::max<std::size_t>(1, plan.replicates)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < plan.replicates; r = next++) out[r] = simulate_replicate(urn, plan, r);
  };
  if (workers <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex m;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        work();
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!error) error = std::current_exception();
        next = plan.replicates;
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<Trajectory> run(const UrnSpec& spec, const RunPlan& plan) { return run(CompiledUrn::compile(spec), plan); }

ExactDistribution enumerate_exact(const UrnSpec& spec, unsigned n, std::size_t max_expansions) {
  const std::size_t q = spec.q();
  ExactDistribution level{{spec.initial, Rational(1)}};
  for (unsigned step = 0; step < n; ++step) {
    std::size_t expansions = 0;
    for (const auto& [x, p] : level)
      for (std::size_t i = 0; i < q; ++i)
        if (spec.activity[i] * x[i] > 0) expansions += spec.rows[i].atoms.size();
    if (expansions > max_expansions)
      throw TreeTooLarge("level " + std::to_string(step + 1) + " needs " + std::to_string(expansions) +
                         " branches (limit " + std::to_string(max_expansions) + ")");
    ExactDistribution nextl;
    for (const auto& [x, p] : level) {
      Rational total = 0;
      for (std::size_t i = 0; i < q; ++i) total += spec.activity[i] * x[i];
      if (total == 0) {
        nextl[x] += p;
        continue;
      }
      for (std::size_t i = 0; i < q; ++i) {
        const Rational w = spec.activity[i] * x[i];
        if (w <= 0) continue;
        for (const auto& atom : spec.rows[i].atoms) {
          Composition y = x;
          for (std::size_t j = 0; j < q; ++j) {
            y[j] += atom.v[j];
            if (y[j] < 0) throw NegativeCount("colour " + std::to_string(j) + " went negative in enumeration");
          }
          nextl[y] += p * (w / total) * atom.p;
        }
      }
    }
    level = std::move(nextl);
  }
  return level;
}

std::vector<Rational> exact_mean(const ExactDistribution& d) {
  std::vector<Rational> m;
  for (const auto& [x, p] : d) {
    if (m.empty()) m.assign(x.size(), Rational(0));
    for (std::size_t j = 0; j < x.size(); ++j) m[j] += p * x[j];
  }
  return m;
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "running";
    case RunStatus::Finished: return "finished";
    case RunStatus::Extinct: return "extinct";
    case RunStatus::Truncated: return "truncated";
    case RunStatus::NoDynamics: return "no-dynamics";
  }
  return "?";
}

}  // namespace urn
