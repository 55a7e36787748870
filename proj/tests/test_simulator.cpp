#include "support.hpp"
#include "urn/simulator.hpp"

#include <doctest.h>

using namespace urn;
using namespace urn::testing;

namespace {

bool same(const std::vector<Trajectory>& a, const std::vector<Trajectory>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const auto &x = a[r], &y = b[r];
    if (x.checkpoints.size() != y.checkpoints.size()) return false;
    for (std::size_t k = 0; k < x.checkpoints.size(); ++k) {
      const auto &c = x.checkpoints[k], &d = y.checkpoints[k];
      if (c.n != d.n || c.t != d.t || c.x != d.x || c.drawn != d.drawn) return false;
    }
    if (x.final_state.x != y.final_state.x || x.final_state.t != y.final_state.t) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("exact enumeration fixtures") {
  const UrnSpec s = point_mass({{R(1), R(1)}, {R(0), R(1)}}, {R(1), R(0)});
  const auto d = enumerate_exact(s, 2);
  CHECK(exact_mean(d) == std::vector<Rational>{R("8/3"), R(2)});
  Rational total = 0;
  for (const auto& [x, p] : d) total += p;
  CHECK(total == 1);

  const auto c = enumerate_exact(instantiate("Eclassical"), 1);
  CHECK(exact_mean(c) == std::vector<Rational>{R("3/2"), R("3/2")});
  CHECK(c.size() == 2);
}

TEST_CASE("enumeration refuses trees that are too large") {
  CHECK_THROWS_AS(enumerate_exact(instantiate("Eprefk", {{"q", "6"}}), 40, 1000), TreeTooLarge);
}

TEST_CASE("replicates are identical across worker counts") {
  for (const char* name : {"E2X", "Epref", "EcX0", "Eplusminus"}) {
    CAPTURE(name);
    const UrnSpec s = instantiate(name);
    for (auto mode : {TimeMode::Discrete, TimeMode::Continuous}) {
      RunPlan plan;
      plan.mode = mode;
      plan.steps = 2000;
      plan.t_max = 3;
      plan.replicates = 24;
      plan.rng.master_seed = 123456789;
      plan.workers = 1;
      const auto one = run(s, plan);
      plan.workers = 3;
      const auto three = run(s, plan);
      plan.workers = 8;
      const auto eight = run(s, plan);
      CHECK(same(one, three));
      CHECK(same(one, eight));
      plan.rng.master_seed = 123456790;
      CHECK_FALSE(same(one, run(s, plan)));
    }
  }
}

TEST_CASE("draw counts sum to n and integer urns stay integral") {
  for (const auto& s : corpus_specs()) {
    const CompiledUrn u = CompiledUrn::compile(s);
    RunPlan plan;
    plan.steps = 3000;
    plan.rng.master_seed = 5;
    for (std::uint64_t r = 0; r < 4; ++r) {
      bool ok = true;
      simulate_replicate(u, plan, r, [&](const UrnState& st) {
        std::uint64_t sum = 0;
        for (auto v : st.drawn) sum += v;
        if (sum != st.step) ok = false;
        if (u.integral)
          for (double x : st.x)
            if (x != std::floor(x)) ok = false;
      });
      CHECK(ok);
    }
  }
}

TEST_CASE("balanced runs keep a.X_n = a.X_0 + n beta exactly") {
  int balanced = 0;
  for (const auto& s : corpus_specs()) {
    const auto rep = validate(s);
    if (!rep.balance) continue;
    ++balanced;
    CAPTURE(s.meta.value("name", ""));
    const CompiledUrn u = CompiledUrn::compile(s);
    double start = 0;
    for (std::size_t i = 0; i < u.q; ++i) start += u.activity[i] * u.initial[i];
    const double beta = to_double(*rep.balance);
    RunPlan plan;
    plan.steps = 5000;
    plan.rng.master_seed = 77;
    for (std::uint64_t r = 0; r < 3; ++r) {
      std::uint64_t bad = 0;
      simulate_replicate(u, plan, r, [&](const UrnState& st) {
        const double expect = start + static_cast<double>(st.step) * beta;
        const double got = detail::total_activity(st, u);
        if (u.integral ? got != expect : std::abs(got - expect) > 1e-12 * std::abs(expect)) ++bad;
      });
      CHECK(bad == 0);
    }
  }
  CHECK(balanced >= 8);
}

TEST_CASE("the discrete chain is the jump chain of the continuous run") {
  for (const char* name : {"E2X", "Epref", "E3", "Eplusminus"}) {
    CAPTURE(name);
    const CompiledUrn u = CompiledUrn::compile(instantiate(name));
    RunPlan cont;
    cont.mode = TimeMode::Continuous;
    cont.t_max = 4;
    cont.rng.master_seed = 31337;
    std::vector<std::vector<double>> jumps;
    simulate_replicate(u, cont, 2, [&](const UrnState& st) { jumps.push_back(st.x); });
    REQUIRE(jumps.size() > 10);

    RunPlan disc;
    disc.steps = jumps.size();
    disc.rng.master_seed = 31337;
    std::vector<std::vector<double>> steps;
    simulate_replicate(u, disc, 2, [&](const UrnState& st) { steps.push_back(st.x); });
    CHECK(steps == jumps);
  }
}

TEST_CASE("E-- black count has the parity of n") {
  const CompiledUrn u = CompiledUrn::compile(instantiate("Eminusminus"));
  RunPlan plan;
  plan.steps = 20000;
  plan.rng.master_seed = 4;
  for (std::uint64_t r = 0; r < 20; ++r) {
    std::uint64_t bad = 0;
    simulate_replicate(u, plan, r, [&](const UrnState& st) {
      if (static_cast<std::uint64_t>(st.x[1]) % 2 != st.step % 2) ++bad;
    });
    CHECK(bad == 0);
  }
}

TEST_CASE("an urn with no active balls reports no dynamics") {
  const UrnSpec s = point_mass({{R(1), R(0)}, {R(0), R(1)}}, {R(0), R(1)}, {R(1), R(0)});
  RunPlan plan;
  plan.steps = 10;
  const auto tr = run(s, plan);
  CHECK(tr[0].final_state.status == RunStatus::NoDynamics);
  CHECK(tr[0].final_state.step == 0);
}

TEST_CASE("checkpoints land on the requested steps and times") {
  const UrnSpec s = instantiate("E2_balanced");
  RunPlan plan;
  plan.steps = 100;
  plan.checkpoints = {1, 10, 50, 100};
  const auto tr = run(s, plan)[0];
  REQUIRE(tr.checkpoints.size() == 4);
  CHECK(tr.at_step(50) != nullptr);
  CHECK(tr.at_step(50)->x[0] + tr.at_step(50)->x[1] == 1 + 2 * 50);

  plan.mode = TimeMode::Continuous;
  plan.t_max = 2;
  plan.checkpoints = {};
  const auto ct = run(s, plan)[0];
  CHECK(ct.checkpoints.size() == 10);
  CHECK(ct.at_time(2) != nullptr);
  CHECK(ct.final_state.status == RunStatus::Finished);
}

TEST_CASE("strict urn adds one black ball per draw") {
  const UrnSpec s = instantiate("Strict");
  RunPlan plan;
  plan.steps = 1000;
  const auto tr = run(s, plan)[0];
  CHECK(tr.final_state.x[1] == to_double(s.initial[1]) + 1000);
}
