#include "support.hpp"
#include "urn/simulator.hpp"
#include "urn/stats.hpp"
#include "urn/suites.hpp"
#include "urn/verification.hpp"

#include <doctest.h>

#include <cmath>

using namespace urn;
using namespace urn::testing;

namespace {

// Variance ratio under n -> 2n of the slowest correction to colour i, from the
// exponent table: ancestors with smaller lambda* contribute
// 2^{2(l*_j - l*_i)/l_hat} (log 2n / log n)^{2(k_j - k_i)}, and a leftover
// power of t costs (log n / log 2n)^2.
double predicted_doubling_ratio(const Analysis& a, ColourId i, double n) {
  const auto& ex = a.structure.exponents;
  const double lh = to_double(ex.lambda_hat);
  const double lg = std::log(2 * n) / std::log(n);
  // Residual power of t after the time change; its random part is log(xi) / log n.
  const double p = ex.kappa[i] - ex.kappa_hat * to_double(ex.lambda_star[i]) / lh;
  double worst = std::abs(p) > 1e-12 ? 1 / (lg * lg) : 0;
  if (ex.lambda_star[i] > 0) worst = std::max(worst, std::pow(2.0, -2 * to_double(ex.lambda_star[i]) / lh));
  for (std::size_t j = 0; j < a.spec.q(); ++j) {
    if (j == i || !a.structure.graph.precedes(j, i) || ex.lambda_star[j] >= ex.lambda_star[i]) continue;
    const double e = 2 * to_double(ex.lambda_star[j] - ex.lambda_star[i]) / lh;
    worst = std::max(worst, std::pow(2.0, e) * std::pow(lg, 2 * (ex.kappa[j] - ex.kappa[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("deterministic limits: variance shrinks when n doubles") {
  const std::uint64_t n = 20000;
  int checked = 0;
  for (const auto& a : corpus_analyses()) {
    if (a.structure.exponents.lambda_hat <= 0) continue;
    std::vector<ColourId> colours;
    for (std::size_t i = 0; i < a.spec.q(); ++i) {
      const auto& v = a.verdicts[i];
      if (v.kind != LimitKind::DeterministicExact || v.theorems_inapplicable || v.possibly_zero) continue;
      if (predicted_doubling_ratio(a, i, static_cast<double>(n)) > 0.7) continue;
      colours.push_back(i);
    }
    if (colours.empty()) continue;
    RunPlan plan;
    plan.steps = 2 * n;
    plan.checkpoints = {static_cast<double>(n), static_cast<double>(2 * n)};
    plan.replicates = 1000;
    plan.rng.master_seed = 8675309;
    const auto runs = run(a.spec, plan);
    for (auto i : colours) {
      CAPTURE(a.spec.meta.value("name", ""));
      CAPTURE(i);
      std::vector<double> half, full;
      for (const auto& tr : runs) {
        half.push_back(normalized(a.discrete[i], tr.at_step(n)->x[i], static_cast<double>(n)));
        full.push_back(normalized(a.discrete[i], tr.at_step(2 * n)->x[i], static_cast<double>(2 * n)));
      }
      const double v1 = stats::summarize(half).variance, v2 = stats::summarize(full).variance;
      ++checked;
      if (v1 == 0) {
        CHECK(v2 == 0);
        continue;
      }
      CHECK(v2 / v1 < 0.8);
    }
  }
  CHECK(checked >= 8);
}

TEST_CASE("E+- increments do not settle: the doubling difference keeps its spread") {
  // Var(t^-1 (B(2t) - 2B(t))) = 2 + 2/t for this urn; an almost-sure limit would send it to 0.
  const double t = 20;
  RunPlan plan;
  plan.mode = TimeMode::Continuous;
  plan.t_max = 2 * t;
  plan.checkpoints = {t, 2 * t};
  plan.replicates = 4000;
  plan.rng.master_seed = 1618;
  const auto runs = run(instantiate("Eplusminus"), plan);
  std::vector<double> d;
  for (const auto& tr : runs) d.push_back((tr.at_time(2 * t)->x[1] - 2 * tr.at_time(t)->x[1]) / t);
  const auto s = stats::summarize(d);
  CHECK(s.variance > 0.5);
  CHECK(s.variance == doctest::Approx(2 + 2 / t).epsilon(0.15));
}

TEST_CASE("moment checks refuse unbalanced urns") {
  const Analysis a = analyze(instantiate("ED"));
  CheckPlan plan;
  plan.replicates = 100;
  plan.steps = 100;
  try {
    check_moments(a, 1, GammaYule{1, 1}, {1}, plan);
    FAIL("expected InapplicableCheck");
  } catch (const InapplicableCheck& e) {
    CHECK(std::string(e.what()) == kUnbalancedMomentsMessage);
  }
}

TEST_CASE("continuous mean by matrix exponential") {
  const auto y = exact_continuous_mean(instantiate("Yule", {{"x0", "3"}}), 2);
  CHECK(y[0] == doctest::Approx(3 * std::exp(2.0)).epsilon(1e-12));
  // E2 with delta = 2, gamma = alpha = 1 from (1, 0): white e^{2t}, black e^{2t} - e^{t}.
  const auto e = exact_continuous_mean(instantiate("E2"), 1.5);
  CHECK(e[0] == doctest::Approx(std::exp(3.0)).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(std::exp(3.0) - std::exp(1.5)).epsilon(1e-12));
}

TEST_CASE("law detection on the corpus") {
  CHECK(std::holds_alternative<DirichletClassical>(*detect_law(instantiate("Eclassical"), 0)));
  CHECK(std::holds_alternative<BalancedTwoColourMoments>(*detect_law(instantiate("E2_balanced"), 0)));
  CHECK(std::holds_alternative<MittagLeffler>(*detect_law(instantiate("E2p"), 0)));
  CHECK(std::holds_alternative<RandomBernoulliMoments>(*detect_law(instantiate("E2p", {{"x2", "1"}}), 0)));
  CHECK(std::holds_alternative<E3Moments>(*detect_law(instantiate("E3"), 1)));
  CHECK_FALSE(detect_law(instantiate("ED"), 1).has_value());
  CHECK(std::holds_alternative<NegBinomialEplusminus>(*detect_time_law(instantiate("Eplusminus"), 1, 20)));
  CHECK(std::holds_alternative<PoissonEminusminus>(*detect_time_law(instantiate("Eminusminus"), 1, 10)));
}

TEST_CASE("small checks run and report") {
  const Analysis a = analyze(instantiate("E2"));
  CheckPlan plan;
  plan.steps = 20000;
  plan.replicates = 200;
  plan.seed = 3;
  const auto r = check_convergence(a, 0, plan);
  CHECK(r.pass);
  CHECK(r.target == 1.0);
  CHECK(r.replicates == 200);
  const auto j = to_json(r);
  CHECK(j["verdict"] == "pass");
  CHECK(csv_header() == "spec,check,target,estimate,se,verdict");
  CHECK(csv_row(r).rfind("E2,convergence", 0) == 0);

  const auto ex = check_martingale(instantiate("Yule"), 0, {1, 2}, CheckPlan{0, 0, 2000, 9, 0, std::nullopt});
  CHECK(ex.pass);
}

TEST_CASE("the possibly-zero colours are checked on survivors") {
  const Analysis a = analyze(instantiate("Epref-"));
  CheckPlan plan;
  plan.steps = 5000;
  plan.replicates = 200;
  plan.seed = 21;
  const auto r = check_convergence(a, 0, plan);
  REQUIRE(r.survival_fraction);
  CHECK(*r.survival_fraction > 0);
  CHECK(*r.survival_fraction <= 1);
}

TEST_CASE("default suites follow the analysis") {
  const auto plain = default_suites(analyze(instantiate("E2_balanced")));
  CHECK(std::find(plain.begin(), plain.end(), "moments") != plain.end());
  const auto pm = default_suites(analyze(instantiate("Eplusminus")));
  CHECK(pm == std::vector<std::string>{"distribution", "martingale"});
  CHECK(default_suites(analyze(instantiate("EcX0"))).empty());
}
