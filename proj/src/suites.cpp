#include "urn/suites.hpp"

#include <algorithm>

namespace urn {

namespace {

SuiteEntry inapplicable(const Analysis& a, const std::string& check, const std::string& why) {
  SuiteEntry e;
  e.inapplicable = true;
  e.result.check = check;
  if (a.spec.meta.contains("name") && a.spec.meta["name"].is_string()) e.result.spec = a.spec.meta["name"];
  e.result.note = why;
  return e;
}

double distribution_time(const CheckPlan& plan) { return plan.t_max > 0 ? plan.t_max : 20; }

bool has_moment_law(const Analysis& a) {
  for (std::size_t i = 0; i < a.spec.q(); ++i)
    if (detect_law(a.spec, i)) return true;
  return false;
}

bool has_distribution_law(const Analysis& a, double t) {
  for (std::size_t i = 0; i < a.spec.q(); ++i) {
    if (detect_time_law(a.spec, i, t)) return true;
    if (auto law = detect_law(a.spec, i); law && has_distribution(*law)) return true;
  }
  return false;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"convergence", "moments", "distribution", "martingale", "drawn-ratio"};
  return names;
}

std::vector<std::string> default_suites(const Analysis& a) {
  if (auto it = a.spec.meta.find("suites"); it != a.spec.meta.end() && it->is_array()) {
    std::vector<std::string> out;
    for (const auto& s : *it)
      if (s.is_string()) out.push_back(s);
    return out;
  }
  const bool inapplicable_theorems =
      std::any_of(a.verdicts.begin(), a.verdicts.end(), [](const LimitVerdict& v) { return v.theorems_inapplicable; });
  if (inapplicable_theorems) return {"distribution", "martingale"};
  std::vector<std::string> out{"convergence"};
  if (a.validation.balance && has_moment_law(a)) out.push_back("moments");
  if (has_distribution_law(a, distribution_time({}))) out.push_back("distribution");
  out.push_back("drawn-ratio");
  return out;
}

std::vector<SuiteEntry> run_suite(const Analysis& a, const std::string& suite, const CheckPlan& plan,
                                  const Progress& progress) {
  std::vector<SuiteEntry> out;
  auto guarded = [&](const std::string& label, auto&& body) {
    if (progress) progress(label);
    try {
      body();
    } catch (const InapplicableCheck& e) {
      out.push_back(inapplicable(a, label, e.what()));
    } catch (const ExtinctMajority& e) {
      SuiteEntry f;
      f.result.check = label;
      f.result.note = e.what();
      f.result.seed = plan.seed;
      out.push_back(f);
    }
  };
  const std::size_t q = a.spec.q();

  if (suite == "convergence") {
    for (std::size_t i = 0; i < q; ++i)
      guarded("convergence[" + a.spec.name(i) + "]", [&] { out.push_back({check_convergence(a, i, plan)}); });
    if (a.structure.exponents.lambda_hat > 0)
      guarded("total-activity", [&] { out.push_back({check_total_activity(a, plan)}); });
  } else if (suite == "moments") {
    if (!a.validation.balance) return {inapplicable(a, "moments", kUnbalancedMomentsMessage)};
    for (std::size_t i = 0; i < q; ++i)
      if (auto law = detect_law(a.spec, i))
        guarded("moments[" + a.spec.name(i) + "]", [&] {
          for (auto& r : check_moments(a, i, *law, {1, 2}, plan)) out.push_back({r});
        });
    if (out.empty()) out.push_back(inapplicable(a, "moments", "no closed-form limit law is known for this urn"));
  } else if (suite == "distribution") {
    const double t = distribution_time(plan);
    for (std::size_t i = 0; i < q; ++i) {
      std::optional<ClosedFormLaw> law = detect_time_law(a.spec, i, t);
      if (!law) law = detect_law(a.spec, i);
      if (!law || !has_distribution(*law)) continue;
      CheckPlan p = plan;
      p.t_max = t;
      guarded("distribution[" + a.spec.name(i) + "]", [&] { out.push_back({check_distribution(a.spec, i, *law, p)}); });
    }
    if (out.empty()) out.push_back(inapplicable(a, "distribution", "no closed-form distribution is known for this urn"));
  } else if (suite == "martingale") {
    for (std::size_t i = 0; i < q; ++i)
      guarded("martingale[" + a.spec.name(i) + "]", [&] { out.push_back({check_martingale(a.spec, i, {}, plan)}); });
  } else if (suite == "drawn-ratio") {
    for (std::size_t i = 0; i < q; ++i)
      guarded("drawn-ratio[" + a.spec.name(i) + "]", [&] { out.push_back({check_drawn_ratio(a, i, plan)}); });
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  return out;
}

nlohmann::json to_json(const SuiteEntry& e) {
  nlohmann::json j = to_json(e.result);
  if (e.inapplicable) {
    j["verdict"] = "inapplicable";
    j.erase("tolerance");
    j.erase("tolerance_kind");
  }
  return j;
}

}  // namespace urn
