#pragma once

#include "urn/verification.hpp"

#include <functional>
#include <string>
#include <vector>

namespace urn {

struct SuiteEntry {
  VerificationResult result;
  bool inapplicable = false;  // result.note carries the reason
};

// convergence, moments, distribution, martingale, drawn-ratio
const std::vector<std::string>& suite_names();

// meta.suites when present; distribution and martingale when the almost-sure
// theorems do not apply; otherwise every suite with something to check except martingale.
std::vector<std::string> default_suites(const Analysis& a);

using Progress = std::function<void(const std::string&)>;

// Runs one suite over every colour it applies to. Inapplicable checks are
// returned as entries rather than thrown.
std::vector<SuiteEntry> run_suite(const Analysis& a, const std::string& suite, const CheckPlan& plan,
                                  const Progress& progress = {});

nlohmann::json to_json(const SuiteEntry& e);

}  // namespace urn
