#pragma once

#include "urn/laws.hpp"
#include "urn/limits.hpp"
#include "urn/simulator.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace urn {

// Budget and tolerance for one check. Zero fields fall back to the check's default.
struct CheckPlan {
  std::uint64_t steps = 0;
  double t_max = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::optional<double> tolerance;  // relative, except p-value threshold for distribution checks
};

struct VerificationResult {
  std::string check;
  std::string spec;
  std::string target_text;
  std::optional<double> target, estimate, se, statistic, p_value;
  double tolerance = 0;
  std::string tolerance_kind;  // "relative", "p-value", "standard-errors"
  bool pass = false;
  std::size_t replicates = 0;
  std::uint64_t steps = 0;
  double t_max = 0;
  std::uint64_t seed = 0;
  std::optional<double> survival_fraction;
  std::string note;
};

class InapplicableCheck : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExtinctMajority : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSteps = 100'000;
inline constexpr std::uint64_t kLogCorrectedSteps = 1'000'000;
inline constexpr double kDefaultTolerance = 0.02;
inline constexpr double kLogCorrectedTolerance = 0.10;
inline constexpr double kMinPValue = 0.01;

// X_ni / (n^p log^l n) for the colour's discrete normalization.
double normalized(const Normalization& norm, double x, double n);

// Deterministic verdicts: mean of the normalized count vs the exact value.
// AbsolutelyContinuous: means at n/2 and n agree and every sample is positive.
// Extinct: the colour is absent at n in (1 - tol) of the replicates.
// PossiblyZero verdicts are evaluated on replicates where the colour is present at n.
CheckPlan convergence_defaults(const Analysis& a, ColourId i, CheckPlan plan);
VerificationResult check_convergence(const Analysis& a, ColourId i, CheckPlan plan);

// Total activity over n converges to lambda_hat (requires lambda_hat > 0).
VerificationResult check_total_activity(const Analysis& a, CheckPlan plan);

// Balanced urns only; one result per order. Per-order tolerances, when given, are
// relative; otherwise plan.tolerance (relative) or max(2%, 4 standard errors).
std::vector<VerificationResult> check_moments(const Analysis& a, ColourId i, const ClosedFormLaw& law,
                                 const std::vector<double>& orders, CheckPlan plan,
                                 const std::vector<double>& tolerances = {});

// Chi-square (discrete laws) or Kolmogorov-Smirnov (continuous laws); pass iff p >= threshold.
VerificationResult check_distribution(const std::vector<double>& samples, const ClosedFormLaw& law,
                                      double threshold = kMinPValue);
// Simulates the samples: continuous time to t_max for time laws, discrete X_ni/n otherwise.
VerificationResult check_distribution(const UrnSpec& spec, ColourId i, const ClosedFormLaw& law, CheckPlan plan);

// Sample means of e^{-lambda_i t} X_i(t) at each time within 3 standard errors of
// e^{-lambda_i t} E X_i(t) = e^{-lambda_i t} (x0 exp(t diag(a) R))_i.
VerificationResult check_martingale(const UrnSpec& spec, ColourId i, std::vector<double> times, CheckPlan plan);
std::vector<double> exact_continuous_mean(const UrnSpec& spec, double t);
// Largest horizon <= cap whose expected total count stays below the budget.
double affordable_horizon(const UrnSpec& spec, double cap, double budget = 1e4);

// N_ni / X_ni vs a_i / lambda*_i (requires lambda*_i > 0). Default tolerance
// max(2%, 4 standard errors), 10% floor for log-corrected colours.
VerificationResult check_drawn_ratio(const Analysis& a, ColourId i, CheckPlan plan);

// Law of colour i's discrete-normalized limit, when the urn has a known closed form.
std::optional<ClosedFormLaw> detect_law(const UrnSpec& spec, ColourId i);
// Exact law of X_i(t) in continuous time, when known.
std::optional<ClosedFormLaw> detect_time_law(const UrnSpec& spec, ColourId i, double t);

extern const char* const kUnbalancedMomentsMessage;

nlohmann::json to_json(const VerificationResult& r);
std::string csv_header();
std::string csv_row(const VerificationResult& r);

}  // namespace urn
