#pragma once

#include "urn/structure.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace urn {

struct CoefficientTable {
  // c(i, nu) for leaders nu driving colour i; zero elsewhere.
  RationalMatrix c;
};

class CoefficientInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Leaders seeded with 1; followers and subleaders filled in topological order.
// Every (leader, kappa) block's eigenvector residual is checked to be exactly 0.
CoefficientTable compute_coefficients(const Structure& s, const std::vector<Rational>& activity);

// lambda_hat^(-kappa_i) * c(i, nu); requires lambda_hat > 0.
Rational hat_coefficient(const CoefficientTable& c, const ExponentTable& ex, ColourId i, ColourId nu);

// coef * base^exponent, exponent rational.
struct ScaledPower {
  Rational coef;
  Rational base = 1;
  Rational exponent = 0;

  std::optional<Rational> exact() const;
  double value() const;
  std::string text() const;
  bool operator==(const ScaledPower&) const = default;
};

enum class LimitKind { DeterministicExact, AbsolutelyContinuous, Extinct };

struct LimitVerdict {
  LimitKind kind = LimitKind::AbsolutelyContinuous;
  std::optional<ScaledPower> value;             // discrete-time limit constant
  std::optional<ScaledPower> continuous_value;  // continuous-time limit when deterministic
  bool possibly_zero = false;                   // the limit may vanish with positive probability
  std::vector<ColourId> zero_cause;             // minimal colours that can die out
  bool theorems_inapplicable = false;           // a subtracting colour has lambda* <= 0
};

enum class Mode { Discrete, Continuous, DrawnDiscrete, DrawnContinuous };

struct Normalization {
  Mode mode = Mode::Discrete;
  bool available = true;
  // Discrete: n^n_pow * log(n)^log_pow.
  Rational n_pow, log_pow;
  // Continuous: t^t_pow * exp(exp_rate * t).
  int t_pow = 0;
  Rational exp_rate;
  bool zero_hat_form = false;  // lambda_hat == 0: n^(kappa/kappa_hat0), no log factor
  std::string note;
};

Normalization normalization(const UrnSpec& spec, const Structure& s, ColourId i, Mode mode);

struct Analysis {
  UrnSpec spec;
  ValidationReport validation;
  Structure structure;
  UrnSpec extended;  // with the draw-counting colour appended last
  Structure extended_structure;
  CoefficientTable coefficients;  // on the extended spec
  std::vector<LimitVerdict> verdicts;
  std::vector<Normalization> discrete, continuous;

  ColourId dummy() const { return spec.q(); }
};

class InadmissibleSpec : public std::runtime_error {
 public:
  explicit InadmissibleSpec(ValidationReport r);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Deterministic limit value of x0-driven colours (lambda* == 0) in continuous time.
Rational deterministic_continuous_limit(const Structure& s, const CoefficientTable& c, const UrnSpec& spec,
                                        ColourId i);

std::vector<LimitVerdict> classify_limits(const UrnSpec& extended, const Structure& extended_structure,
                                          const CoefficientTable& coefficients, const ValidationReport& validation);

// Throws InadmissibleSpec (A1-A3, A5') or NonTriangular.
Analysis analyze(const UrnSpec& spec);

struct DrawnPrediction {
  std::optional<Rational> ratio;         // lim N_i/X_i when lambda*_i > 0
  std::optional<ScaledPower> constant;   // limit of N_i / normalization when deterministic
  std::string expression;
  Normalization normalization;
};

DrawnPrediction predicted_constants_drawn(const Analysis& a, ColourId i);

const char* kind_name(LimitKind k);
const char* mode_name(Mode m);
nlohmann::json to_json(const Normalization& n);
nlohmann::json limit_report(const Analysis& a);
// Full analyze payload: validation, structure, limits. Byte-stable.
nlohmann::json analysis_report(const Analysis& a);

}  // namespace urn
