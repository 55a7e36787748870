#include "urn/limits.hpp"

#include <cmath>

namespace urn {

CoefficientTable compute_coefficients(const Structure& s, const std::vector<Rational>& activity) {
  const auto& ex = s.exponents;
  const auto& g = s.graph;
  const std::size_t q = g.q;
  CoefficientTable t{zero_matrix(q, q)};

  for (auto i : g.topo) {
    if (s.roles.role[i] == Role::Leader) {
      t.c(i, i) = 1;
      continue;
    }
    const bool follower = ex.lambda[i] < ex.lambda_star[i];
    for (auto j : g.parents[i]) {
      if (ex.lambda_star[j] != ex.lambda_star[i]) continue;
      Rational factor;
      if (follower) {
        if (ex.kappa[j] != ex.kappa[i]) continue;
        factor = activity[j] * s.mean(j, i) / (ex.lambda_star[i] - ex.lambda[i]);
      } else {
        if (ex.kappa[j] != ex.kappa[i] - 1) continue;
        factor = activity[j] * s.mean(j, i) / Rational(ex.kappa[i]);
      }
      for (std::size_t nu = 0; nu < q; ++nu)
        if (t.c(j, nu) != 0) t.c(i, nu) += factor * t.c(j, nu);
    }
  }

  for (const auto& [nu, levels] : s.roles.block_by_kappa) {
    for (const auto& [kappa, members] : levels) {
      for (auto i : members) {
        Rational res = -ex.lambda[nu] * t.c(i, nu);
        for (auto j : members) res += activity[j] * s.mean(j, i) * t.c(j, nu);
        if (res != 0)
          throw CoefficientInconsistency("eigenvector residual " + to_string(res) + " for colour " +
                                         std::to_string(i) + ", leader " + std::to_string(nu) + ", kappa " +
                                         std::to_string(kappa));
      }
    }
  }
  return t;
}

Rational hat_coefficient(const CoefficientTable& c, const ExponentTable& ex, ColourId i, ColourId nu) {
  if (ex.lambda_hat <= 0) throw std::domain_error("hat coefficients need lambda_hat > 0");
  return pow_int(ex.lambda_hat, -ex.kappa[i]) * c.c(i, nu);
}

std::optional<Rational> ScaledPower::exact() const {
  if (coef == 0 || base == 1 || exponent == 0) return coef;
  if (is_integer(exponent)) return coef * pow_int(base, numerator(exponent).convert_to<long>());
  return std::nullopt;
}

double ScaledPower::value() const {
  if (auto e = exact()) return to_double(*e);
  return to_double(coef) * std::pow(to_double(base), to_double(exponent));
}

std::string ScaledPower::text() const {
  if (auto e = exact()) return to_string(*e);
  return to_string(coef) + "*(" + to_string(base) + ")^(" + to_string(exponent) + ")";
}

InadmissibleSpec::InadmissibleSpec(ValidationReport r)
    : std::runtime_error([&] {
        std::string s = "spec violates required assumptions:";
        for (const auto& v : r.violations) s += "\n  " + v.assumption + ": " + v.message;
        return s;
      }()),
      report_(std::move(r)) {}

Rational deterministic_continuous_limit(const Structure& s, const CoefficientTable& c, const UrnSpec& spec,
                                        ColourId i) {
  Rational v = 0;
  for (auto nu : s.roles.ancestors[i]) v += c.c(i, nu) * spec.initial[nu];
  return v;
}

std::vector<LimitVerdict> classify_limits(const UrnSpec& ext, const Structure& s, const CoefficientTable& c,
                                          const ValidationReport& validation) {
  const auto& ex = s.exponents;
  const std::size_t q = ext.q() - 1;
  const ColourId zero = q;
  const Rational& lh = ex.lambda_hat;

  std::vector<ColourId> leaders_at_hat;
  for (auto k : s.roles.leaders)
    if (ex.lambda[k] == lh) leaders_at_hat.push_back(k);

  std::vector<ColourId> dying;
  for (const auto& v : validation.violations)
    if (v.assumption == "A8") dying.insert(dying.end(), v.colours.begin(), v.colours.end());
  const bool a7_failed = validation.status.count("A7") && validation.status.at("A7") == Status::Fail;

  std::vector<LimitVerdict> out(q);
  for (std::size_t i = 0; i < q; ++i) {
    LimitVerdict& v = out[i];
    const Rational& ls = ex.lambda_star[i];
    if (ls < 0 || lh < 0) {
      v.kind = LimitKind::Extinct;
    } else if (ls == 0) {
      v.kind = LimitKind::DeterministicExact;
      const Rational cx = deterministic_continuous_limit(s, c, ext, i);
      v.continuous_value = ScaledPower{cx};
      if (lh > 0) {
        v.value = ScaledPower{cx, lh, Rational(-ex.kappa[i])};
      } else if (ex.kappa_hat0) {
        const Rational cx0 = deterministic_continuous_limit(s, c, ext, zero);
        v.value = ScaledPower{cx, cx0, Rational(-ex.kappa[i], *ex.kappa_hat0)};
      }
    } else if (ls < lh) {
      v.kind = LimitKind::AbsolutelyContinuous;
    } else {
      // Deterministic iff the leader weights of i and of the draw counter are proportional.
      bool proportional = true;
      std::optional<ColourId> pivot;
      for (auto a : leaders_at_hat) {
        if (c.c(zero, a) != 0 && !pivot) pivot = a;
        for (auto b : leaders_at_hat)
          if (c.c(i, a) * c.c(zero, b) != c.c(i, b) * c.c(zero, a)) proportional = false;
      }
      if (proportional && pivot) {
        v.kind = LimitKind::DeterministicExact;
        const Rational gamma = (*ex.gamma)[i];
        v.value = ScaledPower{c.c(i, *pivot) / c.c(zero, *pivot), lh, -gamma};
      } else {
        v.kind = LimitKind::AbsolutelyContinuous;
      }
    }
    for (auto m : dying)
      if (s.graph.precedes_or_equal(m, i)) {
        v.possibly_zero = true;
        v.zero_cause.push_back(m);
      }
    v.theorems_inapplicable = a7_failed;
  }
  return out;
}

Normalization normalization(const UrnSpec& spec, const Structure& s, ColourId i, Mode mode) {
  if (mode == Mode::DrawnDiscrete || mode == Mode::DrawnContinuous) {
    const UrnSpec ext = extend_dummy_iota(spec, i);
    const Structure es = analyze_structure(ext);
    Normalization n = normalization(ext, es, spec.q(), mode == Mode::DrawnDiscrete ? Mode::Discrete : Mode::Continuous);
    n.mode = mode;
    return n;
  }
  const auto& ex = s.exponents;
  Normalization n;
  n.mode = mode;
  if (mode == Mode::Continuous) {
    n.t_pow = ex.kappa[i];
    n.exp_rate = ex.lambda_star[i];
    return n;
  }
  if (ex.lambda_hat > 0) {
    n.n_pow = ex.lambda_star[i] / ex.lambda_hat;
    n.log_pow = (*ex.gamma)[i];
  } else if (ex.lambda_hat == 0 && ex.kappa_hat0) {
    n.n_pow = Rational(ex.kappa[i], *ex.kappa_hat0);
    n.log_pow = 0;
    n.zero_hat_form = true;
    n.note = "lambda_hat = 0: normalization n^(kappa/kappa_hat0), no logarithmic factor";
  } else {
    n.available = false;
    n.note = "no discrete normalization: every colour has lambda <= 0 and none is active at lambda* = 0";
  }
  return n;
}

Analysis analyze(const UrnSpec& spec) {
  Analysis a;
  a.spec = spec;
  a.validation = validate(spec);
  if (!a.validation.admissible()) throw InadmissibleSpec(a.validation);
  a.structure = analyze_structure(spec);
  a.extended = extend_dummy_zero(spec);
  a.extended_structure = analyze_structure(a.extended);
  a.coefficients = compute_coefficients(a.extended_structure, a.extended.activity);
  a.verdicts = classify_limits(a.extended, a.extended_structure, a.coefficients, a.validation);
  for (std::size_t i = 0; i < spec.q(); ++i) {
    a.discrete.push_back(normalization(spec, a.structure, i, Mode::Discrete));
    a.continuous.push_back(normalization(spec, a.structure, i, Mode::Continuous));
  }
  return a;
}

DrawnPrediction predicted_constants_drawn(const Analysis& a, ColourId i) {
  const auto& ex = a.structure.exponents;
  const Rational& ai = a.spec.activity[i];
  const Rational& ls = ex.lambda_star[i];
  const int k = ex.kappa[i];
  DrawnPrediction d;
  if (ai == 0) {
    d.constant = ScaledPower{Rational(0)};
    d.expression = "0 (colour is never drawn)";
    d.normalization.available = false;
    return d;
  }
  d.normalization = normalization(a.spec, a.structure, i, Mode::DrawnDiscrete);
  const LimitVerdict& v = a.verdicts[i];
  const bool det = v.kind == LimitKind::DeterministicExact && v.value.has_value();

  if (ls > 0) {
    d.ratio = ai / ls;
    d.expression = "(" + to_string(ai / ls) + ") * hatX_" + std::to_string(i);
    if (det) d.constant = ScaledPower{v.value->coef * ai / ls, v.value->base, v.value->exponent};
  } else if (ls == 0 && ex.lambda_hat > 0) {
    const Rational f = ai / (Rational(k + 1) * ex.lambda_hat);
    d.expression = "(" + to_string(f) + ") * hatX_" + std::to_string(i);
    if (det) d.constant = ScaledPower{v.value->coef * f, v.value->base, v.value->exponent};
  } else if (ls == 0 && ex.lambda_hat == 0 && ex.kappa_hat0) {
    const Rational f = ai / Rational(k + 1);
    d.expression = "(" + to_string(f) + ") * X0^(-1/" + std::to_string(*ex.kappa_hat0) + ") * hatX_" +
                   std::to_string(i);
    if (det && v.continuous_value) {
      const Rational cx0 = deterministic_continuous_limit(a.extended_structure, a.coefficients, a.extended, a.dummy());
      d.constant = ScaledPower{f * v.continuous_value->coef, cx0, Rational(-(k + 1), *ex.kappa_hat0)};
    }
  } else {
    d.expression = "no limit: lambda* < 0";
  }
  return d;
}

const char* kind_name(LimitKind k) {
  switch (k) {
    case LimitKind::DeterministicExact: return "DeterministicExact";
    case LimitKind::AbsolutelyContinuous: return "AbsolutelyContinuous";
    case LimitKind::Extinct: return "Extinct";
  }
  return "?";
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Discrete: return "discrete";
    case Mode::Continuous: return "continuous";
    case Mode::DrawnDiscrete: return "drawn-discrete";
    case Mode::DrawnContinuous: return "drawn-continuous";
  }
  return "?";
}

}  // namespace urn
