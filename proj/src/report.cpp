#include "urn/limits.hpp"

#include <charconv>

namespace urn {

namespace {

using nlohmann::json;

std::string decimal(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

json power_json(const ScaledPower& p) {
  json j = json::object();
  j["value"] = p.text();
  j["decimal"] = decimal(p.value());
  if (!p.exact()) {
    j["coef"] = to_string(p.coef);
    j["base"] = to_string(p.base);
    j["exponent"] = to_string(p.exponent);
  }
  return j;
}

}  // namespace

json to_json(const Normalization& n) {
  json j = json::object();
  if (!n.available) {
    j["available"] = false;
    j["note"] = n.note;
    return j;
  }
  if (n.mode == Mode::Discrete || n.mode == Mode::DrawnDiscrete) {
    j["n_pow"] = to_string(n.n_pow);
    j["log_pow"] = to_string(n.log_pow);
  } else {
    j["t_pow"] = std::to_string(n.t_pow);
    j["exp_rate"] = to_string(n.exp_rate);
  }
  if (n.zero_hat_form) j["zero_hat_form"] = true;
  return j;
}

json limit_report(const Analysis& a) {
  const std::size_t q = a.spec.q();
  const auto& ex = a.structure.exponents;
  json colours = json::array();
  for (std::size_t i = 0; i < q; ++i) {
    const LimitVerdict& v = a.verdicts[i];
    json c = json::object();
    c["index"] = i;
    if (!a.spec.labels[i].empty()) c["label"] = a.spec.labels[i];
    c["normalization"] = json{{"discrete", to_json(a.discrete[i])}, {"continuous", to_json(a.continuous[i])}};
    if (v.possibly_zero) {
      c["verdict"] = "PossiblyZero";
      c["conditional_verdict"] = kind_name(v.kind);
      c["zero_cause"] = v.zero_cause;
    } else {
      c["verdict"] = kind_name(v.kind);
    }
    if (v.value) c["limit"] = power_json(*v.value);
    if (v.continuous_value) c["continuous_limit"] = power_json(*v.continuous_value);
    json coeffs = json::object(), hats = json::object();
    for (auto nu : a.extended_structure.roles.ancestors[i]) {
      coeffs[std::to_string(nu)] = to_string(a.coefficients.c(i, nu));
      if (ex.lambda_hat > 0)
        hats[std::to_string(nu)] = to_string(hat_coefficient(a.coefficients, a.extended_structure.exponents, i, nu));
    }
    c["coefficients"] = coeffs;
    if (ex.lambda_hat > 0) c["hat_coefficients"] = hats;

    if (a.spec.activity[i] > 0) {
      DrawnPrediction d = predicted_constants_drawn(a, i);
      json dj = json::object();
      dj["normalization"] = to_json(d.normalization);
      if (d.ratio) dj["ratio_to_count"] = to_string(*d.ratio);
      if (d.constant) dj["limit"] = power_json(*d.constant);
      dj["expression"] = d.expression;
      c["drawn"] = dj;
    }
    colours.push_back(c);
  }

  json out = json::object();
  out["colours"] = colours;
  const ColourId z = a.dummy();
  json coeff0 = json::object();
  for (auto nu : a.extended_structure.roles.ancestors[z]) coeff0[std::to_string(nu)] = to_string(a.coefficients.c(z, nu));
  out["draw_counter"] = json{{"lambda_star", to_string(a.extended_structure.exponents.lambda_star[z])},
                             {"kappa", a.extended_structure.exponents.kappa[z]},
                             {"coefficients", coeff0}};
  json caveats = json::array();
  if (a.validation.status.count("A7") && a.validation.status.at("A7") == Status::Fail)
    caveats.push_back("a subtracting colour has lambda* <= 0: the almost-sure limit theorems do not apply; "
                      "only distributional checks are meaningful");
  if (!a.validation.passed("A8"))
    caveats.push_back("a minimal colour can die out: limits hold on the survival event and may be 0");
  if (ex.lambda_hat == 0) {
    bool empty = true;
    for (std::size_t i = 0; i < q; ++i)
      if (ex.kappa_hat0 && ex.kappa[i] == *ex.kappa_hat0) empty = false;
    if (empty) caveats.push_back("lambda_hat = 0 and no colour reaches kappa_hat0: the total ball count is o(n)");
  }
  out["caveats"] = caveats;
  return out;
}

json analysis_report(const Analysis& a) {
  json out = json::object();
  out["spec"] = spec_to_json(a.spec);
  out["validation"] = to_json(a.validation);
  out["structure"] = to_json(a.structure, a.spec);
  out["limits"] = limit_report(a);
  return out;
}

}  // namespace urn
