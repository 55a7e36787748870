#include "urn/laws.hpp"

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

namespace urn {

namespace {

using boost::math::lgamma;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw LawDomainError(what);
}

// E Y^r for integer-valued Y by summing the mass function.
double discrete_moment(const ClosedFormLaw& law, double r, double mean) {
  double sum = 0;
  double mass = 0;
  const long cap = static_cast<long>(200 * (mean + 10));
  for (long k = 0; k <= cap; ++k) {
    const double p = *pmf(law, k);
    mass += p;
    sum += (k == 0 ? (r == 0 ? 1.0 : 0.0) : std::pow(static_cast<double>(k), r)) * p;
    if (k > mean && 1 - mass < 1e-17 && p * std::pow(static_cast<double>(k), r) < 1e-18 * sum) break;
  }
  return sum;
}

// b^r Gamma(a + r)/Gamma(a) * Gamma(c)/Gamma(c + r s), the shape shared by the balanced laws.
double ratio_form(double b, double a, double c, double s, double r) {
  return std::pow(b, r) * std::exp(lgamma(a + r) - lgamma(a) + lgamma(c) - lgamma(c + r * s));
}

}  // namespace

void check_parameters(const ClosedFormLaw& law) {
  std::visit(overloaded{
                 [](const GammaYule& g) { require(g.shape > 0 && g.scale > 0, "GammaYule needs shape, scale > 0"); },
                 [](const DirichletClassical& d) {
                   require(d.b > 0, "DirichletClassical needs b > 0");
                   require(d.colour < d.parameter.size(), "DirichletClassical colour out of range");
                   for (double p : d.parameter) require(p > 0, "DirichletClassical needs every x_i/b > 0");
                   require(d.parameter.size() >= 2, "DirichletClassical needs at least two colours");
                 },
                 [](const BalancedTwoColourMoments& m) {
                   require(m.delta > 0 && m.gamma > 0, "BalancedTwoColourMoments needs delta, gamma > 0");
                   require(std::abs(m.alpha - (m.delta + m.gamma)) <= 1e-12 * m.alpha,
                           "BalancedTwoColourMoments needs alpha = delta + gamma");
                   require(m.x1 > 0 && m.x2 >= 0, "BalancedTwoColourMoments needs x1 > 0, x2 >= 0");
                 },
                 [](const RandomBernoulliMoments& m) {
                   require(m.p > 0 && m.p < 1, "RandomBernoulliMoments needs 0 < p < 1");
                   require(m.x1 > 0 && m.x2 >= 0, "RandomBernoulliMoments needs x1 > 0, x2 >= 0");
                 },
                 [](const MittagLeffler& m) { require(m.p > 0 && m.p < 1, "MittagLeffler needs 0 < p < 1"); },
                 [](const NegBinomialEplusminus& m) { require(m.t > 0, "NegBinomialEplusminus needs t > 0"); },
                 [](const PoissonEminusminus& m) { require(m.t > 0, "PoissonEminusminus needs t > 0"); },
                 [](const E3Moments& m) {
                   require(m.x.size() == 3, "E3Moments needs three initial values");
                   require(m.delta > 0 && m.beta > 0, "E3Moments needs delta, beta > 0");
                   require(m.alpha >= m.delta, "E3Moments needs alpha >= delta");
                   require(m.sigma >= m.alpha + m.beta && m.sigma >= m.delta,
                           "E3Moments needs sigma >= alpha + beta (nonnegative replacements)");
                   require(m.x[0] > 0 && m.x[1] >= 0 && m.x[2] >= 0, "E3Moments needs x1 > 0, x2, x3 >= 0");
                 },
             },
             law);
}

double moment(const ClosedFormLaw& law, double r) {
  check_parameters(law);
  if (r < 0 && !std::holds_alternative<GammaYule>(law))
    throw LawDomainError("negative moment orders are only supported for GammaYule");
  return std::visit(
      overloaded{
          [&](const GammaYule& g) {
            if (r <= -g.shape)
              throw InfiniteMoment("moment of order " + std::to_string(r) + " is infinite for shape " +
                                   std::to_string(g.shape));
            return std::pow(g.scale, r) * std::exp(lgamma(g.shape + r) - lgamma(g.shape));
          },
          [&](const DirichletClassical& d) {
            const double a = d.parameter[d.colour];
            const double total = std::accumulate(d.parameter.begin(), d.parameter.end(), 0.0);
            return ratio_form(d.b, a, total, 1.0, r);
          },
          [&](const BalancedTwoColourMoments& m) {
            return ratio_form(m.delta, m.x1 / m.delta, (m.x1 + m.x2) / m.alpha, m.delta / m.alpha, r);
          },
          [&](const RandomBernoulliMoments& m) { return ratio_form(1.0, m.x1, m.x1 + m.x2, m.p, r); },
          [&](const MittagLeffler& m) { return ratio_form(1.0, 1.0, 1.0, m.p, r); },
          [&](const NegBinomialEplusminus& m) { return discrete_moment(law, r, m.t); },
          [&](const PoissonEminusminus& m) { return discrete_moment(law, r, 1 - std::exp(-m.t)); },
          [&](const E3Moments& m) {
            const double total = m.x[0] + m.x[1] + m.x[2];
            const double factor = m.alpha > m.delta ? m.alpha * m.beta / (m.alpha - m.delta) : m.alpha * m.beta / m.sigma;
            return ratio_form(factor, m.x[0] / m.alpha, total / m.sigma, m.alpha / m.sigma, r);
          },
      },
      law);
}

bool is_discrete(const ClosedFormLaw& law) {
  return std::holds_alternative<NegBinomialEplusminus>(law) || std::holds_alternative<PoissonEminusminus>(law);
}

std::optional<double> cdf(const ClosedFormLaw& law, double y) {
  check_parameters(law);
  if (const auto* g = std::get_if<GammaYule>(&law)) return y <= 0 ? 0.0 : boost::math::gamma_p(g->shape, y / g->scale);
  if (const auto* d = std::get_if<DirichletClassical>(&law)) {
    const double a = d->parameter[d->colour];
    const double rest = std::accumulate(d->parameter.begin(), d->parameter.end(), 0.0) - a;
    const double u = y / d->b;
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    return boost::math::ibeta(a, rest, u);
  }
  if (is_discrete(law)) {
    if (y < 0) return 0.0;
    double sum = 0;
    for (long k = 0; k <= static_cast<long>(std::floor(y)); ++k) sum += *pmf(law, k);
    return std::min(sum, 1.0);
  }
  return std::nullopt;
}

std::optional<double> pmf(const ClosedFormLaw& law, long k) {
  if (k < 0) return 0.0;
  if (const auto* nb = std::get_if<NegBinomialEplusminus>(&law)) {
    const double p = 2 / (nb->t + 2);
    return static_cast<double>(k + 1) * p * p * std::pow(1 - p, static_cast<double>(k));
  }
  if (const auto* po = std::get_if<PoissonEminusminus>(&law)) {
    boost::math::poisson_distribution<> d(-std::expm1(-po->t));
    return boost::math::pdf(d, static_cast<double>(k));
  }
  return std::nullopt;
}

bool has_distribution(const ClosedFormLaw& law) {
  return is_discrete(law) || std::holds_alternative<GammaYule>(law) || std::holds_alternative<DirichletClassical>(law);
}

std::string law_name(const ClosedFormLaw& law) {
  return std::visit(overloaded{
                        [](const GammaYule&) { return "GammaYule"; },
                        [](const DirichletClassical&) { return "DirichletClassical"; },
                        [](const BalancedTwoColourMoments&) { return "BalancedTwoColourMoments"; },
                        [](const RandomBernoulliMoments&) { return "RandomBernoulliMoments"; },
                        [](const MittagLeffler&) { return "MittagLeffler"; },
                        [](const NegBinomialEplusminus&) { return "NegBinomialEplusminus"; },
                        [](const PoissonEminusminus&) { return "PoissonEminusminus"; },
                        [](const E3Moments&) { return "E3Moments"; },
                    },
                    law);
}

std::string law_text(const ClosedFormLaw& law) {
  std::ostringstream os;
  os.precision(12);
  std::visit(overloaded{
                 [&](const GammaYule& g) { os << "Gamma(shape=" << g.shape << ", scale=" << g.scale << ")"; },
                 [&](const DirichletClassical& d) {
                   const double a = d.parameter[d.colour];
                   const double rest = std::accumulate(d.parameter.begin(), d.parameter.end(), 0.0) - a;
                   os << d.b << " * Beta(" << a << ", " << rest << ")";
                 },
                 [&](const BalancedTwoColourMoments& m) {
                   os << "balanced two-colour limit (delta=" << m.delta << ", gamma=" << m.gamma
                      << ", alpha=" << m.alpha << ", x=(" << m.x1 << ", " << m.x2 << "))";
                 },
                 [&](const RandomBernoulliMoments& m) {
                   os << "random-Bernoulli limit (p=" << m.p << ", x=(" << m.x1 << ", " << m.x2 << "))";
                 },
                 [&](const MittagLeffler& m) { os << "Mittag-Leffler(" << m.p << ")"; },
                 [&](const NegBinomialEplusminus& m) { os << "NegBin(2, " << 2 / (m.t + 2) << ")"; },
                 [&](const PoissonEminusminus& m) { os << "Poisson(" << -std::expm1(-m.t) << ")"; },
                 [&](const E3Moments& m) {
                   os << "three-colour limit (alpha=" << m.alpha << ", beta=" << m.beta << ", delta=" << m.delta
                      << ", sigma=" << m.sigma << ")";
                 },
             },
             law);
  return os.str();
}

}  // namespace urn
