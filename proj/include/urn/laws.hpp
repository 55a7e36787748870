#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace urn {

// Gamma(shape, scale): limit of e^{-bt} X(t) for a Yule colour with x0 = shape * scale, b = scale.
struct GammaYule {
  double shape, scale;
};
// Marginal of the classical urn limit X_ni/n: b * Beta(x_i/b, sum_{j != i} x_j/b).
struct DirichletClassical {
  std::vector<double> parameter;  // x / b
  double b;
  std::size_t colour;
};
// Limit of X_n1/n^{delta/alpha} in the urn ((delta, gamma), (0, alpha)), alpha = delta + gamma.
struct BalancedTwoColourMoments {
  double delta, gamma, alpha, x1, x2;
};
// Limit of X_n1/n^p in the urn ((xi, 1 - xi), (0, 1)), xi ~ Bernoulli(p).
struct RandomBernoulliMoments {
  double p, x1, x2;
};
// Moments Gamma(r + 1)/Gamma(1 + r p).
struct MittagLeffler {
  double p;
};
// B(t) of the urn ((0, 1), (0, +-1)) from (1, 0): NegBin(2, 2/(t + 2)).
struct NegBinomialEplusminus {
  double t;
};
// B(t) of the urn ((0, 1), (0, -1)) from (1, 0): Poisson(1 - e^{-t}).
struct PoissonEminusminus {
  double t;
};
// Limit of colour 2 in the balanced 3-colour urn ((alpha, beta, s-alpha-beta), (0, delta, s-delta), (0, 0, s)),
// normalized by n^{alpha/s} (alpha > delta) or n^{alpha/s} log n (alpha == delta).
struct E3Moments {
  double alpha, beta, delta, sigma;
  std::vector<double> x;
};

using ClosedFormLaw = std::variant<GammaYule, DirichletClassical, BalancedTwoColourMoments, RandomBernoulliMoments,
                                   MittagLeffler, NegBinomialEplusminus, PoissonEminusminus, E3Moments>;

class InfiniteMoment : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class LawDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws LawDomainError when parameters are outside the law's domain.
void check_parameters(const ClosedFormLaw& law);

// E Y^r. Throws InfiniteMoment outside the finite range, LawDomainError for r < 0 where unsupported.
double moment(const ClosedFormLaw& law, double r);

bool is_discrete(const ClosedFormLaw& law);
// Distribution function, when known in closed form.
std::optional<double> cdf(const ClosedFormLaw& law, double y);
// Mass function on 0, 1, 2, ... for discrete laws.
std::optional<double> pmf(const ClosedFormLaw& law, long k);
bool has_distribution(const ClosedFormLaw& law);

std::string law_name(const ClosedFormLaw& law);
std::string law_text(const ClosedFormLaw& law);

}  // namespace urn
