#include "urn/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace urn::stats {

namespace {

constexpr std::size_t kMinSamples = 100;

void require_samples(std::size_t n) {
  if (n < kMinSamples)
    throw InsufficientSamples("need at least " + std::to_string(kMinSamples) + " samples, got " +
                              std::to_string(n));
}

}  // namespace

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  // Welford
  double mean = 0, m2 = 0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  s.mean = mean;
  if (k > 1) {
    s.variance = m2 / static_cast<double>(k - 1);
    s.se = std::sqrt(s.variance / static_cast<double>(k));
  }
  return s;
}

TestResult chi_square(const std::vector<long>& samples, const std::function<double(long)>& pmf,
                      double min_expected) {
  require_samples(samples.size());
  const double n = static_cast<double>(samples.size());
  std::map<long, double> observed;
  long max_seen = 0;
  for (long s : samples) {
    if (s < 0) throw std::invalid_argument("chi_square: negative sample");
    observed[s] += 1;
    max_seen = std::max(max_seen, s);
  }

  struct Cell {
    double expected = 0, observed = 0;
  };
  std::vector<Cell> cells;
  Cell current;
  double mass = 0;
  for (long k = 0;; ++k) {
    const double p = pmf(k);
    mass += p;
    current.expected += n * p;
    if (auto it = observed.find(k); it != observed.end()) current.observed += it->second;
    const double tail = n * std::max(0.0, 1.0 - mass);
    if (current.expected >= min_expected) {
      cells.push_back(current);
      current = Cell{};
    }
    if (k >= max_seen && tail < min_expected) break;
    if (k > max_seen + 1'000'000) break;
  }
  // Upper tail absorbs everything past the last cell boundary.
  double beyond = 0;
  for (const auto& [k, c] : observed) beyond += c;
  for (const auto& c : cells) beyond -= c.observed;
  current.observed = beyond;
  current.expected += n * std::max(0.0, 1.0 - mass);
  if (current.expected >= min_expected || cells.empty()) {
    cells.push_back(current);
  } else {
    cells.back().expected += current.expected;
    cells.back().observed += current.observed;
  }

  TestResult r;
  r.bins = cells.size();
  for (const auto& c : cells) {
    const double d = c.observed - c.expected;
    r.statistic += d * d / c.expected;
  }
  r.dof = static_cast<int>(cells.size()) - 1;
  r.p_value = r.dof > 0 ? boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0) : 1.0;
  return r;
}

double kolmogorov_q(double x) {
  if (x <= 0) return 1;
  if (x < 0.2) return 1;  // the alternating series below is useless this close to 0
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

TestResult kolmogorov_smirnov(std::vector<double> samples, const std::function<double(double)>& cdf) {
  require_samples(samples.size());
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
  }
  TestResult r;
  r.statistic = d;
  // Stephens' small-sample correction.
  const double sn = std::sqrt(n);
  r.p_value = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
  return r;
}

}  // namespace urn::stats
