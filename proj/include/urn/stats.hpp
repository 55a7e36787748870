#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace urn::stats {

struct Summary {
  std::size_t count = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double se = 0;        // standard error of the mean
};

Summary summarize(const std::vector<double>& xs);

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TestResult {
  double statistic = 0;
  double p_value = 0;
  int dof = 0;          // chi-square only
  std::size_t bins = 0; // chi-square only
};

// Pearson chi-square against a pmf on 0, 1, 2, ...; adjacent cells are merged
// left to right until each expects at least min_expected, the last cell is the
// upper tail. Requires at least 100 samples.
TestResult chi_square(const std::vector<long>& samples, const std::function<double(long)>& pmf,
                      double min_expected = 5);

// One-sample Kolmogorov-Smirnov against a continuous cdf. Requires at least 100 samples.
TestResult kolmogorov_smirnov(std::vector<double> samples, const std::function<double(double)>& cdf);

// P(K > x) for the Kolmogorov distribution.
double kolmogorov_q(double x);

}  // namespace urn::stats
