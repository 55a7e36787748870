#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <string>
#include <string_view>

namespace urn {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

// Storage only: Boost 1.74 cannot instantiate Eigen products over cpp_rational.
using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Accepts "3", "-3/4", "0.125", "1e-3", "2.5E2". Decimals convert exactly.
// Throws std::invalid_argument on malformed text or zero denominator.
Rational parse_rational(std::string_view text);

// Lowest terms; integers print without a denominator.
std::string to_string(const Rational& r);

double to_double(const Rational& r);
bool is_integer(const Rational& r);

// r^e for integer e; throws std::domain_error for 0^negative.
Rational pow_int(const Rational& r, long e);

RationalMatrix zero_matrix(Eigen::Index rows, Eigen::Index cols);

}  // namespace urn
