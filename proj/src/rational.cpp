#include "urn/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace urn {

namespace {

Integer parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw std::invalid_argument("empty number in '" + std::string(whole) + "'");
  Integer v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad digit in '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

Integer pow10(long e) {
  Integer p = 1;
  for (long k = 0; k < e; ++k) p *= 10;
  return p;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  bool neg = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty number");

  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_digits(trim(text.substr(0, slash)), whole);
    Integer den = parse_digits(trim(text.substr(slash + 1)), whole);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view es = text.substr(e + 1);
      bool eneg = false;
      if (!es.empty() && (es.front() == '-' || es.front() == '+')) {
        eneg = es.front() == '-';
        es.remove_prefix(1);
      }
      Integer ev = parse_digits(es, whole);
      if (ev > 4000) throw std::invalid_argument("exponent out of range in '" + std::string(whole) + "'");
      exponent = ev.convert_to<long>();
      if (eneg) exponent = -exponent;
      text = text.substr(0, e);
    }
    std::string_view ip = text, fp;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      ip = text.substr(0, dot);
      fp = text.substr(dot + 1);
      if (ip.empty() && fp.empty()) throw std::invalid_argument("bad number '" + std::string(whole) + "'");
    }
    Integer mant = ip.empty() ? Integer(0) : parse_digits(ip, whole);
    if (!fp.empty()) mant = mant * pow10(static_cast<long>(fp.size())) + parse_digits(fp, whole);
    exponent -= static_cast<long>(fp.size());
    value = exponent >= 0 ? Rational(mant * pow10(exponent)) : Rational(mant, pow10(-exponent));
  }
  return neg ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  const Integer num = numerator(r);
  const Integer den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

bool is_integer(const Rational& r) { return denominator(r) == 1; }

Rational pow_int(const Rational& r, long e) {
  if (e < 0) {
    if (r == 0) throw std::domain_error("zero to a negative power");
    return pow_int(Rational(1) / r, -e);
  }
  Rational out = 1, base = r;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

RationalMatrix zero_matrix(Eigen::Index rows, Eigen::Index cols) {
  RationalMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = 0;
  return m;
}

}  // namespace urn
