#pragma once

#include "urn/corpus.hpp"
#include "urn/limits.hpp"
#include "urn/structure.hpp"
#include "urn/urn_model.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace urn::testing {

inline Rational R(std::string_view s) { return parse_rational(s); }
inline Rational R(int v) { return Rational(v); }

// Point-mass urn from an integer-or-rational matrix.
inline UrnSpec point_mass(const std::vector<std::vector<Rational>>& rows, const std::vector<Rational>& x,
                          std::vector<Rational> a = {}) {
  UrnSpec s;
  const std::size_t q = rows.size();
  if (a.empty()) a.assign(q, Rational(1));
  s.labels.assign(q, "");
  s.activity = a;
  s.initial = x;
  s.claimed.assign(q, std::nullopt);
  for (const auto& r : rows) s.rows.push_back(ReplacementRow{{Atom{1, r}}});
  return s;
}

inline bool same_matrix(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

inline std::vector<UrnSpec> corpus_specs() {
  std::vector<UrnSpec> out;
  for (const auto& t : corpus_templates()) out.push_back(instantiate(t.name));
  return out;
}

inline std::vector<Analysis> corpus_analyses() {
  std::vector<Analysis> out;
  for (const auto& s : corpus_specs()) out.push_back(analyze(s));
  return out;
}

inline bool is_balanced(const UrnSpec& s) { return validate(s).balance.has_value(); }

// Random triangular spec with q <= max_q colours: a random colour order, edges only
// forward in it, finite rational atoms, an occasional -1 diagonal. Only specs that
// pass analyze() are returned.
class SpecGenerator {
 public:
  explicit SpecGenerator(std::uint64_t seed) : rng_(seed) {}

  UrnSpec next(std::size_t max_q = 6) {
    for (;;) {
      UrnSpec s = draw(max_q);
      try {
        analyze(s);
        return s;
      } catch (const std::exception&) {
        ++rejected_;
      }
    }
  }

  std::size_t rejected() const { return rejected_; }

 private:
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng_)];
  }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  UrnSpec draw(std::size_t max_q) {
    const std::size_t q = std::uniform_int_distribution<std::size_t>(1, max_q)(rng_);
    std::vector<std::size_t> order(q);
    for (std::size_t i = 0; i < q; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng_);
    std::vector<std::size_t> rank(q);
    for (std::size_t k = 0; k < q; ++k) rank[order[k]] = k;

    static const std::vector<Rational> values = {R(0), R(0), R(1), R(2), R("1/2"), R(3)};
    static const std::vector<Rational> diag = {R(0), R(1), R(1), R(2), R("3/2"), R(3)};
    static const std::vector<Rational> acts = {R(1), R(1), R(2), R("1/2"), R(0)};
    static const std::vector<std::vector<Rational>> splits = {
        {R(1)}, {R("1/2"), R("1/2")}, {R("1/3"), R("2/3")}, {R("1/4"), R("1/4"), R("1/2")}};

    UrnSpec s;
    s.labels.assign(q, "");
    s.claimed.assign(q, std::nullopt);
    for (std::size_t i = 0; i < q; ++i) {
      s.activity.push_back(pick(acts));
      s.initial.push_back(coin(0.6) ? R(1) : R(0));
    }
    s.initial[order[0]] = 1;
    if (s.activity[order[0]] == 0) s.activity[order[0]] = 1;
    for (std::size_t i = 0; i < q; ++i) {
      ReplacementRow row;
      const bool subtract = coin(0.1);
      for (const auto& p : pick(splits)) {
        std::vector<Rational> v(q, Rational(0));
        for (std::size_t j = 0; j < q; ++j) {
          if (j == i) v[j] = subtract ? R(-1) : pick(diag);
          else if (rank[j] > rank[i] && coin(0.5)) v[j] = pick(values);
        }
        row.atoms.push_back(Atom{p, v});
      }
      s.rows.push_back(std::move(row));
    }
    return s;
  }

  std::mt19937_64 rng_;
  std::size_t rejected_ = 0;
};

}  // namespace urn::testing
