#include "urn/urn_model.hpp"

#include "urn/structure.hpp"

#include <algorithm>
#include <set>

namespace urn {

bool ReplacementRow::is_zero() const {
  for (const auto& a : atoms)
    for (const auto& x : a.v)
      if (x != 0) return false;
  return true;
}

std::string UrnSpec::name(ColourId i) const {
  if (i < labels.size() && !labels[i].empty()) return labels[i] + " (" + std::to_string(i) + ")";
  return std::to_string(i);
}

MeanMatrix mean_matrix(const UrnSpec& spec) {
  const auto q = static_cast<Eigen::Index>(spec.q());
  MeanMatrix r = zero_matrix(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (const auto& atom : spec.rows[i].atoms)
      for (Eigen::Index j = 0; j < q; ++j) r(i, j) += atom.p * atom.v[j];
  return r;
}

bool ValidationReport::passed(const std::string& id) const {
  auto it = status.find(id);
  return it != status.end() && it->second == Status::Pass;
}

bool ValidationReport::admissible() const {
  return passed("A1") && passed("A2") && passed("A3") && passed("A5'");
}

bool ValidationReport::analyzable() const { return admissible() && passed("A0"); }

namespace {

bool nonneg_integer(const Rational& x) { return x >= 0 && is_integer(x); }

}  // namespace

ValidationReport validate(const UrnSpec& spec) {
  const std::size_t q = spec.q();
  ValidationReport rep;
  auto fail = [&](const std::string& id, std::vector<ColourId> cols, std::string msg) {
    rep.status[id] = Status::Fail;
    rep.violations.push_back({id, std::move(cols), std::move(msg)});
  };
  for (const char* id : {"A1", "A2", "A3", "A4", "A5'", "A8", "A+"}) rep.status[id] = Status::Pass;

  Rational act = 0;
  for (std::size_t i = 0; i < q; ++i) act += spec.activity[i] * spec.initial[i];
  if (act <= 0) fail("A1", {}, "initial total activity sum a_i*x_i is 0; the urn has no dynamics");

  for (std::size_t i = 0; i < q; ++i)
    if (spec.activity[i] == 0 && !spec.rows[i].is_zero())
      fail("A2", {i}, "colour " + spec.name(i) + " has activity 0 but a nonzero replacement row");

  for (std::size_t i = 0; i < q; ++i) {
    if (spec.initial[i] > 0) continue;
    bool fed = false;
    for (std::size_t j = 0; j < q && !fed; ++j) {
      if (j == i) continue;
      for (const auto& atom : spec.rows[j].atoms)
        if (atom.v[i] > 0) fed = true;
    }
    if (!fed) fail("A3", {i}, "colour " + spec.name(i) + " starts empty and no other colour can add it");
  }

  // Subtraction condition, per colour i (column i of every row).
  rep.clause.assign(q, ClauseEvidence::Violated);
  for (std::size_t i = 0; i < q; ++i) {
    bool clause_a = true, clause_b = nonneg_integer(spec.initial[i]);
    std::optional<Rational> bad_diag;
    std::optional<ColourId> bad_off;
    for (std::size_t j = 0; j < q; ++j)
      for (const auto& atom : spec.rows[j].atoms) {
        const Rational& x = atom.v[i];
        if (x < 0) clause_a = false;
        if (j == i) {
          if (!(nonneg_integer(x) || x == -1)) clause_b = false;
          if (x < 0 && x != -1) bad_diag = x;
        } else {
          if (!nonneg_integer(x)) clause_b = false;
          if (x < 0) bad_off = j;
        }
        if (x < 0 && j == i && std::find(rep.q_minus.begin(), rep.q_minus.end(), i) == rep.q_minus.end())
          rep.q_minus.push_back(i);
      }
    if (!clause_a) rep.status["A+"] = Status::Fail;

    const auto claim = spec.claimed[i];
    if (claim == Clause::B && clause_b)
      rep.clause[i] = ClauseEvidence::ClauseB;
    else if (clause_a && claim != Clause::B)
      rep.clause[i] = ClauseEvidence::ClauseA;
    else if (clause_b && claim != Clause::A)
      rep.clause[i] = ClauseEvidence::ClauseB;

    if (rep.clause[i] != ClauseEvidence::Violated) continue;
    std::string msg;
    if (claim && (clause_a || clause_b)) {
      msg = std::string("colour ") + spec.name(i) + " claims clause (" + (*claim == Clause::A ? "a" : "b") +
            ") but only clause (" + (clause_a ? "a" : "b") + ") holds";
    } else if (bad_off) {
      msg = "colour " + spec.name(i) + " can lose balls when colour " + spec.name(*bad_off) +
            " is drawn; only the drawn colour may be removed";
    } else if (bad_diag) {
      msg = "colour " + spec.name(i) + " has diagonal replacement " + to_string(*bad_diag) +
            "; the only negative value allowed is -1. If all its counts and additions are multiples of b = " +
            to_string(-*bad_diag) + ", divide colour " + std::to_string(i) + "'s counts and column by b and multiply a_" +
            std::to_string(i) + " by b";
    } else {
      msg = "colour " + spec.name(i) + " has negative replacements, so its initial count and every addition "
            "must be nonnegative integers";
    }
    fail("A5'", {i}, msg);
  }

  // Balance: a . v equal for every atom of every active row.
  std::optional<Rational> beta;
  bool balanced = true;
  rep.zero_dynamics = true;
  for (std::size_t i = 0; i < q && balanced; ++i) {
    if (spec.activity[i] == 0) continue;
    for (const auto& atom : spec.rows[i].atoms) {
      Rational s = 0;
      for (std::size_t j = 0; j < q; ++j) s += spec.activity[j] * atom.v[j];
      if (!beta) beta = s;
      if (s != *beta) balanced = false;
    }
  }
  for (std::size_t i = 0; i < q; ++i)
    if (spec.activity[i] > 0 && !spec.rows[i].is_zero()) rep.zero_dynamics = false;
  if (balanced && beta) rep.balance = beta;

  const MeanMatrix mean = mean_matrix(spec);
  for (auto m : rep.q_minus) {
    bool minimal = true;
    for (std::size_t j = 0; j < q; ++j)
      if (j != m && mean(j, m) > 0) minimal = false;
    if (minimal) fail("A8", {m}, "minimal colour " + spec.name(m) + " can remove balls of its own colour");
  }

  try {
    ColourGraph g = build_graph(mean);
    rep.status["A0"] = Status::Pass;
    ExponentTable ex = compute_exponents(g, mean, spec.activity);
    rep.status["A7"] = Status::Pass;
    for (auto m : rep.q_minus)
      if (ex.lambda_star[m] <= 0)
        fail("A7", {m}, "colour " + spec.name(m) + " can remove balls but lambda* = " + to_string(ex.lambda_star[m]) +
                            " <= 0; the limit theorems do not cover this urn");
  } catch (const NonTriangular& e) {
    fail("A0", e.cycle(), e.what());
    rep.status["A7"] = Status::NotEvaluated;
  }

  const bool base = rep.passed("A0") && rep.passed("A1") && rep.passed("A2") && rep.passed("A3");
  rep.tenability_guaranteed = (rep.balance && *rep.balance >= 0) || (base && rep.passed("A8"));
  return rep;
}

UrnSpec mean_urn(const UrnSpec& spec) {
  for (const auto& row : spec.rows)
    for (const auto& atom : row.atoms)
      for (const auto& x : atom.v)
        if (x < 0) throw std::domain_error("the mean urn is defined only for urns without subtractions");
  const MeanMatrix r = mean_matrix(spec);
  UrnSpec out = spec;
  for (std::size_t i = 0; i < spec.q(); ++i) {
    Atom a{Rational(1), {}};
    for (std::size_t j = 0; j < spec.q(); ++j) a.v.push_back(r(i, j));
    out.rows[i].atoms = {a};
  }
  return out;
}

nlohmann::json to_json(const ValidationReport& rep) {
  using nlohmann::json;
  json out = json::object();
  json st = json::object();
  for (const auto& [id, s] : rep.status)
    st[id] = s == Status::Pass ? "pass" : s == Status::Fail ? "fail" : "not-evaluated";
  st["A6"] = rep.tenability_guaranteed ? "guaranteed" : "runtime-checked";
  out["assumptions"] = st;
  json v = json::array();
  for (const auto& x : rep.violations) v.push_back(json{{"assumption", x.assumption}, {"colours", x.colours}, {"message", x.message}});
  out["violations"] = v;
  out["balance"] = rep.balance ? json(to_string(*rep.balance)) : json(nullptr);
  out["q_minus"] = rep.q_minus;
  json cl = json::array();
  for (std::size_t i = 0; i < rep.clause.size(); ++i)
    cl.push_back(rep.clause[i] == ClauseEvidence::ClauseA   ? "a"
                 : rep.clause[i] == ClauseEvidence::ClauseB ? "b"
                                                            : "violated");
  out["subtraction_clause"] = cl;
  if (rep.zero_dynamics) out["note"] = "every active replacement row is zero";
  return out;
}

}  // namespace urn
