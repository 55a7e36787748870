#include "urn/structure.hpp"

#include <algorithm>
#include <string>

namespace urn {

namespace {

std::string cycle_message(const std::vector<ColourId>& cycle) {
  std::string s = "colour graph has a directed cycle:";
  for (auto c : cycle) s += " " + std::to_string(c);
  if (!cycle.empty()) s += " " + std::to_string(cycle.front());
  return s;
}

}  // namespace

NonTriangular::NonTriangular(std::vector<ColourId> cycle)
    : std::runtime_error(cycle_message(cycle)), cycle_(std::move(cycle)) {}

ColourGraph build_graph(const MeanMatrix& mean) {
  const std::size_t q = static_cast<std::size_t>(mean.rows());
  ColourGraph g;
  g.q = q;
  g.children.assign(q, {});
  g.parents.assign(q, {});
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      if (i != j && mean(i, j) > 0) {
        g.children[i].push_back(j);
        g.parents[j].push_back(i);
      }

  std::vector<std::size_t> indeg(q);
  std::vector<ColourId> ready;
  for (std::size_t i = 0; i < q; ++i) {
    indeg[i] = g.parents[i].size();
    if (indeg[i] == 0) ready.push_back(i);
  }
  // Smallest index first keeps the order canonical.
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    ColourId i = *it;
    ready.erase(it);
    g.topo.push_back(i);
    for (auto c : g.children[i])
      if (--indeg[c] == 0) ready.push_back(c);
  }

  if (g.topo.size() != q) {
    // Every leftover vertex has a leftover parent; walk parents until a repeat.
    ColourId start = 0;
    while (indeg[start] == 0) ++start;
    std::vector<int> seen(q, -1);
    std::vector<ColourId> walk;
    ColourId v = start;
    while (seen[v] < 0) {
      seen[v] = static_cast<int>(walk.size());
      walk.push_back(v);
      for (auto p : g.parents[v])
        if (indeg[p] > 0) {
          v = p;
          break;
        }
    }
    std::vector<ColourId> cycle(walk.begin() + seen[v], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    auto m = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), m, cycle.end());
    throw NonTriangular(cycle);
  }

  g.reaches.assign(q, std::vector<bool>(q, false));
  for (auto it = g.topo.rbegin(); it != g.topo.rend(); ++it) {
    ColourId i = *it;
    for (auto c : g.children[i]) {
      g.reaches[i][c] = true;
      for (std::size_t k = 0; k < q; ++k)
        if (g.reaches[c][k]) g.reaches[i][k] = true;
    }
  }
  for (std::size_t i = 0; i < q; ++i)
    if (g.parents[i].empty()) g.minimal.push_back(i);
  return g;
}

ExponentTable compute_exponents(const ColourGraph& graph, const MeanMatrix& mean,
                                const std::vector<Rational>& activity) {
  const std::size_t q = graph.q;
  ExponentTable t;
  t.lambda.resize(q);
  t.lambda_star.resize(q);
  t.kappa.assign(q, 0);
  for (std::size_t i = 0; i < q; ++i) t.lambda[i] = activity[i] * mean(i, i);

  std::vector<int> chain(q, 0);
  for (auto i : graph.topo) {
    Rational ls = t.lambda[i];
    for (auto j : graph.parents[i]) ls = std::max(ls, t.lambda_star[j]);
    t.lambda_star[i] = ls;
    int best = 0;
    for (auto j : graph.parents[i])
      if (t.lambda_star[j] == ls) best = std::max(best, chain[j]);
    chain[i] = best + (t.lambda[i] == ls ? 1 : 0);
    t.kappa[i] = chain[i] - 1;
  }

  t.lambda_hat = *std::max_element(t.lambda.begin(), t.lambda.end());
  for (std::size_t i = 0; i < q; ++i)
    if (t.lambda_star[i] == t.lambda_hat) t.kappa_hat = std::max(t.kappa_hat, t.kappa[i]);

  if (t.lambda_hat == 0) {
    std::optional<int> best;
    for (std::size_t i = 0; i < q; ++i)
      if (activity[i] > 0 && t.lambda_star[i] == 0) best = std::max(best.value_or(0), t.kappa[i]);
    if (best) t.kappa_hat0 = *best + 1;
  } else if (t.lambda_hat > 0) {
    std::vector<Rational> gamma(q);
    for (std::size_t i = 0; i < q; ++i)
      gamma[i] = Rational(t.kappa[i]) - Rational(t.kappa_hat) * t.lambda_star[i] / t.lambda_hat;
    t.gamma = std::move(gamma);
  }
  return t;
}

RoleTable classify_roles(const ExponentTable& ex, const ColourGraph& graph) {
  const std::size_t q = graph.q;
  RoleTable r;
  r.role.resize(q);
  r.ancestors.assign(q, {});
  for (std::size_t i = 0; i < q; ++i) {
    if (ex.lambda[i] != ex.lambda_star[i])
      r.role[i] = Role::Follower;
    else
      r.role[i] = ex.kappa[i] == 0 ? Role::Leader : Role::Subleader;
    if (r.role[i] == Role::Leader) r.leaders.push_back(i);
  }

  for (auto nu : r.leaders) {
    const Rational& L = ex.lambda[nu];
    // Longest count of lambda == L colours on a path from nu, per colour.
    std::vector<int> h(q, 0);
    h[nu] = 1;
    for (auto k : graph.topo) {
      if (k == nu || !graph.precedes(nu, k) || ex.lambda_star[k] != L) continue;
      int best = 0;
      for (auto j : graph.parents[k])
        if (h[j] > 0) best = std::max(best, h[j]);
      if (best > 0) h[k] = best + (ex.lambda[k] == L ? 1 : 0);
    }
    for (std::size_t i = 0; i < q; ++i)
      if (h[i] > 0 && h[i] == ex.kappa[i] + 1) r.ancestors[i].push_back(nu);

    for (std::size_t i = 0; i < q; ++i)
      if (ex.lambda_star[i] == L) {
        r.block[nu].push_back(i);
        r.block_by_kappa[nu][ex.kappa[i]].push_back(i);
      }
  }
  return r;
}

UrnSpec extend_dummy_zero(const UrnSpec& spec) {
  UrnSpec out = spec;
  const std::size_t q = spec.q();
  for (std::size_t i = 0; i < q; ++i)
    for (auto& atom : out.rows[i].atoms) atom.v.push_back(spec.activity[i] > 0 ? Rational(1) : Rational(0));
  out.labels.push_back("dummy:0");
  out.activity.push_back(0);
  out.initial.push_back(0);
  out.claimed.push_back(std::nullopt);
  out.rows.push_back(ReplacementRow{{Atom{Rational(1), std::vector<Rational>(q + 1, Rational(0))}}});
  return out;
}

UrnSpec extend_dummy_iota(const UrnSpec& spec, ColourId i) {
  if (i >= spec.q()) throw std::invalid_argument("colour index out of range");
  if (spec.activity[i] == 0)
    throw std::invalid_argument("colour " + std::to_string(i) + " has zero activity; it is never drawn");
  UrnSpec out = spec;
  const std::size_t q = spec.q();
  for (std::size_t k = 0; k < q; ++k)
    for (auto& atom : out.rows[k].atoms) atom.v.push_back(k == i ? Rational(1) : Rational(0));
  out.labels.push_back("dummy:iota" + std::to_string(i));
  out.activity.push_back(0);
  out.initial.push_back(0);
  out.claimed.push_back(std::nullopt);
  out.rows.push_back(ReplacementRow{{Atom{Rational(1), std::vector<Rational>(q + 1, Rational(0))}}});
  return out;
}

Structure analyze_structure(const UrnSpec& spec) {
  Structure s;
  s.mean = mean_matrix(spec);
  s.graph = build_graph(s.mean);
  s.exponents = compute_exponents(s.graph, s.mean, spec.activity);
  s.roles = classify_roles(s.exponents, s.graph);
  return s;
}

const char* role_name(Role r) {
  switch (r) {
    case Role::Leader: return "leader";
    case Role::Subleader: return "subleader";
    case Role::Follower: return "follower";
  }
  return "?";
}

nlohmann::json to_json(const Structure& s, const UrnSpec& spec) {
  using nlohmann::json;
  const auto& ex = s.exponents;
  json out = json::object();
  json adj = json::array();
  for (const auto& ch : s.graph.children) adj.push_back(ch);
  out["adjacency"] = adj;
  out["topological_order"] = s.graph.topo;
  out["minimal"] = s.graph.minimal;
  json colours = json::array();
  for (std::size_t i = 0; i < s.graph.q; ++i) {
    json c = json::object();
    c["index"] = i;
    if (i < spec.labels.size() && !spec.labels[i].empty()) c["label"] = spec.labels[i];
    c["lambda"] = to_string(ex.lambda[i]);
    c["lambda_star"] = to_string(ex.lambda_star[i]);
    c["kappa"] = ex.kappa[i];
    c["gamma"] = ex.gamma ? json(to_string((*ex.gamma)[i])) : json(nullptr);
    c["role"] = role_name(s.roles.role[i]);
    c["ancestors"] = s.roles.ancestors[i];
    colours.push_back(c);
  }
  out["colours"] = colours;
  out["lambda_hat"] = to_string(ex.lambda_hat);
  out["kappa_hat"] = ex.kappa_hat;
  out["kappa_hat0"] = ex.kappa_hat0 ? json(*ex.kappa_hat0) : json(nullptr);
  return out;
}

}  // namespace urn
