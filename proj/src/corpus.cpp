#include "urn/corpus.hpp"

namespace urn {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

void require(bool ok, const std::string& what) {
  if (!ok) throw CorpusError(what);
}

// Deterministic rows, unit activities.
UrnSpec deterministic(const Matrix& m, std::vector<Rational> x) {
  UrnSpec s;
  const std::size_t q = m.size();
  s.labels.assign(q, "");
  s.activity.assign(q, Rational(1));
  s.initial = std::move(x);
  for (const auto& row : m) s.rows.push_back(ReplacementRow{{Atom{1, row}}});
  s.claimed.assign(q, std::nullopt);
  return s;
}

UrnSpec blank(std::size_t q) {
  UrnSpec s;
  s.labels.assign(q, "");
  s.activity.assign(q, Rational(1));
  s.initial.assign(q, Rational(0));
  s.rows.assign(q, ReplacementRow{});
  s.claimed.assign(q, std::nullopt);
  return s;
}

const Rational& get(const Params& p, const std::string& key) { return p.at(key); }

UrnSpec e2(const Params& p) {
  const Rational &d = get(p, "delta"), &g = get(p, "gamma"), &a = get(p, "alpha");
  const Rational &x1 = get(p, "x1"), &x2 = get(p, "x2");
  require(d > 0 && g > 0, "E2 needs delta > 0 and gamma > 0");
  require(x1 > 0 && x2 >= 0, "E2 needs x1 > 0 and x2 >= 0");
  require(a >= 0 || (a == -1 && is_integer(g) && is_integer(x2)),
          "E2 needs alpha >= 0, or alpha = -1 with integer gamma and x2");
  UrnSpec s = deterministic({{d, g}, {0, a}}, {x1, x2});
  s.labels = {"white", "black"};
  return s;
}

UrnSpec bernoulli_two_colour(const Rational& p, const Rational& alpha, const Rational& x1, const Rational& x2) {
  require(p > 0 && p < 1, "p must lie in (0, 1)");
  UrnSpec s = blank(2);
  s.labels = {"white", "black"};
  s.initial = {x1, x2};
  s.rows[0].atoms = {Atom{p, {alpha + 1, 0}}, Atom{1 - p, {alpha, 1}}};
  s.rows[1].atoms = {Atom{1, {0, alpha + 1}}};
  return s;
}

std::vector<CorpusTemplate> build_templates() {
  std::vector<CorpusTemplate> t;

  t.push_back({"Eclassical", "classical two-colour urn: each draw adds b balls of the drawn colour",
               {{"b", "1"}, {"x1", "1"}, {"x2", "1"}}, [](const Params& p) {
                 const Rational& b = get(p, "b");
                 require(b > 0, "Eclassical needs b > 0");
                 require(get(p, "x1") > 0 && get(p, "x2") > 0, "Eclassical needs positive initial counts");
                 return deterministic({{b, 0}, {0, b}}, {get(p, "x1"), get(p, "x2")});
               }});

  t.push_back({"ED", "diagonal urn with different rates; the second limit has no finite mean when x1 <= delta",
               {{"alpha", "2"}, {"delta", "1"}, {"x1", "1"}, {"x2", "1"}}, [](const Params& p) {
                 const Rational &a = get(p, "alpha"), &d = get(p, "delta");
                 require(a > d && d > 0, "ED needs alpha > delta > 0");
                 require(get(p, "x1") > 0 && get(p, "x2") > 0, "ED needs positive initial counts");
                 return deterministic({{a, 0}, {0, d}}, {get(p, "x1"), get(p, "x2")});
               }});

  const std::vector<std::pair<std::string, std::string>> e2_defaults{
      {"delta", "2"}, {"gamma", "1"}, {"alpha", "1"}, {"x1", "1"}, {"x2", "0"}};
  t.push_back({"E2", "two-colour triangular urn ((delta, gamma), (0, alpha))", e2_defaults, e2});
  t.push_back({"E2_less", "E2 with alpha < delta: both limits deterministic at rate n", e2_defaults, [](const Params& p) {
                 require(get(p, "alpha") < get(p, "delta"), "E2_less needs alpha < delta");
                 return e2(p);
               }});
  t.push_back({"E2_equal", "E2 with alpha = delta: the first colour needs a log n correction",
               {{"delta", "1"}, {"gamma", "1"}, {"alpha", "1"}, {"x1", "1"}, {"x2", "0"}}, [](const Params& p) {
                 require(get(p, "alpha") == get(p, "delta"), "E2_equal needs alpha = delta");
                 return e2(p);
               }});
  t.push_back({"E2_greater", "E2 with alpha > delta: first limit random, second deterministic",
               {{"delta", "1"}, {"gamma", "1"}, {"alpha", "2"}, {"x1", "1"}, {"x2", "0"}}, [](const Params& p) {
                 require(get(p, "alpha") > get(p, "delta"), "E2_greater needs alpha > delta");
                 return e2(p);
               }});
  t.push_back({"E2_balanced", "E2 with alpha = delta + gamma; closed-form moments for the first colour",
               {{"delta", "1"}, {"gamma", "1"}, {"x1", "1"}, {"x2", "0"}}, [](const Params& p) {
                 Params q = p;
                 q["alpha"] = get(p, "delta") + get(p, "gamma");
                 return e2(q);
               }});

  t.push_back({"E2X", "random two-colour triangular urn whose mean urn is E2 with delta = gamma = 1, alpha = 2",
               {{"x1", "1"}, {"x2", "0"}}, [](const Params& p) {
                 require(get(p, "x1") > 0 && get(p, "x2") >= 0, "E2X needs x1 > 0 and x2 >= 0");
                 UrnSpec s = blank(2);
                 s.labels = {"white", "black"};
                 s.initial = {get(p, "x1"), get(p, "x2")};
                 s.rows[0].atoms = {Atom{Rational(1, 2), {2, 1}}, Atom{Rational(1, 2), {0, 1}}};
                 s.rows[1].atoms = {Atom{Rational(1, 2), {0, 3}}, Atom{Rational(1, 2), {0, 1}}};
                 return s;
               }});

  t.push_back({"E2p", "white draw adds white with probability p, else black; black draw adds black",
               {{"p", "1/2"}, {"x1", "1"}, {"x2", "0"}}, [](const Params& p) {
                 require(get(p, "x1") > 0 && get(p, "x2") >= 0, "E2p needs x1 > 0 and x2 >= 0");
                 return bernoulli_two_colour(get(p, "p"), 0, get(p, "x1"), get(p, "x2"));
               }});
  t.push_back({"E2p1", "root cluster of bond percolation on the random recursive tree (E2p from (1, 0))",
               {{"p", "1/2"}}, [](const Params& p) { return bernoulli_two_colour(get(p, "p"), 0, 1, 0); }});

  t.push_back({"Epref", "root cluster of bond percolation on a preferential attachment tree, alpha >= 0",
               {{"alpha", "1"}, {"p", "1/2"}}, [](const Params& p) {
                 require(get(p, "alpha") >= 0, "Epref needs alpha >= 0 (use Epref- for alpha = -1/d)");
                 return bernoulli_two_colour(get(p, "p"), get(p, "alpha"), 1, 0);
               }});

  t.push_back({"Epref-", "percolation on the random d-ary recursive tree, counts scaled by d",
               {{"d", "3"}, {"p", "1/2"}}, [](const Params& p) {
                 const Rational &d = get(p, "d"), &pr = get(p, "p");
                 require(is_integer(d) && d >= 2, "Epref- needs an integer d >= 2");
                 require(pr > 0 && pr < 1, "p must lie in (0, 1)");
                 require(d * pr > 1, "Epref- needs d p > 1");
                 UrnSpec s = blank(2);
                 s.labels = {"white", "black"};
                 s.initial = {d, 0};
                 s.rows[0].atoms = {Atom{pr, {d - 1, 0}}, Atom{1 - pr, {-1, d}}};
                 s.rows[1].atoms = {Atom{1, {0, d - 1}}};
                 return s;
               }});

  t.push_back({"Eprefk", "vertices with k passive edges to the root, one colour per k",
               {{"alpha", "1"}, {"p", "1/2"}, {"q", "3"}}, [](const Params& p) {
                 const Rational &a = get(p, "alpha"), &pr = get(p, "p"), &qr = get(p, "q");
                 require(a >= 0, "Eprefk needs alpha >= 0");
                 require(pr > 0 && pr < 1, "p must lie in (0, 1)");
                 require(is_integer(qr) && qr >= 2 && qr <= 12, "Eprefk needs an integer 2 <= q <= 12");
                 const auto q = static_cast<std::size_t>(numerator(qr).convert_to<long>());
                 UrnSpec s = blank(q);
                 s.initial[0] = 1;
                 for (std::size_t i = 0; i + 1 < q; ++i) {
                   std::vector<Rational> stay(q, Rational(0)), pass(q, Rational(0));
                   stay[i] = a + 1;
                   pass[i] = a;
                   pass[i + 1] = 1;
                   s.rows[i].atoms = {Atom{pr, stay}, Atom{1 - pr, pass}};
                 }
                 std::vector<Rational> last(q, Rational(0));
                 last[q - 1] = a + 1;
                 s.rows[q - 1].atoms = {Atom{1, last}};
                 return s;
               }});

  auto e3 = [](const Params& p) {
    const Rational &a = get(p, "alpha"), &b = get(p, "beta"), &d = get(p, "delta"), &s = get(p, "sigma");
    require(a >= d && d > 0, "E3 needs alpha >= delta > 0");
    require(b > 0, "E3 needs beta > 0");
    require(s >= a + b, "E3 needs sigma >= alpha + beta");
    require(get(p, "x1") > 0, "E3 needs x1 > 0");
    return deterministic({{a, b, s - a - b}, {0, d, s - d}, {0, 0, s}}, {get(p, "x1"), 0, 0});
  };
  t.push_back({"E3", "balanced three-colour triangular urn, alpha > delta",
               {{"alpha", "2"}, {"beta", "1"}, {"delta", "1"}, {"sigma", "4"}, {"x1", "1"}}, e3});
  t.push_back({"E3_equal", "balanced three-colour triangular urn, alpha = delta (log n correction)",
               {{"alpha", "1"}, {"beta", "1"}, {"delta", "1"}, {"sigma", "3"}, {"x1", "1"}}, [e3](const Params& p) {
                 require(get(p, "alpha") == get(p, "delta"), "E3_equal needs alpha = delta");
                 return e3(p);
               }});

  t.push_back({"EcX0", "four colours where the two subtracting colours can die out; limits may vanish",
               {{"alpha", "8"}, {"beta", "6"}, {"gamma", "1"}, {"delta", "3"}}, [](const Params& p) {
                 const Rational &a = get(p, "alpha"), &b = get(p, "beta"), &g = get(p, "gamma"), &d = get(p, "delta");
                 for (const Rational* v : {&a, &b, &g, &d}) require(is_integer(*v) && *v > 0, "EcX0 needs positive integers");
                 const Rational l1 = a / 2 - 1, l2 = b / 2 - 1;
                 require(d == l1 && l1 > l2 && l2 > g && g > 0, "EcX0 needs delta = alpha/2 - 1 > beta/2 - 1 > gamma > 0");
                 UrnSpec s = blank(4);
                 s.initial = {1, 1, 0, 1};
                 for (int e1 = 0; e1 <= 1; ++e1)
                   for (int e2 = 0; e2 <= 1; ++e2) {
                     s.rows[0].atoms.push_back(Atom{Rational(1, 4), {a * e1 - 1, 0, e2, 0}});
                     s.rows[1].atoms.push_back(Atom{Rational(1, 4), {0, b * e1 - 1, e2, 0}});
                   }
                 s.rows[2].atoms = {Atom{1, {0, 0, g, 0}}};
                 s.rows[3].atoms = {Atom{1, {0, 0, 0, d}}};
                 s.meta["suites"] = nlohmann::json::array();
                 s.meta["note"] = "detection only: the limit of colour 3 depends on which subtracting colours survive";
                 return s;
               }});

  t.push_back({"Eplusminus", "white draw adds black; black draw adds or removes a black ball with probability 1/2",
               {}, [](const Params&) {
                 UrnSpec s = blank(2);
                 s.labels = {"white", "black"};
                 s.initial = {1, 0};
                 s.rows[0].atoms = {Atom{1, {0, 1}}};
                 s.rows[1].atoms = {Atom{Rational(1, 2), {0, 1}}, Atom{Rational(1, 2), {0, -1}}};
                 s.meta["suites"] = {"distribution", "martingale"};
                 return s;
               }});
  t.push_back({"Eminusminus", "white draw adds black; black draw removes it", {}, [](const Params&) {
                 UrnSpec s = deterministic({{0, 1}, {0, -1}}, {1, 0});
                 s.labels = {"white", "black"};
                 s.meta["suites"] = {"distribution", "martingale"};
                 return s;
               }});

  t.push_back({"Strict", "strictly triangular: only the first colour is drawn and it adds the second",
               {{"x1", "1"}, {"x2", "0"}}, [](const Params& p) {
                 require(get(p, "x1") > 0 && get(p, "x2") >= 0, "Strict needs x1 > 0 and x2 >= 0");
                 UrnSpec s = deterministic({{0, 1}, {0, 0}}, {get(p, "x1"), get(p, "x2")});
                 s.activity = {1, 0};
                 return s;
               }});
  t.push_back({"Yule", "single colour, each draw adds b balls", {{"b", "1"}, {"x0", "1"}}, [](const Params& p) {
                 require(get(p, "b") > 0 && get(p, "x0") > 0, "Yule needs b > 0 and x0 > 0");
                 return deterministic({{get(p, "b")}}, {get(p, "x0")});
               }});
  return t;
}

}  // namespace

const std::vector<CorpusTemplate>& corpus_templates() {
  static const std::vector<CorpusTemplate> templates = build_templates();
  return templates;
}

const CorpusTemplate& find_template(const std::string& name) {
  for (const auto& t : corpus_templates())
    if (t.name == name) return t;
  throw CorpusError("unknown corpus template '" + name + "'");
}

UrnSpec instantiate(const std::string& name, const std::map<std::string, std::string>& overrides) {
  const CorpusTemplate& t = find_template(name);
  Params params;
  for (const auto& [key, value] : t.defaults) params[key] = parse_rational(value);
  for (const auto& [key, value] : overrides) {
    if (!params.count(key)) throw CorpusError(name + " has no parameter '" + key + "'");
    try {
      params[key] = parse_rational(value);
    } catch (const std::invalid_argument& e) {
      throw CorpusError(name + ": parameter '" + key + "': " + e.what());
    }
  }
  UrnSpec s = t.build(params);
  s.meta["name"] = name;
  nlohmann::json pj = nlohmann::json::object();
  for (const auto& [key, value] : params) pj[key] = to_string(value);
  if (!pj.empty()) s.meta["params"] = pj;
  return s;
}

}  // namespace urn
