// Acceptance criteria 1-10: one PASS/FAIL line each.
//   acceptance [--only N[,N...]] [--known-red N[,N...]]
// Exit status is nonzero iff a criterion fails that is not listed as known red.

#include "support.hpp"
#include "urn/laws.hpp"
#include "urn/simulator.hpp"
#include "urn/stats.hpp"
#include "urn/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace urn;
using namespace urn::testing;

namespace {

constexpr std::uint64_t kSeed = 20261016;
const double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects sub-check results for one criterion.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what;
    }
  }
  Outcome outcome(const std::string& summary) const {
    Outcome o;
    o.pass = failures_ == 0;
    o.detail = summary + "; " + std::to_string(checks_ - failures_) + "/" + std::to_string(checks_) + " sub-checks";
    if (!o.pass) o.detail += "; first failure: " + first_;
    return o;
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::string first_;
};

std::string num(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

bool within_rel(double est, double target, double tol) { return std::abs(est - target) <= tol * std::abs(target); }

Rational exact(const Analysis& a, ColourId i) {
  const auto& v = a.verdicts[i];
  if (v.kind != LimitKind::DeterministicExact || !v.value || !v.value->exact()) return Rational(-999999);
  return *v.value->exact();
}

// Final-state samples of colour i normalized at step n.
std::vector<double> normalized_samples(const Analysis& a, ColourId i, std::uint64_t n, std::size_t reps,
                                       std::uint64_t seed) {
  RunPlan plan;
  plan.steps = n;
  plan.checkpoints = {static_cast<double>(n)};
  plan.replicates = reps;
  plan.rng.master_seed = seed;
  std::vector<double> out;
  for (const auto& tr : run(a.spec, plan))
    out.push_back(normalized(a.discrete[i], tr.final_state.x[i], static_cast<double>(tr.final_state.step)));
  return out;
}

Outcome criterion1() {
  Tally t;
  {
    const Rational d = 2, g = 1, al = 1;
    const Analysis a = analyze(instantiate("E2", {{"delta", "2"}, {"gamma", "1"}, {"alpha", "1"}}));
    t.expect(exact(a, 0) == d * (d - al) / (g + d - al), "E2 alpha<delta colour 1");
    t.expect(exact(a, 1) == d * g / (g + d - al), "E2 alpha<delta colour 2");
    const Analysis b = analyze(instantiate("E2", {{"delta", "3"}, {"gamma", "2"}, {"alpha", "1/2"}}));
    t.expect(exact(b, 0) == Rational(3) * Rational(5, 2) / Rational(9, 2), "E2 alpha<delta (3,2,1/2) colour 1");
    t.expect(exact(b, 1) == Rational(6) / Rational(9, 2), "E2 alpha<delta (3,2,1/2) colour 2");
  }
  {
    const Analysis a = analyze(instantiate("E2", {{"delta", "2"}, {"gamma", "3"}, {"alpha", "2"}}));
    t.expect(exact(a, 0) == Rational(4, 3), "E2 alpha=delta colour 1 = delta^2/gamma");
    t.expect(exact(a, 1) == 2, "E2 alpha=delta colour 2 = delta");
    t.expect((*a.structure.exponents.gamma)[0] == -1 && (*a.structure.exponents.gamma)[1] == 0,
             "E2 alpha=delta gamma exponents (-1, 0)");
  }
  {
    const Analysis a = analyze(instantiate("E2", {{"delta", "1"}, {"gamma", "1"}, {"alpha", "2"}}));
    t.expect(exact(a, 1) == 2, "E2 alpha>delta colour 2 = alpha");
    const Analysis b = analyze(instantiate("E2", {{"delta", "1"}, {"gamma", "2"}, {"alpha", "7/2"}}));
    t.expect(exact(b, 1) == Rational(7, 2), "E2 alpha>delta (1,2,7/2) colour 2 = alpha");
  }
  {
    const Analysis a = analyze(instantiate("E3", {{"alpha", "3"}, {"beta", "2"}, {"delta", "1"}, {"sigma", "6"}}));
    t.expect(a.coefficients.c(1, 0) == Rational(2) / Rational(3 - 1), "E3 c21 = beta/(alpha-delta)");
    const Analysis b = analyze(instantiate("E3_equal", {{"beta", "2"}, {"sigma", "5"}}));
    t.expect(hat_coefficient(b.coefficients, b.extended_structure.exponents, 1, 0) == Rational(2, 5),
             "E3 alpha=delta beta/sigma factor");
  }
  {
    const Analysis a = analyze(instantiate("Eprefk"));
    const auto& ex = a.structure.exponents;
    const Rational lam = Rational(1) + Rational(1, 2);
    t.expect(ex.lambda == std::vector<Rational>{lam, lam, Rational(2)}, "Eprefk lambda = alpha+p");
    t.expect(ex.kappa == std::vector<int>{0, 1, 0}, "Eprefk kappa = (0,1,0)");
    t.expect(a.discrete[0].n_pow == lam / 2 && a.discrete[1].n_pow == lam / 2 && a.discrete[2].n_pow == 1,
             "Eprefk normalization powers");
  }
  int balanced = 0;
  for (const auto& s : corpus_specs()) {
    const auto rep = validate(s);
    if (!rep.balance) continue;
    ++balanced;
    const Structure st = analyze_structure(s);
    const std::string name = s.meta.value("name", "");
    t.expect(st.exponents.lambda_hat == *rep.balance, name + " lambda_hat = beta");
    if (*rep.balance > 0) t.expect(st.exponents.kappa_hat == 0, name + " kappa_hat = 0");
  }
  return t.outcome(std::to_string(balanced) + " balanced corpus specs");
}

Outcome criterion2() {
  Tally t;
  std::vector<std::pair<std::string, UrnSpec>> specs;
  specs.emplace_back("fixture ((1,1),(0,1))", point_mass({{R(1), R(1)}, {R(0), R(1)}}, {R(1), R(0)}));
  for (const auto& s : corpus_specs()) specs.emplace_back(s.meta.value("name", ""), s);

  int used = 0;
  std::size_t components = 0;
  double worst_z = 0;
  std::uint64_t seed = kSeed + 2;
  for (const auto& [name, spec] : specs) {
    std::optional<ExactDistribution> d;
    unsigned n = 8;
    for (; n >= 2 && !d; --n) {
      try {
        d = enumerate_exact(spec, n, 200000);
      } catch (const TreeTooLarge&) {
      }
    }
    if (!d) continue;
    ++n;
    const auto mean = exact_mean(*d);
    RunPlan plan;
    plan.steps = n;
    plan.checkpoints = {static_cast<double>(n)};
    plan.replicates = 100000;
    plan.rng.master_seed = seed++;
    const auto runs = run(spec, plan);
    ++used;
    for (std::size_t j = 0; j < spec.q(); ++j) {
      std::vector<double> xs;
      for (const auto& tr : runs) xs.push_back(tr.final_state.x[j]);
      const auto s = stats::summarize(xs);
      const double target = to_double(mean[j]);
      const double err = std::abs(s.mean - target);
      ++components;
      if (s.se > 0) worst_z = std::max(worst_z, err / s.se);
      t.expect(err <= std::max(3 * s.se, 1e-12 * std::abs(target)),
               name + " n=" + std::to_string(n) + " colour " + std::to_string(j) + ": " + num(s.mean) + " vs " +
                   num(target) + " (se " + num(s.se) + ")");
    }
  }
  // The fixture itself at n = 2.
  const auto f = exact_mean(enumerate_exact(specs[0].second, 2));
  t.expect(f == std::vector<Rational>{Rational(8, 3), Rational(2)}, "E[X_2] = (8/3, 2)");
  t.expect(used >= 10, "at least 10 specs compared");
  return t.outcome(std::to_string(used) + " specs, " + std::to_string(components) + " components, max |z| " +
                   num(worst_z, 3));
}

Outcome criterion3() {
  Tally t;
  const Analysis a = analyze(instantiate("E2", {{"delta", "2"}, {"alpha", "1"}, {"gamma", "1"}}));
  RunPlan plan;
  plan.steps = 100000;
  plan.checkpoints = {1e5};
  plan.replicates = 200;
  plan.rng.master_seed = kSeed + 3;
  const auto runs = run(a.spec, plan);
  std::string summary;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> xs;
    for (const auto& tr : runs) xs.push_back(tr.final_state.x[i] / 1e5);
    const double m = stats::summarize(xs).mean;
    t.expect(within_rel(m, 1.0, 0.02), "colour " + std::to_string(i + 1) + " mean " + num(m));
    summary += (i ? ", " : "") + std::string("X_n") + std::to_string(i + 1) + "/n = " + num(m);
  }
  return t.outcome(summary);
}

Outcome criterion4() {
  Tally t;
  const Analysis a = analyze(instantiate("E2_balanced"));  // delta = gamma = 1, alpha = 2, x = (1, 0)
  const auto ys = normalized_samples(a, 0, 100000, 10000, kSeed + 4);
  std::vector<double> sq;
  for (double y : ys) sq.push_back(y * y);
  const double m1 = stats::summarize(ys).mean, m2 = stats::summarize(sq).mean;
  const BalancedTwoColourMoments law{1, 1, 2, 1, 0};
  t.expect(std::abs(moment(law, 1) - std::sqrt(kPi)) < 1e-12, "closed form first moment = sqrt(pi)");
  t.expect(std::abs(moment(law, 2) - 4) < 1e-12, "closed form second moment = 4");
  t.expect(within_rel(m1, std::sqrt(kPi), 0.02), "mean " + num(m1) + " vs sqrt(pi)");
  t.expect(within_rel(m2, 4, 0.04), "second moment " + num(m2) + " vs 4");
  return t.outcome("E Y = " + num(m1) + " (target " + num(std::sqrt(kPi)) + "), E Y^2 = " + num(m2) + " (target 4)");
}

Outcome criterion5() {
  Tally t;
  const Analysis a = analyze(instantiate("E2p", {{"p", "1/2"}}));
  const double target = 2 / std::sqrt(kPi);
  t.expect(std::abs(moment(MittagLeffler{0.5}, 1) - target) < 1e-12, "Mittag-Leffler mean = 2/sqrt(pi)");
  const auto ys = normalized_samples(a, 0, 100000, 20000, kSeed + 5);
  const auto s = stats::summarize(ys);
  t.expect(within_rel(s.mean, target, 0.02), "mean " + num(s.mean));
  return t.outcome("E Y = " + num(s.mean) + " (se " + num(s.se, 3) + ", target " + num(target) + ")");
}

Outcome criterion6() {
  Tally t;
  std::string summary;
  {
    RunPlan plan;
    plan.mode = TimeMode::Continuous;
    plan.t_max = 20;
    plan.checkpoints = {20};
    plan.replicates = 10000;
    plan.rng.master_seed = kSeed + 6;
    std::vector<double> b;
    std::vector<long> counts;
    for (const auto& tr : run(instantiate("Eplusminus"), plan)) {
      b.push_back(tr.at_time(20)->x[1]);
      counts.push_back(static_cast<long>(tr.at_time(20)->x[1]));
    }
    const double m = stats::summarize(b).mean;
    const NegBinomialEplusminus law{20};
    const auto chi = stats::chi_square(counts, [&](long k) { return *pmf(law, k); });
    t.expect(within_rel(m, 20, 0.05), "E+- mean " + num(m));
    t.expect(chi.p_value >= 0.01, "E+- chi-square p " + num(chi.p_value));
    summary += "E+- mean " + num(m) + ", chi-square p " + num(chi.p_value, 3) + " (" + std::to_string(chi.dof) + " dof)";
  }
  {
    RunPlan plan;
    plan.mode = TimeMode::Continuous;
    plan.t_max = 10;
    plan.checkpoints = {10};
    plan.replicates = 10000;
    plan.rng.master_seed = kSeed + 60;
    std::vector<double> b;
    for (const auto& tr : run(instantiate("Eminusminus"), plan)) b.push_back(tr.at_time(10)->x[1]);
    const double m = stats::summarize(b).mean, target = 1 - std::exp(-10.0);
    t.expect(within_rel(m, target, 0.03), "E-- mean " + num(m));
    summary += "; E-- mean " + num(m) + " (target " + num(target) + ")";
  }
  {
    const CompiledUrn u = CompiledUrn::compile(instantiate("Eminusminus"));
    RunPlan plan;
    plan.steps = 10000;
    plan.rng.master_seed = kSeed + 61;
    std::uint64_t steps = 0, bad = 0;
    for (std::uint64_t r = 0; r < 100; ++r)
      simulate_replicate(u, plan, r, [&](const UrnState& st) {
        ++steps;
        if (static_cast<std::uint64_t>(st.x[1]) % 2 != st.step % 2) ++bad;
      });
    t.expect(bad == 0, std::to_string(bad) + " parity violations");
    summary += "; parity held on " + std::to_string(steps) + " steps";
  }
  return t.outcome(summary);
}

Outcome criterion7() {
  Tally t;
  const Analysis a = analyze(instantiate("E2", {{"delta", "1"}, {"gamma", "1"}, {"alpha", "1"}}));
  t.expect(a.discrete[0].n_pow == 1 && a.discrete[0].log_pow == -1, "normalization n / log n");
  const auto ys = normalized_samples(a, 0, 1000000, 500, kSeed + 7);
  const auto s = stats::summarize(ys);
  t.expect(within_rel(s.mean, 1.0, 0.10), "mean " + num(s.mean));
  return t.outcome("X_n1 log n / n = " + num(s.mean) + " (se " + num(s.se, 3) + ", target 1); slow-convergence check");
}

Outcome criterion8() {
  Tally t;
  std::string summary;
  auto ratio = [](const UrnSpec& spec, ColourId i, std::uint64_t seed) {
    RunPlan plan;
    plan.steps = 100000;
    plan.checkpoints = {1e5};
    plan.replicates = 200;
    plan.rng.master_seed = seed;
    std::vector<double> r;
    for (const auto& tr : run(spec, plan))
      r.push_back(static_cast<double>(tr.final_state.drawn[i]) / tr.final_state.x[i]);
    return stats::summarize(r).mean;
  };
  {
    const Analysis a = analyze(instantiate("E2", {{"delta", "1"}, {"gamma", "1"}, {"alpha", "2"}}));
    t.expect(*predicted_constants_drawn(a, 1).ratio == Rational(1, 2), "predicted ratio 1/2");
    const double m = ratio(a.spec, 1, kSeed + 8);
    t.expect(within_rel(m, 0.5, 0.02), "E2 alpha>delta N2/X2 " + num(m));
    summary += "E2 N_n2/X_n2 = " + num(m) + " (target 0.5)";
  }
  {
    const Analysis a = analyze(instantiate("Eclassical", {{"b", "2"}}));
    t.expect(*predicted_constants_drawn(a, 0).ratio == Rational(1, 2), "predicted ratio 1/b");
    const double m = ratio(a.spec, 0, kSeed + 80);
    t.expect(within_rel(m, 0.5, 0.02), "classical N1/X1 " + num(m));
    summary += "; classical b=2 N_n1/X_n1 = " + num(m) + " (target 0.5)";
  }
  return t.outcome(summary);
}

bool has_negative(const UrnSpec& s) {
  for (const auto& row : s.rows)
    for (const auto& atom : row.atoms)
      for (const auto& v : atom.v)
        if (v < 0) return true;
  return false;
}

Outcome criterion9() {
  Tally t;
  std::vector<UrnSpec> specs = corpus_specs();
  const std::size_t corpus_size = specs.size();
  SpecGenerator gen(kSeed + 9);
  for (int k = 0; k < 500; ++k) specs.push_back(gen.next());

  for (std::size_t k = 0; k < specs.size(); ++k) {
    const UrnSpec& s = specs[k];
    const std::string tag = k < corpus_size ? s.meta.value("name", "") : "random #" + std::to_string(k - corpus_size);
    const Analysis a = analyze(s);
    const auto& st = a.structure;
    const auto& ex = st.exponents;

    bool mono = true;
    for (std::size_t i = 0; i < s.q(); ++i)
      for (auto j : st.graph.children[i]) {
        if (ex.lambda_star[i] > ex.lambda_star[j]) mono = false;
        if (ex.lambda_star[i] == ex.lambda_star[j]) {
          if (ex.kappa[i] > ex.kappa[j]) mono = false;
          if (ex.lambda[j] == ex.lambda_star[j] && ex.kappa[j] < ex.kappa[i] + 1) mono = false;
        }
      }
    t.expect(mono, tag + ": monotonicity along edges");

    bool zero = true;
    const auto& es = a.extended_structure;
    for (const auto& [nu, levels] : es.roles.block_by_kappa)
      for (const auto& [kappa, members] : levels)
        for (auto i : members) {
          Rational res = -es.exponents.lambda[nu] * a.coefficients.c(i, nu);
          for (auto j : members) res += a.extended.activity[j] * es.mean(j, i) * a.coefficients.c(j, nu);
          if (res != 0) zero = false;
        }
    t.expect(zero, tag + ": eigenvector residual");

    const std::size_t z = s.q();
    bool dummy = es.exponents.lambda_star[z] == std::max(ex.lambda_hat, Rational(0));
    if (ex.lambda_hat > 0) dummy = dummy && es.exponents.kappa[z] == ex.kappa_hat;
    if (ex.lambda_hat == 0 && ex.kappa_hat0) dummy = dummy && es.exponents.kappa[z] == *ex.kappa_hat0;
    t.expect(dummy, tag + ": draw-counter exponent identities");

    if (!has_negative(s)) {
      const Rational f(5, 2);
      UrnSpec scaled = s;
      for (auto& x : scaled.initial) x *= f;
      for (auto& row : scaled.rows)
        for (auto& atom : row.atoms)
          for (auto& v : atom.v) v *= f;
      const Analysis b = analyze(scaled);
      bool cov = true;
      for (std::size_t i = 0; i < s.q(); ++i) {
        cov = cov && b.discrete[i].n_pow == a.discrete[i].n_pow && b.discrete[i].log_pow == a.discrete[i].log_pow &&
              b.structure.exponents.kappa[i] == ex.kappa[i] && b.verdicts[i].kind == a.verdicts[i].kind;
        if (a.verdicts[i].kind != LimitKind::DeterministicExact || !a.verdicts[i].value) continue;
        const auto ea = a.verdicts[i].value->exact(), eb = b.verdicts[i].value->exact();
        if (ea && eb) cov = cov && *eb == f * *ea;
        else cov = cov && within_rel(b.verdicts[i].value->value(), 2.5 * a.verdicts[i].value->value(), 1e-12);
      }
      t.expect(cov, tag + ": scaling covariance");

      const Analysis m = analyze(mean_urn(s));
      bool same = true;
      for (std::size_t i = 0; i < s.q(); ++i)
        if (a.verdicts[i].kind == LimitKind::DeterministicExact)
          same = same && m.verdicts[i].kind == LimitKind::DeterministicExact && m.verdicts[i].value == a.verdicts[i].value;
      t.expect(same, tag + ": mean urn gives the same constants");
    }
  }
  return t.outcome(std::to_string(corpus_size) + " corpus + 500 random specs (" + std::to_string(gen.rejected()) +
                   " generator rejections)");
}

Outcome criterion10() {
  Tally t;
  std::size_t balanced_runs = 0, steps_checked = 0;
  for (const auto& s : corpus_specs()) {
    const std::string name = s.meta.value("name", "");
    for (auto mode : {TimeMode::Discrete, TimeMode::Continuous}) {
      RunPlan plan;
      plan.mode = mode;
      plan.steps = 5000;
      plan.t_max = std::min(4.0, affordable_horizon(s, 4, 2e4));
      plan.replicates = 16;
      plan.rng.master_seed = kSeed + 10;
      plan.workers = 1;
      const auto one = run(s, plan);
      for (unsigned w : {2u, 7u}) {
        plan.workers = w;
        const auto other = run(s, plan);
        bool same = one.size() == other.size();
        for (std::size_t r = 0; same && r < one.size(); ++r) {
          same = one[r].final_state.x == other[r].final_state.x && one[r].final_state.t == other[r].final_state.t &&
                 one[r].final_state.drawn == other[r].final_state.drawn &&
                 one[r].checkpoints.size() == other[r].checkpoints.size();
          for (std::size_t c = 0; same && c < one[r].checkpoints.size(); ++c)
            same = one[r].checkpoints[c].x == other[r].checkpoints[c].x &&
                   one[r].checkpoints[c].t == other[r].checkpoints[c].t;
        }
        t.expect(same, name + " " + (mode == TimeMode::Discrete ? "discrete" : "continuous") + " with " +
                           std::to_string(w) + " workers");
      }
    }

    const auto rep = validate(s);
    if (!rep.balance) continue;
    const CompiledUrn u = CompiledUrn::compile(s);
    double start = 0;
    for (std::size_t i = 0; i < u.q; ++i) start += u.activity[i] * u.initial[i];
    const double beta = to_double(*rep.balance);
    RunPlan plan;
    plan.steps = 20000;
    plan.rng.master_seed = kSeed + 100;
    for (std::uint64_t r = 0; r < 10; ++r) {
      std::uint64_t bad = 0;
      simulate_replicate(u, plan, r, [&](const UrnState& st) {
        ++steps_checked;
        const double expect = start + static_cast<double>(st.step) * beta;
        const double got = detail::total_activity(st, u);
        if (u.integral ? got != expect : std::abs(got - expect) > 1e-12 * std::abs(expect)) ++bad;
      });
      ++balanced_runs;
      t.expect(bad == 0, name + " balance broken on " + std::to_string(bad) + " steps");
    }
  }
  return t.outcome(std::to_string(balanced_runs) + " balanced runs, " + std::to_string(steps_checked) +
                   " steps checked exactly");
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, known_red;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--only" && k + 1 < argc) only = parse_list(argv[++k]);
    else if (arg == "--known-red" && k + 1 < argc) known_red = parse_list(argv[++k]);
    else {
      std::cerr << "usage: acceptance [--only N,..] [--known-red N,..]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "analyzer exactness", 1, criterion1},
      {2, "oracle equivalence", 120, criterion2},
      {3, "E2 linear case", 60, criterion3},
      {4, "balanced moments", 300, criterion4},
      {5, "Mittag-Leffler", 300, criterion5},
      {6, "counterexample laws", 180, criterion6},
      {7, "log-corrected case", 600, criterion7},
      {8, "drawn-colour ratios", 120, criterion8},
      {9, "structural property suite", 30, criterion9},
      {10, "determinism and balance", 60, criterion10},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %2d %s  %s: %s [%.2f s of %.0f s%s]%s\n", c.id, pass ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget",
                !pass && known_red.count(c.id) ? " (known red)" : "");
    std::fflush(stdout);
    if (!pass && !known_red.count(c.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
