#include "urn/verification.hpp"

#include "urn/stats.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace urn {

const char* const kUnbalancedMomentsMessage =
    "moment checks need a balanced urn: without balance the limit can fail to have finite moments "
    "(the diagonal urn with rates 2 and 1 started from (1, 1) has a second-colour limit with infinite mean), "
    "so there is no moment target to compare against";

namespace {

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 8);
  return std::string(buf, res.ptr);
}

std::string check_name(const std::string& kind, const UrnSpec& spec, ColourId i) {
  return kind + "[" + spec.name(i) + "]";
}

std::string spec_name(const UrnSpec& spec) {
  if (spec.meta.contains("name") && spec.meta["name"].is_string()) return spec.meta["name"].get<std::string>();
  return "";
}

VerificationResult start(const std::string& check, const UrnSpec& spec, const CheckPlan& plan) {
  VerificationResult r;
  r.check = check;
  r.spec = spec_name(spec);
  r.replicates = plan.replicates;
  r.steps = plan.steps;
  r.t_max = plan.t_max;
  r.seed = plan.seed;
  return r;
}

RunPlan discrete_plan(const CheckPlan& plan, std::vector<double> checkpoints) {
  RunPlan rp;
  rp.mode = TimeMode::Discrete;
  rp.steps = plan.steps;
  rp.checkpoints = std::move(checkpoints);
  rp.replicates = plan.replicates;
  rp.rng.master_seed = plan.seed;
  rp.workers = plan.workers;
  return rp;
}

RunPlan continuous_plan(const CheckPlan& plan, std::vector<double> times) {
  RunPlan rp;
  rp.mode = TimeMode::Continuous;
  rp.t_max = plan.t_max;
  rp.checkpoints = std::move(times);
  rp.replicates = plan.replicates;
  rp.rng.master_seed = plan.seed;
  rp.workers = plan.workers;
  return rp;
}

bool log_corrected(const Normalization& n) { return n.available && n.log_pow != 0; }

bool within(double estimate, double target, double rel) {
  return std::abs(estimate - target) <= rel * std::abs(target);
}

// Relative size at horizon n of the slowest-decaying correction to colour i's
// leading term: lower-order ancestors contribute n^{(l*_j - l*_i)/l_hat} log^{k_j - k_i} n,
// a positive kappa_i brings its own 1/log n, and the initial content n^{-l*_i/l_hat}.
double predicted_transient(const Analysis& a, ColourId i, double n) {
  const auto& ex = a.structure.exponents;
  const auto& g = a.structure.graph;
  if (ex.lambda_hat <= 0 || n < 3) return 0;
  const double lh = to_double(ex.lambda_hat), ln = std::log(n);
  // Inverting n ~ xi t^kh e^{lh t} leaves t^p with p = k_i - kh l*_i / lh.
  const double p = ex.kappa[i] - ex.kappa_hat * to_double(ex.lambda_star[i]) / lh;
  double worst = std::abs(p) > 1e-12 ? std::abs(p) * (1 + ex.kappa_hat * std::log(ln)) / ln : 0;
  if (ex.lambda_star[i] > 0) worst = std::max(worst, std::pow(n, -to_double(ex.lambda_star[i]) / lh));
  if (ex.lambda[i] < ex.lambda_star[i])
    worst = std::max(worst, std::pow(n, to_double(ex.lambda[i] - ex.lambda_star[i]) / lh) * std::pow(ln, -ex.kappa[i]));
  for (std::size_t j = 0; j < a.spec.q(); ++j) {
    if (j == i || !g.precedes(j, i) || ex.lambda_star[j] >= ex.lambda_star[i]) continue;
    const double e = to_double(ex.lambda_star[j] - ex.lambda_star[i]) / lh;
    worst = std::max(worst, std::pow(n, e) * std::pow(ln, ex.kappa[j] - ex.kappa[i]));
  }
  return worst;
}

void note_transient(VerificationResult& r, double transient, double tol) {
  if (transient <= 0) return;
  std::string s = "predicted leading correction ~" + fmt(transient) + " at this horizon";
  if (transient > tol) s += " (exceeds the tolerance: slow transient)";
  r.note += (r.note.empty() ? "" : "; ") + s;
}

}  // namespace

double normalized(const Normalization& norm, double x, double n) {
  double scale = std::pow(n, to_double(norm.n_pow));
  if (norm.log_pow != 0) scale *= std::pow(std::log(n), to_double(norm.log_pow));
  return x / scale;
}

CheckPlan convergence_defaults(const Analysis& a, ColourId i, CheckPlan plan) {
  const bool slow = log_corrected(a.discrete[i]);
  if (plan.steps == 0) plan.steps = slow ? kLogCorrectedSteps : kDefaultSteps;
  if (plan.replicates == 0) plan.replicates = 200;
  return plan;
}

VerificationResult check_convergence(const Analysis& a, ColourId i, CheckPlan plan) {
  plan = convergence_defaults(a, i, plan);
  const LimitVerdict& v = a.verdicts[i];
  const Normalization& norm = a.discrete[i];
  if (v.theorems_inapplicable)
    throw InapplicableCheck("a subtracting colour has lambda* <= 0, so no almost-sure limit is predicted; "
                            "only distribution and mean checks apply");
  if (v.kind != LimitKind::Extinct && !norm.available) throw InapplicableCheck(norm.note);
  if (plan.steps < 2) throw InapplicableCheck("convergence needs a horizon of at least 2 steps");

  VerificationResult r = start(check_name("convergence", a.spec, i), a.spec, plan);
  const bool slow = log_corrected(norm);
  const double tol = plan.tolerance.value_or(slow ? kLogCorrectedTolerance : kDefaultTolerance);
  r.tolerance = tol;
  r.tolerance_kind = "relative";
  if (slow) r.note = "log-corrected normalization: slow convergence, horizon and tolerance raised";

  const std::uint64_t n = plan.steps, h = n / 2;
  const auto trs = run(a.spec, discrete_plan(plan, {static_cast<double>(h), static_cast<double>(n)}));

  std::size_t extinct = 0, absent = 0;
  std::vector<double> full, half, diff;
  for (const auto& tr : trs) {
    const Checkpoint* c = tr.at_step(n);
    const double x = c ? c->x[i] : 0.0;
    if (!c) ++extinct;
    if (x <= 0) ++absent;
    if (v.kind == LimitKind::Extinct || !c) continue;
    if (v.possibly_zero && x <= 0) continue;
    const Checkpoint* ch = tr.at_step(h);
    const double yn = normalized(norm, x, static_cast<double>(n));
    const double yh = normalized(norm, ch->x[i], static_cast<double>(h));
    full.push_back(yn);
    half.push_back(yh);
    diff.push_back(yn - yh);
  }
  const double reps = static_cast<double>(trs.size());
  if (2 * extinct > trs.size() && !v.possibly_zero && v.kind != LimitKind::Extinct)
    throw ExtinctMajority(std::to_string(extinct) + " of " + std::to_string(trs.size()) +
                          " replicates went extinct but the verdict does not allow a zero limit");

  if (v.kind == LimitKind::Extinct) {
    r.target = 1;
    r.target_text = "colour absent at n with probability 1";
    r.estimate = absent / reps;
    r.se = std::sqrt(*r.estimate * (1 - *r.estimate) / reps);
    r.pass = *r.estimate >= 1 - tol;
    return r;
  }
  if (v.possibly_zero) r.survival_fraction = static_cast<double>(full.size()) / reps;
  if (full.empty()) {
    r.note = "no replicate has the colour present at n";
    return r;
  }

  const auto sf = stats::summarize(full);
  r.estimate = sf.mean;
  r.se = sf.se;
  if (v.kind == LimitKind::DeterministicExact) {
    if (!v.value) throw InapplicableCheck("no deterministic value available for this normalization");
    r.target = v.value->value();
    r.target_text = v.value->text();
    r.pass = within(sf.mean, *r.target, tol);
    note_transient(r, predicted_transient(a, i, static_cast<double>(n)), tol);
    return r;
  }

  // AbsolutelyContinuous: the normalized mean must have settled and stay positive.
  const auto sh = stats::summarize(half);
  const auto sd = stats::summarize(diff);
  r.target = sh.mean;
  r.target_text = "mean at n/2 (stabilization)";
  const double eff = plan.tolerance ? tol : std::max(tol, 4 * sd.se / std::abs(sf.mean));
  r.tolerance = eff;
  const bool positive = *std::min_element(full.begin(), full.end()) > 0;
  r.pass = within(sh.mean, sf.mean, eff) && positive;
  if (!positive) r.note += (r.note.empty() ? "" : "; ") + std::string("a surviving replicate has a zero limit");
  return r;
}

VerificationResult check_total_activity(const Analysis& a, CheckPlan plan) {
  const auto& ex = a.structure.exponents;
  if (ex.lambda_hat <= 0) throw InapplicableCheck("total activity is linear only when lambda_hat > 0");
  const bool slow = ex.kappa_hat > 0;
  if (plan.steps == 0) plan.steps = slow ? kLogCorrectedSteps : kDefaultSteps;
  if (plan.replicates == 0) plan.replicates = 200;
  VerificationResult r = start("total-activity", a.spec, plan);
  const double tol = plan.tolerance.value_or(slow ? kLogCorrectedTolerance : kDefaultTolerance);
  r.tolerance = tol;
  r.tolerance_kind = "relative";
  if (slow) r.note = "kappa_hat > 0: corrections decay like 1/log n";

  const auto n = plan.steps;
  const auto trs = run(a.spec, discrete_plan(plan, {static_cast<double>(n)}));
  std::vector<double> ys;
  for (const auto& tr : trs)
    if (const Checkpoint* c = tr.at_step(n)) {
      double total = 0;
      for (std::size_t j = 0; j < a.spec.q(); ++j) total += to_double(a.spec.activity[j]) * c->x[j];
      ys.push_back(total / static_cast<double>(n));
    }
  r.target = to_double(ex.lambda_hat);
  r.target_text = to_string(ex.lambda_hat);
  if (ys.empty()) return r;
  r.survival_fraction = static_cast<double>(ys.size()) / static_cast<double>(trs.size());
  const auto s = stats::summarize(ys);
  r.estimate = s.mean;
  r.se = s.se;
  r.pass = within(s.mean, *r.target, tol);
  return r;
}

std::vector<VerificationResult> check_moments(const Analysis& a, ColourId i, const ClosedFormLaw& law,
                                              const std::vector<double>& orders, CheckPlan plan,
                                              const std::vector<double>& tolerances) {
  if (!a.validation.balance) throw InapplicableCheck(kUnbalancedMomentsMessage);
  if (!tolerances.empty() && tolerances.size() != orders.size())
    throw std::invalid_argument("one tolerance per moment order");
  if (plan.steps == 0) plan.steps = kDefaultSteps;
  if (plan.replicates == 0) plan.replicates = 2000;
  const Normalization& norm = a.discrete[i];
  const auto n = plan.steps;
  const auto trs = run(a.spec, discrete_plan(plan, {static_cast<double>(n)}));
  std::vector<double> ys;
  for (const auto& tr : trs)
    if (const Checkpoint* c = tr.at_step(n)) ys.push_back(normalized(norm, c->x[i], static_cast<double>(n)));

  std::vector<VerificationResult> out;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const double order = orders[k];
    VerificationResult r = start(check_name("moment-" + fmt(order), a.spec, i), a.spec, plan);
    r.target = moment(law, order);
    r.target_text = "E Y^" + fmt(order) + " for " + law_text(law);
    std::vector<double> powers;
    powers.reserve(ys.size());
    for (double y : ys) powers.push_back(std::pow(y, order));
    const auto s = stats::summarize(powers);
    r.estimate = s.mean;
    r.se = s.se;
    r.tolerance_kind = "relative";
    if (!tolerances.empty()) {
      r.tolerance = tolerances[k];
    } else if (plan.tolerance) {
      r.tolerance = *plan.tolerance;
    } else {
      r.tolerance = std::max(kDefaultTolerance, 4 * s.se / std::abs(*r.target));
    }
    r.pass = !ys.empty() && within(s.mean, *r.target, r.tolerance);
    note_transient(r, order * predicted_transient(a, i, static_cast<double>(n)), r.tolerance);
    out.push_back(r);
  }
  return out;
}

VerificationResult check_distribution(const std::vector<double>& samples, const ClosedFormLaw& law,
                                      double threshold) {
  if (!has_distribution(law)) throw InapplicableCheck(law_name(law) + " has no closed-form distribution function");
  VerificationResult r;
  r.check = "distribution";
  r.target_text = law_text(law);
  r.tolerance = threshold;
  r.tolerance_kind = "p-value";
  r.replicates = samples.size();
  stats::TestResult t;
  if (is_discrete(law)) {
    std::vector<long> ks;
    ks.reserve(samples.size());
    for (double s : samples) ks.push_back(std::lround(s));
    t = stats::chi_square(ks, [&](long k) { return *pmf(law, k); });
    r.note = "chi-square over " + std::to_string(t.bins) + " cells, " + std::to_string(t.dof) + " dof";
  } else {
    t = stats::kolmogorov_smirnov(samples, [&](double y) { return *cdf(law, y); });
    r.note = "Kolmogorov-Smirnov";
  }
  const auto s = stats::summarize(samples);
  r.estimate = s.mean;
  r.se = s.se;
  r.statistic = t.statistic;
  r.p_value = t.p_value;
  r.pass = t.p_value >= threshold;
  return r;
}

VerificationResult check_distribution(const UrnSpec& spec, ColourId i, const ClosedFormLaw& law, CheckPlan plan) {
  if (plan.replicates == 0) plan.replicates = 10'000;
  std::vector<double> samples;
  if (std::holds_alternative<DirichletClassical>(law)) {
    if (plan.steps == 0) plan.steps = 10'000;
    const auto n = plan.steps;
    for (const auto& tr : run(spec, discrete_plan(plan, {static_cast<double>(n)})))
      if (const Checkpoint* c = tr.at_step(n)) samples.push_back(c->x[i] / static_cast<double>(n));
  } else {
    if (plan.t_max <= 0) plan.t_max = 20;
    const double t = plan.t_max;
    double scale = 1;
    if (std::holds_alternative<GammaYule>(law)) scale = std::exp(-to_double(spec.activity[i] * mean_matrix(spec)(i, i)) * t);
    for (const auto& tr : run(spec, continuous_plan(plan, {t})))
      if (const Checkpoint* c = tr.at_time(t)) samples.push_back(c->x[i] * scale);
  }
  const double threshold = plan.tolerance.value_or(kMinPValue);
  VerificationResult r = check_distribution(samples, law, threshold);
  const std::string kind = r.check;
  const std::string note = r.note;
  const auto base = start(check_name(kind, spec, i), spec, plan);
  r.check = base.check;
  r.spec = base.spec;
  r.steps = std::holds_alternative<DirichletClassical>(law) ? plan.steps : 0;
  r.t_max = std::holds_alternative<DirichletClassical>(law) ? 0 : plan.t_max;
  r.seed = plan.seed;
  if (std::holds_alternative<GammaYule>(law)) r.note = note + "; finite-horizon sample against the limit law";
  return r;
}

std::vector<double> exact_continuous_mean(const UrnSpec& spec, double t) {
  const std::size_t q = spec.q();
  const MeanMatrix r = mean_matrix(spec);
  Eigen::MatrixXd m(q, q);
  Eigen::RowVectorXd x0(q);
  for (std::size_t i = 0; i < q; ++i) {
    x0(i) = to_double(spec.initial[i]);
    for (std::size_t j = 0; j < q; ++j) m(i, j) = to_double(spec.activity[i] * r(i, j));
  }
  const Eigen::MatrixXd e = (t * m).exp();
  const Eigen::RowVectorXd mean = x0 * e;
  return std::vector<double>(mean.data(), mean.data() + q);
}

double affordable_horizon(const UrnSpec& spec, double cap, double budget) {
  auto total = [&](double t) {
    double s = 0;
    for (double v : exact_continuous_mean(spec, t)) s += std::abs(v);
    return s;
  };
  if (total(cap) <= budget) return cap;
  double lo = 0, hi = cap;
  for (int k = 0; k < 60; ++k) {
    const double mid = (lo + hi) / 2;
    (total(mid) <= budget ? lo : hi) = mid;
  }
  return lo;
}

VerificationResult check_martingale(const UrnSpec& spec, ColourId i, std::vector<double> times, CheckPlan plan) {
  if (plan.replicates == 0) plan.replicates = 10'000;
  if (times.empty()) {
    const double t = plan.t_max > 0 ? plan.t_max : affordable_horizon(spec, 20);
    times = {t / 4, t / 2, t};
  }
  std::sort(times.begin(), times.end());
  plan.t_max = times.back();
  VerificationResult r = start(check_name("martingale", spec, i), spec, plan);
  r.steps = 0;
  r.tolerance = 3;
  r.tolerance_kind = "standard-errors";
  const double lambda = to_double(spec.activity[i] * mean_matrix(spec)(i, i));
  const auto trs = run(spec, continuous_plan(plan, times));

  r.pass = true;
  std::ostringstream note;
  for (double t : times) {
    const double scale = std::exp(-lambda * t);
    std::vector<double> ys;
    std::size_t truncated = 0;
    for (const auto& tr : trs) {
      if (const Checkpoint* c = tr.at_time(t))
        ys.push_back(scale * c->x[i]);
      else
        ++truncated;
    }
    const auto s = stats::summarize(ys);
    const double target = scale * exact_continuous_mean(spec, t)[i];
    const bool ok = truncated == 0 && (s.se > 0 ? std::abs(s.mean - target) <= 3 * s.se
                                                : std::abs(s.mean - target) <= 1e-9 * std::max(1.0, std::abs(target)));
    r.pass = r.pass && ok;
    note << (note.tellp() > 0 ? "; " : "") << "t=" << fmt(t) << ": " << fmt(s.mean) << " +- " << fmt(s.se)
         << " vs " << fmt(target) << (ok ? "" : " FAIL");
    r.estimate = s.mean;
    r.se = s.se;
    r.target = target;
  }
  r.target_text = "exp(-lambda_i t) E X_i(t)";
  r.note = note.str();
  return r;
}

VerificationResult check_drawn_ratio(const Analysis& a, ColourId i, CheckPlan plan) {
  const auto& ex = a.structure.exponents;
  if (ex.lambda_star[i] <= 0) throw InapplicableCheck("drawn ratio needs lambda*_i > 0");
  if (a.spec.activity[i] == 0) throw InapplicableCheck("colour is never drawn");
  if (a.verdicts[i].theorems_inapplicable)
    throw InapplicableCheck("a subtracting colour has lambda* <= 0; no almost-sure limit is predicted");
  const bool slow = log_corrected(a.discrete[i]);
  if (plan.steps == 0) plan.steps = kDefaultSteps;
  if (plan.replicates == 0) plan.replicates = 200;
  VerificationResult r = start(check_name("drawn-ratio", a.spec, i), a.spec, plan);
  const double tol = plan.tolerance.value_or(slow ? kLogCorrectedTolerance : kDefaultTolerance);
  r.tolerance_kind = "relative";
  const Rational ratio = a.spec.activity[i] / ex.lambda_star[i];
  r.target = to_double(ratio);
  r.target_text = to_string(ratio);

  const auto n = plan.steps;
  std::vector<double> ys;
  const auto trs = run(a.spec, discrete_plan(plan, {static_cast<double>(n)}));
  for (const auto& tr : trs)
    if (const Checkpoint* c = tr.at_step(n); c && c->x[i] > 0) ys.push_back(static_cast<double>(c->drawn[i]) / c->x[i]);
  if (a.verdicts[i].possibly_zero) r.survival_fraction = static_cast<double>(ys.size()) / static_cast<double>(trs.size());
  if (ys.empty()) return r;
  const auto s = stats::summarize(ys);
  r.estimate = s.mean;
  r.se = s.se;
  r.tolerance = plan.tolerance ? tol : std::max(tol, 4 * s.se / *r.target);
  r.pass = within(s.mean, *r.target, r.tolerance);
  double transient = predicted_transient(a, i, static_cast<double>(n));
  // Integrating t^k e^{l t} loses a factor 1 - k / (l t).
  if (ex.kappa[i] > 0 && ex.lambda_star[i] > 0 && ex.lambda_hat > 0)
    transient = std::max(transient, ex.kappa[i] * to_double(ex.lambda_hat / ex.lambda_star[i]) /
                                        std::log(static_cast<double>(n)));
  note_transient(r, transient, r.tolerance);
  return r;
}

namespace {

bool single_atom(const ReplacementRow& row) { return row.atoms.size() == 1; }

bool equal_activities(const UrnSpec& spec) {
  for (const auto& a : spec.activity)
    if (a != spec.activity[0] || a <= 0) return false;
  return true;
}

}  // namespace

std::optional<ClosedFormLaw> detect_law(const UrnSpec& spec, ColourId i) {
  const std::size_t q = spec.q();
  if (q < 2 || i >= q || !equal_activities(spec)) return std::nullopt;
  auto v = [&](std::size_t row, std::size_t col) { return spec.rows[row].atoms[0].v[col]; };
  bool deterministic = true;
  for (const auto& row : spec.rows) deterministic = deterministic && single_atom(row);

  // Classical: every draw adds b balls of the drawn colour.
  if (deterministic) {
    bool classical = true;
    const Rational b = v(0, 0);
    for (std::size_t r = 0; r < q; ++r)
      for (std::size_t c = 0; c < q; ++c)
        if (v(r, c) != (r == c ? b : Rational(0))) classical = false;
    for (const auto& x : spec.initial) classical = classical && x > 0;
    if (classical && b > 0) {
      DirichletClassical d{{}, to_double(b), i};
      for (const auto& x : spec.initial) d.parameter.push_back(to_double(x / b));
      return d;
    }
  }

  if (q == 2 && i == 0 && spec.initial[0] > 0) {
    if (deterministic && v(1, 0) == 0) {
      const Rational delta = v(0, 0), gamma = v(0, 1), alpha = v(1, 1);
      if (delta > 0 && gamma > 0 && alpha == delta + gamma)
        return BalancedTwoColourMoments{to_double(delta), to_double(gamma), to_double(alpha),
                                        to_double(spec.initial[0]), to_double(spec.initial[1])};
    }
    // ((xi, 1 - xi), (0, 1)) with xi ~ Bernoulli(p).
    const auto& r0 = spec.rows[0].atoms;
    if (r0.size() == 2 && single_atom(spec.rows[1]) && v(1, 0) == 0 && v(1, 1) == 1) {
      std::optional<Rational> p;
      bool shape = true;
      for (const auto& atom : r0) {
        if (atom.v == std::vector<Rational>{1, 0})
          p = atom.p;
        else if (atom.v != std::vector<Rational>{0, 1})
          shape = false;
      }
      if (shape && p) {
        if (spec.initial[0] == 1 && spec.initial[1] == 0) return MittagLeffler{to_double(*p)};
        return RandomBernoulliMoments{to_double(*p), to_double(spec.initial[0]), to_double(spec.initial[1])};
      }
    }
  }

  if (q == 3 && deterministic && spec.initial[0] > 0 && (i == 0 || i == 1)) {
    const Rational alpha = v(0, 0), beta = v(0, 1), delta = v(1, 1), sigma = v(2, 2);
    const bool shape = v(1, 0) == 0 && v(2, 0) == 0 && v(2, 1) == 0 && v(0, 2) == sigma - alpha - beta &&
                       v(1, 2) == sigma - delta && sigma - alpha - beta >= 0 && sigma >= delta;
    if (shape && alpha >= delta && delta > 0 && beta > 0) {
      const std::vector<double> x{to_double(spec.initial[0]), to_double(spec.initial[1]), to_double(spec.initial[2])};
      if (i == 1) return E3Moments{to_double(alpha), to_double(beta), to_double(delta), to_double(sigma), x};
      // Merging colours 2 and 3 leaves the balanced two-colour urn ((alpha, s - alpha), (0, s)).
      if (sigma > alpha)
        return BalancedTwoColourMoments{to_double(alpha), to_double(sigma - alpha), to_double(sigma), x[0], x[1] + x[2]};
    }
  }
  return std::nullopt;
}

std::optional<ClosedFormLaw> detect_time_law(const UrnSpec& spec, ColourId i, double t) {
  if (spec.q() != 2 || i != 1 || t <= 0) return std::nullopt;
  if (spec.activity[0] != 1 || spec.activity[1] != 1) return std::nullopt;
  if (spec.initial[0] != 1 || spec.initial[1] != 0) return std::nullopt;
  const auto& r0 = spec.rows[0].atoms;
  if (r0.size() != 1 || r0[0].v != std::vector<Rational>{0, 1}) return std::nullopt;
  const auto& r1 = spec.rows[1].atoms;
  const std::vector<Rational> up{0, 1}, down{0, -1};
  if (r1.size() == 1 && r1[0].v == down) return PoissonEminusminus{t};
  if (r1.size() == 2 && r1[0].p == Rational(1, 2) &&
      ((r1[0].v == up && r1[1].v == down) || (r1[0].v == down && r1[1].v == up)))
    return NegBinomialEplusminus{t};
  return std::nullopt;
}

nlohmann::json to_json(const VerificationResult& r) {
  nlohmann::json j = nlohmann::json::object();
  j["check"] = r.check;
  if (!r.spec.empty()) j["spec"] = r.spec;
  j["target_text"] = r.target_text;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  opt("target", r.target);
  opt("estimate", r.estimate);
  opt("se", r.se);
  opt("statistic", r.statistic);
  opt("p_value", r.p_value);
  opt("survival_fraction", r.survival_fraction);
  j["tolerance"] = r.tolerance;
  j["tolerance_kind"] = r.tolerance_kind;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["replicates"] = r.replicates;
  if (r.steps) j["steps"] = r.steps;
  if (r.t_max > 0) j["t_max"] = r.t_max;
  j["seed"] = r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string csv_header() { return "spec,check,target,estimate,se,verdict"; }

std::string csv_row(const VerificationResult& r) {
  auto num = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  return r.spec + "," + r.check + "," + num(r.target) + "," + num(r.estimate) + "," + num(r.se) + "," +
         (r.pass ? "pass" : "fail");
}

}  // namespace urn
