#include "urn/corpus.hpp"
#include "urn/limits.hpp"
#include "urn/simulator.hpp"
#include "urn/suites.hpp"
#include "urn/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, IoOrParse = 1, Validation = 2, NotTriangular = 3, Inapplicable = 4, CheckFailed = 5 };

struct Options {
  std::string spec_path;
  std::string mode = "discrete";
  std::uint64_t steps = 0;
  double t_max = 0;
  std::size_t reps = 0;
  std::optional<std::uint64_t> seed;
  std::string checkpoints = "geometric";
  std::string out;
  std::string format;
  std::string suite;
  std::optional<double> tol;
  unsigned workers = 0;
};

// Failures that map onto a fixed exit code.
struct Failure {
  Exit code;
  std::string message;
};

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--steps", o.steps, "discrete horizon (draws)")->envname("POLYA_STEPS");
  cmd->add_option("--t-max", o.t_max, "continuous horizon")->envname("POLYA_T_MAX");
  cmd->add_option("--reps", o.reps, "replicates")->envname("POLYA_REPS");
  cmd->add_option("--seed", o.seed, "master seed; generated and printed when absent")->envname("POLYA_SEED");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)")->envname("POLYA_WORKERS");
  cmd->add_option("--out", o.out, "output file (stdout when absent)")->envname("POLYA_OUT");
}

void add_verify_options(CLI::App* cmd, Options& o) {
  add_run_options(cmd, o);
  cmd->add_option("--suite", o.suite, "comma-separated: convergence, moments, distribution, martingale, drawn-ratio")
      ->envname("POLYA_SUITE");
  cmd->add_option("--tol", o.tol, "tolerance override (relative; p-value threshold for distribution)")
      ->envname("POLYA_TOL");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->envname("POLYA_FORMAT");
}

std::uint64_t resolve_seed(Options& o) {
  if (!o.seed) {
    std::random_device rd;
    o.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << *o.seed << "\n";
  }
  return *o.seed;
}

std::string spec_hash(const urn::UrnSpec& spec) {
  // FNV-1a over the canonical document.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : urn::emit_spec(spec)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

urn::UrnSpec load(const std::string& path) {
  try {
    return urn::load_spec(path);
  } catch (const std::exception& e) {
    throw Failure{IoOrParse, path + ": " + e.what()};
  }
}

urn::Analysis analyze_or_fail(const urn::UrnSpec& spec) {
  try {
    return urn::analyze(spec);
  } catch (const urn::InadmissibleSpec& e) {
    throw Failure{Validation, e.what()};
  } catch (const urn::NonTriangular& e) {
    throw Failure{NotTriangular, e.what()};
  }
}

// Writes to --out or stdout.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Failure{IoOrParse, "cannot write " + o.out};
  f << text;
}

json analysis_with_laws(const urn::Analysis& a) {
  json report = urn::analysis_report(a);
  for (std::size_t i = 0; i < a.spec.q(); ++i)
    if (auto law = urn::detect_law(a.spec, i)) report["limits"]["colours"][i]["law"] = urn::law_text(*law);
  return report;
}

int cmd_analyze(Options& o) {
  const urn::UrnSpec spec = load(o.spec_path);
  try {
    const urn::Analysis a = urn::analyze(spec);
    emit(o, analysis_with_laws(a).dump(2) + "\n");
    return Ok;
  } catch (const urn::InadmissibleSpec& e) {
    std::cerr << e.what() << "\n";
    emit(o, json{{"validation", urn::to_json(e.report())}}.dump(2) + "\n");
    return Validation;
  } catch (const urn::NonTriangular& e) {
    std::cerr << e.what() << "\n";
    return NotTriangular;
  }
}

std::vector<double> parse_checkpoints(const std::string& text) {
  if (text == "geometric") return {};
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Failure{IoOrParse, "bad checkpoint '" + item + "'"};
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

int cmd_simulate(Options& o) {
  const urn::UrnSpec spec = load(o.spec_path);
  const auto report = urn::validate(spec);
  if (!report.admissible()) {
    for (const auto& v : report.violations) std::cerr << v.assumption << ": " << v.message << "\n";
    return Validation;
  }
  urn::RunPlan plan;
  plan.mode = o.mode == "continuous" ? urn::TimeMode::Continuous : urn::TimeMode::Discrete;
  if (o.steps) plan.steps = o.steps;
  if (o.t_max > 0) plan.t_max = o.t_max;
  plan.replicates = o.reps ? o.reps : 1;
  plan.rng.master_seed = resolve_seed(o);
  plan.workers = o.workers;
  plan.checkpoints = parse_checkpoints(o.checkpoints);
  if (o.format.empty()) o.format = "csv";

  std::cerr << "simulating " << plan.replicates << " replicate(s)\n";
  std::vector<urn::Trajectory> trs;
  try {
    trs = urn::run(spec, plan);
  } catch (const urn::NegativeCount& e) {
    throw Failure{Validation, e.what()};
  }

  const std::size_t q = spec.q();
  const std::string hash = spec_hash(spec);
  std::ostringstream os;
  auto rows = [&](auto&& row) {
    for (const auto& tr : trs) {
      const auto& cps = tr.checkpoints;
      const auto& fs_ = tr.final_state;
      for (std::size_t k = 0; k < cps.size(); ++k) {
        const bool last = k + 1 == cps.size() && cps[k].n == fs_.step && cps[k].x == fs_.x;
        row(tr.replicate, cps[k].n, cps[k].t, cps[k].x, cps[k].drawn, last ? urn::status_name(fs_.status) : "running");
      }
      const bool covered = !cps.empty() && cps.back().n == fs_.step && cps.back().x == fs_.x;
      if (!covered) row(tr.replicate, fs_.step, fs_.t, fs_.x, fs_.drawn, urn::status_name(fs_.status));
    }
  };
  if (o.format == "csv") {
    os << "# seed=" << plan.rng.master_seed << "\n# rng=" << urn::kRngName << "\n# spec_hash=" << hash
       << "\n# mode=" << o.mode << "\n";
    os << "replicate,n,t";
    for (std::size_t j = 0; j < q; ++j) os << ",X_" << j;
    for (std::size_t j = 0; j < q; ++j) os << ",N_" << j;
    os << ",status\n";
    rows([&](auto rep, auto n, double t, const auto& x, const auto& drawn, const char* status) {
      os << rep << "," << n << "," << number(t);
      for (double v : x) os << "," << number(v);
      for (auto v : drawn) os << "," << v;
      os << "," << status << "\n";
    });
  } else if (o.format == "jsonl") {
    os << json{{"seed", plan.rng.master_seed}, {"rng", urn::kRngName}, {"spec_hash", hash}, {"mode", o.mode}}.dump()
       << "\n";
    rows([&](auto rep, auto n, double t, const auto& x, const auto& drawn, const char* status) {
      os << json{{"replicate", rep}, {"n", n}, {"t", t}, {"x", x}, {"drawn", drawn}, {"status", status}}.dump() << "\n";
    });
  } else {
    throw Failure{IoOrParse, "simulate supports --format csv or jsonl"};
  }
  emit(o, os.str());
  return Ok;
}

urn::CheckPlan check_plan(const Options& o) {
  urn::CheckPlan p;
  p.steps = o.steps;
  p.t_max = o.t_max;
  p.replicates = o.reps;
  p.seed = *o.seed;
  p.workers = o.workers;
  p.tolerance = o.tol;
  return p;
}

std::vector<std::string> split_suites(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (std::find(urn::suite_names().begin(), urn::suite_names().end(), item) == urn::suite_names().end())
      throw Failure{IoOrParse, "unknown suite '" + item + "'"};
    out.push_back(item);
  }
  return out;
}

struct VerifyOutcome {
  std::vector<urn::SuiteEntry> entries;
  int exit = Ok;
};

// Runs the suites on one analyzed spec; auto-selected suites drop inapplicable entries.
void verify_analysis(const urn::Analysis& a, const Options& o, const std::string& label, VerifyOutcome& out) {
  const bool explicit_suites = !o.suite.empty();
  const auto suites = explicit_suites ? split_suites(o.suite) : urn::default_suites(a);
  const urn::CheckPlan plan = check_plan(o);
  for (const auto& suite : suites) {
    auto entries = urn::run_suite(a, suite, plan, [&](const std::string& c) { std::cerr << label << ": " << c << "\n"; });
    for (auto& e : entries) {
      if (e.result.spec.empty()) e.result.spec = label;
      if (e.inapplicable) {
        if (!explicit_suites) continue;
        std::cerr << label << ": " << e.result.check << " inapplicable: " << e.result.note << "\n";
        out.exit = std::max(out.exit, static_cast<int>(Inapplicable));
      } else {
        std::cerr << label << ": " << e.result.check << " " << (e.result.pass ? "pass" : "FAIL") << "\n";
        if (!e.result.pass) out.exit = std::max(out.exit, static_cast<int>(CheckFailed));
      }
      out.entries.push_back(std::move(e));
    }
  }
}

std::string render(const Options& o, const std::vector<urn::SuiteEntry>& entries, const json& extra = {}) {
  if (o.format == "csv") {
    std::string s = "# seed=" + std::to_string(*o.seed) + "\n" + urn::csv_header() + "\n";
    for (const auto& e : entries) {
      if (e.inapplicable) {
        s += e.result.spec + "," + e.result.check + ",,,,inapplicable\n";
      } else {
        s += urn::csv_row(e.result) + "\n";
      }
    }
    return s;
  }
  json checks = json::array();
  for (const auto& e : entries) checks.push_back(urn::to_json(e));
  json doc = extra.is_object() ? extra : json::object();
  doc["seed"] = *o.seed;
  doc["checks"] = checks;
  return doc.dump(2) + "\n";
}

std::string spec_label(const urn::UrnSpec& spec, const fs::path& path) {
  if (spec.meta.contains("name") && spec.meta["name"].is_string()) return spec.meta["name"];
  return path.stem().string();
}

int cmd_verify(Options& o) {
  resolve_seed(o);
  VerifyOutcome out;
  std::vector<fs::path> files;
  if (fs::is_directory(o.spec_path)) {
    for (const auto& entry : fs::directory_iterator(o.spec_path)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".json" || ext == ".toml")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Failure{IoOrParse, "no .json or .toml specs in " + o.spec_path};
  } else {
    files.push_back(o.spec_path);
  }
  for (std::size_t k = 0; k < files.size(); ++k) {
    try {
      const urn::UrnSpec spec = load(files[k].string());
      const std::string label = spec_label(spec, files[k]);
      std::cerr << "[" << k + 1 << "/" << files.size() << "] " << label << "\n";
      verify_analysis(analyze_or_fail(spec), o, label, out);
    } catch (const Failure& f) {
      if (files.size() == 1) throw;
      std::cerr << files[k].string() << ": " << f.message << "\n";
      out.exit = std::max(out.exit, static_cast<int>(f.code));
    }
  }
  emit(o, render(o, out.entries));
  return out.exit;
}

// --name value or --name=value pairs left over after option parsing.
std::map<std::string, std::string> template_params(const std::vector<std::string>& extras) {
  std::map<std::string, std::string> out;
  for (std::size_t k = 0; k < extras.size(); ++k) {
    std::string key = extras[k];
    if (key.rfind("--", 0) != 0) throw Failure{IoOrParse, "unexpected argument '" + key + "'"};
    key = key.substr(2);
    if (auto eq = key.find('='); eq != std::string::npos) {
      out[key.substr(0, eq)] = key.substr(eq + 1);
    } else {
      if (k + 1 >= extras.size()) throw Failure{IoOrParse, "missing value for --" + key};
      out[key] = extras[++k];
    }
  }
  return out;
}

urn::UrnSpec instantiate_or_fail(const std::string& name, const std::map<std::string, std::string>& params) {
  try {
    return urn::instantiate(name, params);
  } catch (const urn::CorpusError& e) {
    throw Failure{Validation, e.what()};
  }
}

int cmd_corpus_list() {
  for (const auto& t : urn::corpus_templates()) {
    std::cout << t.name;
    for (const auto& [k, v] : t.defaults) std::cout << " " << k << "=" << v;
    std::cout << "\n    " << t.description << "\n";
  }
  return Ok;
}

int cmd_corpus_emit(const std::string& name, const std::vector<std::string>& extras, Options& o) {
  if (name == "all") {
    if (o.out.empty()) throw Failure{IoOrParse, "corpus emit all needs --out DIR"};
    fs::create_directories(o.out);
    for (const auto& t : urn::corpus_templates()) {
      const fs::path path = fs::path(o.out) / (t.name + ".json");
      std::ofstream f(path);
      if (!f) throw Failure{IoOrParse, "cannot write " + path.string()};
      f << urn::emit_spec(urn::instantiate(t.name));
      std::cerr << "wrote " << path.string() << "\n";
    }
    return Ok;
  }
  emit(o, urn::emit_spec(instantiate_or_fail(name, template_params(extras))));
  return Ok;
}

int cmd_corpus_run(const std::string& name, const std::vector<std::string>& extras, Options& o) {
  const urn::UrnSpec spec = instantiate_or_fail(name, template_params(extras));
  resolve_seed(o);
  const urn::Analysis a = analyze_or_fail(spec);
  VerifyOutcome out;
  verify_analysis(a, o, name, out);
  if (o.format == "csv") {
    emit(o, render(o, out.entries));
  } else {
    emit(o, render(o, out.entries, json{{"analysis", analysis_with_laws(a)}}));
  }
  return out.exit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyze and simulate triangular generalized Polya urns"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "exponents, roles, coefficients and limit verdicts as JSON");
  analyze->add_option("spec", o.spec_path, "spec file (TOML or JSON)")->required();
  analyze->add_option("--out", o.out, "output file")->envname("POLYA_OUT");

  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo trajectories");
  simulate->add_option("spec", o.spec_path, "spec file (TOML or JSON)")->required();
  add_run_options(simulate, o);
  simulate->add_option("--mode", o.mode, "discrete or continuous")
      ->check(CLI::IsMember({"discrete", "continuous"}))
      ->envname("POLYA_MODE");
  simulate->add_option("--checkpoints", o.checkpoints, "geometric, or a comma-separated list of steps/times")
      ->envname("POLYA_CHECKPOINTS");
  simulate->add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}))->envname("POLYA_FORMAT");

  auto* verify = app.add_subcommand("verify", "run verification suites on a spec file or a directory of specs");
  verify->add_option("spec", o.spec_path, "spec file or directory")->required();
  add_verify_options(verify, o);

  auto* corpus = app.add_subcommand("corpus", "built-in example urns");
  corpus->require_subcommand(1);
  std::string template_name;
  corpus->add_subcommand("list", "list templates and their default parameters");
  auto* emit_cmd = corpus->add_subcommand("emit", "write a template instance (or 'all' into --out DIR)");
  emit_cmd->add_option("name", template_name, "template name or 'all'")->required();
  emit_cmd->add_option("--out", o.out, "output file, or directory for 'all'");
  emit_cmd->allow_extras();
  auto* run_cmd = corpus->add_subcommand("run", "analyze and verify a template instance");
  run_cmd->add_option("name", template_name, "template name")->required();
  add_verify_options(run_cmd, o);
  run_cmd->allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : IoOrParse;
  }

  try {
    if (*analyze) return cmd_analyze(o);
    if (*simulate) return cmd_simulate(o);
    if (*verify) return cmd_verify(o);
    if (corpus->got_subcommand("list")) return cmd_corpus_list();
    if (*emit_cmd) return cmd_corpus_emit(template_name, emit_cmd->remaining(), o);
    if (*run_cmd) return cmd_corpus_run(template_name, run_cmd->remaining(), o);
  } catch (const Failure& f) {
    std::cerr << f.message << "\n";
    return f.code;
  } catch (const urn::InapplicableCheck& e) {
    std::cerr << e.what() << "\n";
    return Inapplicable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return IoOrParse;
  }
  return Ok;
}
