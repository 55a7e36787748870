#pragma once

#include "urn/rational.hpp"

#include <json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace urn {

using ColourId = std::size_t;

struct Atom {
  Rational p;
  std::vector<Rational> v;
  bool operator==(const Atom&) const = default;
};

struct ReplacementRow {
  std::vector<Atom> atoms;
  bool operator==(const ReplacementRow&) const = default;
  bool is_zero() const;
};

// Which clause of the subtraction condition a colour satisfies.
enum class Clause { A, B };

struct UrnSpec {
  std::vector<std::string> labels;  // empty string = unlabelled
  std::vector<Rational> activity;
  std::vector<Rational> initial;
  std::vector<ReplacementRow> rows;
  std::vector<std::optional<Clause>> claimed;  // user-declared clause, optional
  nlohmann::json meta = nlohmann::json::object();

  std::size_t q() const { return activity.size(); }
  std::string name(ColourId i) const;
  bool operator==(const UrnSpec&) const = default;
};

using MeanMatrix = RationalMatrix;

class SpecError : public std::runtime_error {
 public:
  SpecError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Builds a spec from the document tree. Enforces structural invariants only;
// assumption checks live in validate().
UrnSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const UrnSpec& spec);

// Document text: JSON if it starts with '{', TOML otherwise.
UrnSpec parse_spec(std::string_view document);
UrnSpec load_spec(const std::string& path);
// Canonical JSON text (sorted keys, lowest-terms rationals, 2-space indent).
std::string emit_spec(const UrnSpec& spec);

enum class Status { Pass, Fail, NotEvaluated };

struct Violation {
  std::string assumption;
  std::vector<ColourId> colours;
  std::string message;
};

enum class ClauseEvidence { ClauseA, ClauseB, Violated };

struct ValidationReport {
  std::map<std::string, Status> status;  // A0..A3, A4, A5', A7, A8, A+
  bool tenability_guaranteed = false;    // A6: guaranteed vs runtime-checked
  std::vector<Violation> violations;
  std::optional<Rational> balance;
  std::vector<ColourId> q_minus;
  std::vector<ClauseEvidence> clause;
  bool zero_dynamics = false;  // every active row is identically zero

  bool passed(const std::string& id) const;
  // A1-A3 and A5' hold; the minimum for any downstream analysis.
  bool admissible() const;
  // Triangular as well.
  bool analyzable() const;
};

MeanMatrix mean_matrix(const UrnSpec& spec);
ValidationReport validate(const UrnSpec& spec);
// Deterministic urn with point-mass rows at the means. Throws std::domain_error
// if any replacement value is negative.
UrnSpec mean_urn(const UrnSpec& spec);

nlohmann::json to_json(const ValidationReport& report);

}  // namespace urn
