#pragma once

#include "urn/urn_model.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace urn {

struct ColourGraph {
  std::size_t q = 0;
  std::vector<std::vector<ColourId>> children;
  std::vector<std::vector<ColourId>> parents;
  std::vector<ColourId> topo;                 // parents before children
  std::vector<std::vector<bool>> reaches;     // reaches[i][j]: i strictly precedes j
  std::vector<ColourId> minimal;

  bool precedes(ColourId i, ColourId j) const { return reaches[i][j]; }
  bool precedes_or_equal(ColourId i, ColourId j) const { return i == j || reaches[i][j]; }
};

class NonTriangular : public std::runtime_error {
 public:
  explicit NonTriangular(std::vector<ColourId> cycle);
  const std::vector<ColourId>& cycle() const { return cycle_; }

 private:
  std::vector<ColourId> cycle_;
};

// Edge i -> j iff i != j and r_ij > 0. Throws NonTriangular with a cycle witness.
ColourGraph build_graph(const MeanMatrix& mean);

struct ExponentTable {
  std::vector<Rational> lambda;
  std::vector<Rational> lambda_star;
  std::vector<int> kappa;
  Rational lambda_hat;
  int kappa_hat = 0;
  std::optional<int> kappa_hat0;               // only when lambda_hat == 0
  std::optional<std::vector<Rational>> gamma;  // only when lambda_hat > 0
};

ExponentTable compute_exponents(const ColourGraph& graph, const MeanMatrix& mean,
                                const std::vector<Rational>& activity);

enum class Role { Leader, Subleader, Follower };

struct RoleTable {
  std::vector<Role> role;
  std::vector<std::vector<ColourId>> ancestors;  // leaders whose limits drive colour i
  std::vector<ColourId> leaders;
  // Per leader nu: colours with lambda_star == lambda_nu, and those split by kappa.
  std::map<ColourId, std::vector<ColourId>> block;
  std::map<ColourId, std::map<int, std::vector<ColourId>>> block_by_kappa;
};

RoleTable classify_roles(const ExponentTable& exponents, const ColourGraph& graph);

// Appends a zero-activity colour receiving one ball at every draw.
UrnSpec extend_dummy_zero(const UrnSpec& spec);
// Appends a zero-activity colour receiving one ball at every draw of colour i.
// Throws std::invalid_argument if a_i == 0.
UrnSpec extend_dummy_iota(const UrnSpec& spec, ColourId i);

struct Structure {
  MeanMatrix mean;
  ColourGraph graph;
  ExponentTable exponents;
  RoleTable roles;
};

Structure analyze_structure(const UrnSpec& spec);

const char* role_name(Role r);
nlohmann::json to_json(const Structure& s, const UrnSpec& spec);

}  // namespace urn
