#pragma once

#include "urn/urn_model.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace urn {

class CorpusError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Params = std::map<std::string, Rational>;

struct CorpusTemplate {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::string>> defaults;  // parameter, default value
  std::function<UrnSpec(const Params&)> build;                 // throws CorpusError on bad parameters
};

const std::vector<CorpusTemplate>& corpus_templates();
const CorpusTemplate& find_template(const std::string& name);

// Template with defaults overridden; unknown parameters are an error.
// meta records name, template parameters and, where set, the default check suites.
UrnSpec instantiate(const std::string& name, const std::map<std::string, std::string>& overrides = {});

}  // namespace urn
