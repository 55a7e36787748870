#include "urn/toml_lite.hpp"
#include "urn/urn_model.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace urn {

namespace {

using nlohmann::json;

// DOM builder that keeps floating literals as their source text.
class ExactSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using Base = nlohmann::detail::json_sax_dom_parser<json>;
  explicit ExactSax(json& root) : Base(root, true) {}
  bool number_float(json::number_float_t, const json::string_t& raw) {
    json::string_t text = raw;
    return Base::string(text);
  }
};

json parse_json_exact(std::string_view text) {
  json root;
  ExactSax sax(root);
  try {
    json::sax_parse(text.begin(), text.end(), &sax);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("JSON syntax error: ") + e.what());
  }
  return root;
}

Rational rational_field(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rational(Integer(j.get<std::uint64_t>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw SpecError(path, e.what());
    }
  }
  if (j.is_number_float()) throw SpecError(path, "binary floating-point value; write it as a string");
  throw SpecError(path, "expected a number");
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SpecError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(path, std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

UrnSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) throw SpecError("", "document must be a table/object");
  UrnSpec spec;
  const json& colours = member(doc, "colours", "");
  if (!colours.is_array() || colours.empty()) throw SpecError("colours", "expected a nonempty list");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < colours.size(); ++i) {
    const std::string path = "colours[" + std::to_string(i) + "]";
    const json& c = colours[i];
    std::string label;
    if (auto it = c.find("label"); it != c.end()) {
      if (!it->is_string()) throw SpecError(path + ".label", "expected a string");
      label = it->get<std::string>();
      if (!label.empty() && !seen.insert(label).second) throw SpecError(path + ".label", "duplicate label '" + label + "'");
    }
    Rational a = rational_field(member(c, "activity", path), path + ".activity");
    Rational x = rational_field(member(c, "initial", path), path + ".initial");
    if (a < 0) throw SpecError(path + ".activity", "activity must be >= 0");
    if (x < 0) throw SpecError(path + ".initial", "initial count must be >= 0");
    std::optional<Clause> claim;
    if (auto it = c.find("clause"); it != c.end()) {
      if (*it == "a")
        claim = Clause::A;
      else if (*it == "b")
        claim = Clause::B;
      else
        throw SpecError(path + ".clause", "expected \"a\" or \"b\"");
    }
    spec.labels.push_back(label);
    spec.activity.push_back(a);
    spec.initial.push_back(x);
    spec.claimed.push_back(claim);
  }
  const std::size_t q = spec.q();

  const json& rows = member(doc, "rows", "");
  if (!rows.is_array() || rows.size() != q)
    throw SpecError("rows", "expected one row per colour (" + std::to_string(q) + ")");
  for (std::size_t i = 0; i < q; ++i) {
    const std::string path = "rows[" + std::to_string(i) + "]";
    const json& r = rows[i];
    if (!r.is_array()) throw SpecError(path, "expected a list of atoms");
    ReplacementRow row;
    Rational total = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const std::string apath = path + "[" + std::to_string(k) + "]";
      Atom atom;
      atom.p = rational_field(member(r[k], "p", apath), apath + ".p");
      if (atom.p <= 0) throw SpecError(apath + ".p", "probabilities must be strictly positive");
      const json& v = member(r[k], "v", apath);
      if (!v.is_array() || v.size() != q)
        throw SpecError(apath + ".v", "atom vector must have length " + std::to_string(q));
      for (std::size_t j = 0; j < q; ++j) atom.v.push_back(rational_field(v[j], apath + ".v[" + std::to_string(j) + "]"));
      total += atom.p;
      row.atoms.push_back(std::move(atom));
    }
    if (row.atoms.empty()) {
      row.atoms.push_back(Atom{Rational(1), std::vector<Rational>(q, Rational(0))});
      total = 1;
    }
    if (total != 1) throw SpecError(path, "probabilities must sum to 1 (got " + to_string(total) + ")");
    spec.rows.push_back(std::move(row));
  }
  if (auto it = doc.find("meta"); it != doc.end()) {
    if (!it->is_object()) throw SpecError("meta", "expected a table/object");
    spec.meta = *it;
  }
  return spec;
}

json spec_to_json(const UrnSpec& spec) {
  json doc = json::object();
  json colours = json::array();
  for (std::size_t i = 0; i < spec.q(); ++i) {
    json c = json::object();
    c["activity"] = to_string(spec.activity[i]);
    c["initial"] = to_string(spec.initial[i]);
    if (!spec.labels[i].empty()) c["label"] = spec.labels[i];
    if (spec.claimed[i]) c["clause"] = *spec.claimed[i] == Clause::A ? "a" : "b";
    colours.push_back(c);
  }
  doc["colours"] = colours;
  json rows = json::array();
  for (const auto& row : spec.rows) {
    json r = json::array();
    for (const auto& atom : row.atoms) {
      json v = json::array();
      for (const auto& x : atom.v) v.push_back(to_string(x));
      r.push_back(json{{"p", to_string(atom.p)}, {"v", v}});
    }
    rows.push_back(r);
  }
  doc["rows"] = rows;
  if (!spec.meta.empty()) doc["meta"] = spec.meta;
  return doc;
}

UrnSpec parse_spec(std::string_view document) {
  std::size_t k = 0;
  while (k < document.size() && std::isspace(static_cast<unsigned char>(document[k]))) ++k;
  json doc;
  if (k < document.size() && document[k] == '{') {
    doc = parse_json_exact(document);
  } else {
    try {
      doc = toml::parse(document);
    } catch (const toml::ParseError& e) {
      throw SpecError("", std::string("TOML syntax error at ") + e.what());
    }
  }
  return spec_from_json(doc);
}

UrnSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string emit_spec(const UrnSpec& spec) { return spec_to_json(spec).dump(2) + "\n"; }

}  // namespace urn
