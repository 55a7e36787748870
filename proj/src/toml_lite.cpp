#include "urn/toml_lite.hpp"

#include <cctype>
#include <vector>

namespace urn::toml {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  json run() {
    json root = json::object();
    json* current = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        current = header(root);
      } else {
        key_value(*current);
      }
      end_of_line();
    }
    return root;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) get();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') get();
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        get();
      else
        break;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_all() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        get();
      else
        break;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') get();
    if (peek() != '\n') fail("expected end of line");
    get();
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> parts;
    while (true) {
      skip_ws();
      parts.push_back(simple_key());
      skip_ws();
      if (peek() != '.') break;
      get();
    }
    return parts;
  }

  std::string simple_key() {
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    std::string k;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      k += get();
    if (k.empty()) fail("expected key");
    return k;
  }

  json* descend(json& root, const std::vector<std::string>& path, std::size_t upto) {
    json* node = &root;
    for (std::size_t k = 0; k < upto; ++k) {
      json& next = (*node)[path[k]];
      if (next.is_null()) next = json::object();
      if (next.is_array()) {
        if (next.empty() || !next.back().is_object()) fail("key '" + path[k] + "' is not a table");
        node = &next.back();
      } else if (next.is_object()) {
        node = &next;
      } else {
        fail("key '" + path[k] + "' is not a table");
      }
    }
    return node;
  }

  json* header(json& root) {
    get();
    bool array = false;
    if (peek() == '[') {
      get();
      array = true;
    }
    auto path = key_path();
    expect(']');
    if (array) expect(']');
    json* parent = descend(root, path, path.size() - 1);
    json& slot = (*parent)[path.back()];
    if (array) {
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) fail("'" + path.back() + "' redefined as array of tables");
      slot.push_back(json::object());
      return &slot.back();
    }
    if (slot.is_null()) slot = json::object();
    if (!slot.is_object()) fail("'" + path.back() + "' redefined as table");
    return &slot;
  }

  void key_value(json& table) {
    auto path = key_path();
    skip_ws();
    expect('=');
    skip_ws();
    json* target = descend(table, path, path.size() - 1);
    if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*target)[path.back()] = value();
  }

  json value() {
    char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

  json number() {
    std::string raw;
    while (!eof()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == 'e' ||
          c == 'E') {
        raw += get();
      } else if (c == '_') {
        get();
      } else {
        break;
      }
    }
    if (raw.empty()) fail("expected a value");
    return raw;
  }

  json array() {
    get();
    json out = json::array();
    skip_all();
    while (peek() != ']') {
      if (eof()) fail("unterminated array");
      out.push_back(value());
      skip_all();
      if (peek() == ',') {
        get();
        skip_all();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    get();
    return out;
  }

  json inline_table() {
    get();
    json out = json::object();
    skip_ws();
    while (peek() != '}') {
      if (eof() || peek() == '\n') fail("unterminated inline table");
      key_value(out);
      skip_ws();
      if (peek() == ',') {
        get();
        skip_ws();
      } else if (peek() != '}') {
        fail("expected ',' or '}' in inline table");
      }
    }
    get();
    return out;
  }

  std::string basic_string() {
    get();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      char e = get();
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
    return out;
  }

  std::string literal_string() {
    get();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '\'') break;
      out += c;
    }
    return out;
  }
};

}  // namespace

nlohmann::json parse(std::string_view text) { return Reader(text).run(); }

}  // namespace urn::toml
