#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace urn::toml {

// Subset: comments, [table], [[array.of.tables]], dotted keys, basic and
// literal strings, integers, decimals, booleans, arrays, inline tables.
// Numbers are returned as their raw source text (JSON strings) so callers
// can convert them exactly.
nlohmann::json parse(std::string_view text);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace urn::toml
