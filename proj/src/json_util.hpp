#pragma once

// Shared helpers for the JSON document formats (network and symmetry specs).

#include <json.hpp>
#include <set>
#include <string>
#include <string_view>

#include "symscat/errors.hpp"
#include "symscat/numerics.hpp"

namespace symscat::detail {

using nlohmann::json;

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "");
  }
}

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw ParseError("expected an object", 0, where);
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw ParseError("unknown key '" + key + "'", 0, where + key);
}

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing required key", 0, where + key);
  return *it;
}

inline double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError("expected a number", 0, field);
  return v.get<double>();
}

inline long long as_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ParseError("expected an integer", 0, field);
  return v.get<long long>();
}

inline Complex as_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2)
    throw ParseError("complex numbers are written as [re, im]", 0, field);
  return {as_real(v[0], field + "[0]"), as_real(v[1], field + "[1]")};
}

inline CMatrix as_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ParseError("expected a non-empty array of rows", 0, field);
  const std::size_t rows = v.size();
  if (!v[0].is_array() || v[0].empty())
    throw ParseError("expected a non-empty row", 0, field + "[0]");
  const std::size_t cols = v[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].size() != cols)
      throw ParseError("row length differs from row 0", 0, row_field);
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = as_complex(v[r][c], row_field + "[" + std::to_string(c) + "]");
  }
  return m;
}

/// Shortest round-trip decimal form of a double.
inline std::string number(double x) { return json(x).dump(); }

inline std::string complex_literal(Complex z) {
  return "[" + number(z.real()) + ", " + number(z.imag()) + "]";
}

/// One matrix row per line, indented.
inline std::string matrix_literal(const CMatrix& m, const std::string& indent) {
  std::string out = "[\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += indent + "  [";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += complex_literal(m(r, c));
    }
    out += r + 1 < m.rows() ? "],\n" : "]\n";
  }
  return out + indent + "]";
}

}  // namespace symscat::detail
