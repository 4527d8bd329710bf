#pragma once

// Matrix files (CSV and JSON) and deterministic JSON report output.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "matrix.hpp"

namespace subangle::io {

enum class MatrixFormat { csv, json };

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("non-numeric token '" + std::string(tok) + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(tok) + "'", line);
  return v;
}

inline std::size_t line_of_byte(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// One row vector per line, comma separated, no header. Blank lines are skipped.
inline Matrix parse_csv(std::string_view text) {
  std::vector<Vector> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    Vector row;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      row.push_back(detail::parse_number(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos),
                                         line_no));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged row: " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file", 0);
  return Matrix::from_rows(rows);
}

/// {"rows": [[...], ...]} with uniform row lengths.
inline Matrix parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), detail::line_of_byte(text, e.byte));
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw ParseError("JSON matrix must be an object with a \"rows\" array", 0);
  const auto& jrows = doc["rows"];
  if (jrows.empty()) throw ParseError("empty matrix file", 0);
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < jrows.size(); ++i) {
    const auto& jr = jrows[i];
    if (!jr.is_array() || jr.empty())
      throw ParseError("row " + std::to_string(i + 1) + " is not a nonempty array", 0);
    Vector row;
    for (const auto& x : jr) {
      if (!x.is_number()) throw ParseError("row " + std::to_string(i + 1) + " has a non-numeric entry", 0);
      row.push_back(x.get<double>());
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged row " + std::to_string(i + 1) + ": " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(rows.front().size()),
                       0);
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

inline Matrix parse_matrix(std::string_view text, MatrixFormat format) {
  return format == MatrixFormat::json ? parse_json(text) : parse_csv(text);
}

/// Format from the extension; "-" and unknown extensions sniff the content.
inline MatrixFormat detect_format(const std::string& path, std::string_view text) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return MatrixFormat::json;
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return MatrixFormat::csv;
  const auto t = detail::trim(text);
  return !t.empty() && t.front() == '{' ? MatrixFormat::json : MatrixFormat::csv;
}

inline std::string read_source(const std::string& path, std::istream& stdin_stream) {
  if (path == "-") return {std::istreambuf_iterator<char>(stdin_stream), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a, 64 bit, as 16 lowercase hex digits.
inline std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct LoadedMatrix {
  Matrix matrix;
  std::string path;
  std::string digest;
};

inline LoadedMatrix load_matrix(const std::string& path, std::istream& stdin_stream = std::cin) {
  const std::string text = read_source(path, stdin_stream);
  try {
    return {parse_matrix(text, detect_format(path, text)), path, fnv1a64(text)};
  } catch (const MathError& e) {
    throw ParseError(e.what(), 0);
  }
}

/// Comma separated list of decimals, e.g. "0.25,0.5".
inline Vector parse_list(std::string_view text) {
  Vector out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(detail::parse_number(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos), 0));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline nlohmann::json to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row_copy(i));
  return rows;
}

/// Serialize with sorted keys, two-space indent and every float written with
/// 17 significant digits, so equal values always give equal bytes.
inline void write_json(std::ostream& out, const nlohmann::json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map storage: keys sorted
        if (!first) out << ",\n";
        first = false;
        out << pad << nlohmann::json(it.key()).dump() << ": ";
        write_json(out, it.value(), indent + 2);
      }
      out << "\n" << close_pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      const bool scalars = std::all_of(j.begin(), j.end(), [](const auto& x) { return x.is_primitive(); });
      if (scalars) {
        out << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          write_json(out, j[i], indent + 2);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_json(out, j[i], indent + 2);
      }
      out << "\n" << close_pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out << buf;
      return;
    }
    default:
      out << j.dump();
  }
}

inline std::string to_report_string(const nlohmann::json& j) {
  std::ostringstream ss;
  write_json(ss, j);
  ss << "\n";
  return ss.str();
}

}  // namespace subangle::io
