#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "centered_bound/errors.hpp"
#include "centered_bound/trees.hpp"

// Catalog files come in two layouts.
//
// Classic ("forest.txt"): line 1 is a key, a 0-based whitespace-separated
// list L where L[k] is how many lines below line 1 the k-edge section starts.
// A section is one line holding the code count, then one code per line with
// the tuple written in reverse order (readers un-reverse it). Sections are
// packed consecutively in increasing k; the key is re-derived from the actual
// section placement on read and any mismatch is an error, because a catalog
// with missing trees would silently weaken every search that uses it. The
// 0-edge section's single code is an empty line; files that start at k = 1
// are accepted too.
//
// Modern: self-describing, magic first line "centered-bound-forest 1", then
// per section a "k <k> count <c>" header followed by c unreversed code lines.

namespace centered_bound {

/// An ordered catalog of tree codes per edge count.
struct ForestLibrary {
  std::map<int, std::vector<TreeCode>> per_k;
  bool from_file = false;  ///< ordering came from a loaded file, not native enumeration

  bool has_n(int n) const { return n >= 3 && per_k.count(n - 3) > 0; }

  const std::vector<TreeCode>& trees_for_n(int n) const {
    if (n < 3) throw InvalidArity("tree catalogs need n >= 3, got " + std::to_string(n));
    auto it = per_k.find(n - 3);
    if (it == per_k.end())
      throw MissingCatalog("catalog has no trees with " + std::to_string(n - 3) +
                               " edges (n = " + std::to_string(n) + ")",
                           n);
    return it->second;
  }
};

/// Catalog from native enumeration, complete for 3 <= n <= max_n.
inline ForestLibrary native_forest(int max_n) {
  ForestLibrary lib;
  for (int n = 3; n <= max_n; ++n) {
    auto canon = enumerate_trees(n);
    std::vector<TreeCode> codes;
    codes.reserve(canon.size());
    for (auto& c : canon) codes.push_back(std::move(c.entries));
    lib.per_k[n - 3] = std::move(codes);
  }
  return lib;
}

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();  // trailing newline
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  return lines;
}

inline std::vector<long> parse_int_line(const std::string& line, std::size_t line_no) {
  std::vector<long> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("expected integer, got '" + tok + "'", line_no);
    }
    if (used != tok.size()) throw ParseError("expected integer, got '" + tok + "'", line_no);
    out.push_back(v);
  }
  return out;
}

inline TreeCode parse_code_line(const std::string& line, std::size_t line_no, int k,
                                bool reversed) {
  auto vals = parse_int_line(line, line_no);
  if (static_cast<int>(vals.size()) != k)
    throw ParseError("expected a code with " + std::to_string(k) + " entries, got " +
                         std::to_string(vals.size()),
                     line_no);
  TreeCode code(vals.begin(), vals.end());
  if (reversed) std::reverse(code.begin(), code.end());
  try {
    RootedTree probe(code);
  } catch (const InvalidTreeCode& e) {
    throw ParseError(std::string("invalid tree code: ") + e.what(), line_no);
  }
  return code;
}

inline ForestLibrary parse_classic(const std::vector<std::string>& lines, int base_k) {
  if (lines.empty()) throw ParseError("empty catalog", 1);
  auto key = parse_int_line(lines[0], 1);
  if (key.empty()) throw ParseError("empty key line", 1);

  ForestLibrary lib;
  lib.from_file = true;
  std::size_t cursor = 1;  // 0-based index into lines; sections are consecutive
  for (std::size_t j = 0; j < key.size(); ++j) {
    const int k = base_k + static_cast<int>(j);
    if (key[j] != static_cast<long>(cursor))
      throw ParseError("key entry " + std::to_string(j) + " is " + std::to_string(key[j]) +
                           " but the " + std::to_string(k) + "-edge section starts " +
                           std::to_string(cursor) + " lines below the key",
                       1);
    if (cursor >= lines.size())
      throw ParseError("missing count line for " + std::to_string(k) + "-edge section",
                       lines.size() + 1);
    auto counts = parse_int_line(lines[cursor], cursor + 1);
    if (counts.size() != 1 || counts[0] < 0)
      throw ParseError("expected a single nonnegative code count", cursor + 1);
    const std::size_t count = static_cast<std::size_t>(counts[0]);
    ++cursor;
    std::vector<TreeCode> codes;
    codes.reserve(count);
    for (std::size_t c = 0; c < count; ++c, ++cursor) {
      if (cursor >= lines.size())
        throw ParseError("section for " + std::to_string(k) + "-edge trees promises " +
                             std::to_string(count) + " codes but the file ends after " +
                             std::to_string(c),
                         lines.size() + 1);
      codes.push_back(parse_code_line(lines[cursor], cursor + 1, k, /*reversed=*/true));
    }
    lib.per_k[k] = std::move(codes);
  }
  if (cursor != lines.size())
    throw ParseError("unexpected content after the last section", cursor + 1);
  return lib;
}

inline constexpr std::string_view kModernMagic = "centered-bound-forest 1";

inline ForestLibrary parse_modern(const std::vector<std::string>& lines) {
  ForestLibrary lib;
  lib.from_file = true;
  std::size_t cursor = 1;
  int last_k = -1;
  while (cursor < lines.size()) {
    std::istringstream in(lines[cursor]);
    std::string kw1, kw2;
    long k = -1, count = -1;
    if (!(in >> kw1 >> k >> kw2 >> count) || kw1 != "k" || kw2 != "count" || k < 0 || count < 0 ||
        (in >> kw1))
      throw ParseError("expected 'k <k> count <c>' header", cursor + 1);
    if (k <= last_k) throw ParseError("section edge counts must increase", cursor + 1);
    last_k = static_cast<int>(k);
    ++cursor;
    std::vector<TreeCode> codes;
    for (long c = 0; c < count; ++c, ++cursor) {
      if (cursor >= lines.size())
        throw ParseError("section for " + std::to_string(k) + "-edge trees promises " +
                             std::to_string(count) + " codes but the file ends after " +
                             std::to_string(c),
                         lines.size() + 1);
      codes.push_back(
          parse_code_line(lines[cursor], cursor + 1, static_cast<int>(k), /*reversed=*/false));
    }
    lib.per_k[static_cast<int>(k)] = std::move(codes);
  }
  if (lib.per_k.empty()) throw ParseError("catalog has no sections", 2);
  return lib;
}

}  // namespace detail

/// Parses either catalog layout (modern when the magic line is present).
/// Throws ParseError with a 1-based line number on the first violation.
inline ForestLibrary parse_forest(std::string_view text) {
  auto lines = detail::split_lines(text);
  if (!lines.empty() && lines[0] == detail::kModernMagic) return detail::parse_modern(lines);
  // A classic file normally has a 0-edge section; accept catalogs starting
  // at k = 1 as well (the two are distinguished by code lengths).
  try {
    return detail::parse_classic(lines, 0);
  } catch (const ParseError& primary) {
    try {
      return detail::parse_classic(lines, 1);
    } catch (const ParseError&) {
      throw primary;
    }
  }
}

inline ForestLibrary parse_forest(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_forest(std::string_view(buf.str()));
}

/// Classic layout, sections k = 0..max_k. Parsing the result reproduces the
/// library exactly, and re-writing parses byte-identically.
inline std::string write_forest(const ForestLibrary& lib, int max_k) {
  std::vector<std::string> sections;
  std::vector<std::size_t> section_lines;
  for (int k = 0; k <= max_k; ++k) {
    auto it = lib.per_k.find(k);
    if (it == lib.per_k.end())
      throw MissingCatalog("library has no " + std::to_string(k) + "-edge section", k + 3);
    std::string sec = std::to_string(it->second.size()) + "\n";
    for (const TreeCode& code : it->second) {
      for (std::size_t i = code.size(); i-- > 0;) {
        sec += std::to_string(code[i]);
        if (i > 0) sec += ' ';
      }
      sec += '\n';
    }
    sections.push_back(std::move(sec));
    section_lines.push_back(1 + it->second.size());
  }
  std::string key;
  std::size_t at = 1;
  for (int k = 0; k <= max_k; ++k) {
    key += std::to_string(at);
    if (k < max_k) key += ' ';
    at += section_lines[k];
  }
  std::string out = key + "\n";
  for (auto& s : sections) out += s;
  return out;
}

/// Modern layout, sections k = 0..max_k, codes unreversed.
inline std::string write_forest_modern(const ForestLibrary& lib, int max_k) {
  std::string out(detail::kModernMagic);
  out += '\n';
  for (int k = 0; k <= max_k; ++k) {
    auto it = lib.per_k.find(k);
    if (it == lib.per_k.end())
      throw MissingCatalog("library has no " + std::to_string(k) + "-edge section", k + 3);
    out += "k " + std::to_string(k) + " count " + std::to_string(it->second.size()) + "\n";
    for (const TreeCode& code : it->second) {
      for (std::size_t i = 0; i < code.size(); ++i) {
        out += std::to_string(code[i]);
        if (i + 1 < code.size()) out += ' ';
      }
      out += '\n';
    }
  }
  return out;
}

inline ForestLibrary load_forest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open forest file '" + path + "'", 0);
  return parse_forest(in);
}

/// Path from CENTERED_BOUND_FOREST, when set and nonempty.
inline std::optional<std::string> forest_env_path() {
  const char* p = std::getenv("CENTERED_BOUND_FOREST");
  if (p && *p) return std::string(p);
  return std::nullopt;
}

}  // namespace centered_bound
