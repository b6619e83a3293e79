#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace centered_bound {

/// Numeric input left the domain of a kernel formula (e.g. an inverse
/// trig argument farther than the roundoff clamp allows).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A tree code tuple violates the encoding rules.
class InvalidTreeCode : public std::runtime_error {
public:
  InvalidTreeCode(std::string what, int violation_index)
      : std::runtime_error(std::move(what)), index(violation_index) {}
  int index;  ///< position of the first offending entry (or vertex)
};

/// An operation received a tuple of the wrong size, or n < 3.
class InvalidArity : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A forest catalog file does not follow the expected layout.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string what, std::size_t line_number)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + std::move(what)),
        line(line_number) {}
  std::size_t line;  ///< 1-based line of the first violation
};

/// The configured tree source has no catalog for the requested n.
class MissingCatalog : public std::runtime_error {
public:
  MissingCatalog(std::string what, int edge_count)
      : std::runtime_error(std::move(what)), n(edge_count) {}
  int n;
};

/// A brute-force validator was asked for more work than its guard allows.
class CostGuard : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace centered_bound
