#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhidden/formula.hpp"

namespace qhidden {

struct DimacsDocument {
  Formula formula;
  std::optional<Assignment> hidden;
  /// Comment lines other than "c hidden", without the leading "c ".
  std::vector<std::string> comments;
};

/// Serializes to DIMACS CNF. Output order: `comments` (each as "c <text>"),
/// then "c hidden <±1 ... ±n>" when `hidden` is given, then the header and
/// one 0-terminated clause per line.
std::string write_dimacs(const Formula& formula,
                         const std::optional<Assignment>& hidden = std::nullopt,
                         const std::vector<std::string>& comments = {});

/// Parses DIMACS CNF. Clauses may span lines. Throws ParseError for a
/// missing or malformed header, a non-integer token, an unterminated clause
/// or a clause count that disagrees with the header; throws ValidationError
/// when a literal references a variable above n or a "c hidden" line does
/// not describe an assignment of length n.
DimacsDocument parse_dimacs(std::string_view text);

}  // namespace qhidden
