#include "qhidden/dimacs.hpp"

#include <charconv>
#include <cstdint>

#include "qhidden/error.hpp"

namespace qhidden {
namespace {

constexpr std::string_view kHiddenTag = "c hidden";

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool to_int(std::string_view token, std::int64_t& value) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

Assignment parse_hidden(std::string_view rest, std::uint32_t n, std::size_t line) {
  auto tokens = split_ws(rest);
  if (tokens.size() != n)
    throw ValidationError("line " + std::to_string(line) + ": hidden assignment has " +
                          std::to_string(tokens.size()) + " values, expected " +
                          std::to_string(n));
  Assignment a(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::int64_t v = 0;
    if (!to_int(tokens[i], v)) throw ParseError(line, "bad hidden value '" + std::string(tokens[i]) + "'");
    if (v != static_cast<std::int64_t>(i + 1) && v != -static_cast<std::int64_t>(i + 1))
      throw ValidationError("line " + std::to_string(line) + ": hidden value " +
                            std::to_string(v) + " out of order at position " +
                            std::to_string(i + 1));
    a.set(i, v > 0);
  }
  return a;
}

}  // namespace

std::string write_dimacs(const Formula& formula, const std::optional<Assignment>& hidden,
                         const std::vector<std::string>& comments) {
  std::string out;
  out.reserve(formula.literals().size() * 6 + 64);
  for (const auto& c : comments) {
    out += "c ";
    out += c;
    out += '\n';
  }
  if (hidden) {
    if (hidden->size() != formula.num_vars())
      throw DimensionError("hidden assignment length does not match formula");
    out += kHiddenTag;
    for (std::size_t i = 0; i < hidden->size(); ++i) {
      out += ' ';
      if (!(*hidden)[i]) out += '-';
      out += std::to_string(i + 1);
    }
    out += '\n';
  }
  out += "p cnf " + std::to_string(formula.num_vars()) + " " +
         std::to_string(formula.num_clauses()) + "\n";
  for (std::size_t c = 0; c < formula.num_clauses(); ++c) {
    for (Literal lit : formula.clause(c)) {
      out += std::to_string(lit.dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

DimacsDocument parse_dimacs(std::string_view text) {
  DimacsDocument doc;
  bool have_header = false;
  std::int64_t n = 0, m = 0;
  std::vector<std::vector<Literal>> clauses;
  std::vector<Literal> current;
  std::size_t clause_start_line = 0;
  std::optional<std::string_view> hidden_text;
  std::size_t hidden_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "c" || tokens[0][0] == 'c') {
      if (line.starts_with(kHiddenTag) &&
          (line.size() == kHiddenTag.size() || line[kHiddenTag.size()] == ' ')) {
        hidden_text = line.substr(kHiddenTag.size());
        hidden_line = line_no;
      } else if (!have_header) {
        std::string_view body = line.substr(1);
        if (!body.empty() && body[0] == ' ') body.remove_prefix(1);
        doc.comments.emplace_back(body);
      }
      continue;
    }
    if (tokens[0] == "%") break;  // SATLIB end marker
    if (tokens[0] == "p") {
      if (have_header) throw ParseError(line_no, "duplicate header");
      if (tokens.size() != 4 || tokens[1] != "cnf" || !to_int(tokens[2], n) ||
          !to_int(tokens[3], m) || n < 0 || m < 0 || n > UINT32_MAX)
        throw ParseError(line_no, "malformed header, expected 'p cnf <n> <m>'");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause data before 'p cnf' header");
    for (auto tok : tokens) {
      std::int64_t v = 0;
      if (!to_int(tok, v)) throw ParseError(line_no, "bad literal '" + std::string(tok) + "'");
      if (v == 0) {
        if (current.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty clause");
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (v > n || -v > n)
        throw ValidationError("line " + std::to_string(line_no) + ": variable " +
                              std::to_string(v < 0 ? -v : v) + " exceeds n=" +
                              std::to_string(n));
      if (current.empty()) clause_start_line = line_no;
      current.push_back(Literal::from_dimacs(v));
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (!current.empty()) throw ParseError(clause_start_line, "clause not terminated by 0");
  if (static_cast<std::int64_t>(clauses.size()) != m)
    throw ParseError(line_no, "header declares " + std::to_string(m) + " clauses, found " +
                                  std::to_string(clauses.size()));

  const auto nv = static_cast<std::uint32_t>(n);
  // A uniform formula keeps its width even if it has no clauses.
  bool uniform = true;
  for (const auto& c : clauses) uniform = uniform && c.size() == clauses.front().size();
  if (uniform && !clauses.empty()) {
    std::vector<Literal> flat;
    flat.reserve(clauses.size() * clauses.front().size());
    for (const auto& c : clauses) flat.insert(flat.end(), c.begin(), c.end());
    doc.formula = Formula(nv, static_cast<std::uint32_t>(clauses.front().size()), std::move(flat));
  } else {
    doc.formula = Formula(nv, std::move(clauses));
  }
  if (hidden_text) doc.hidden = parse_hidden(*hidden_text, nv, hidden_line);
  return doc;
}

}  // namespace qhidden
