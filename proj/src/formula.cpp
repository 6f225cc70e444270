#include "qhidden/formula.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "qhidden/error.hpp"

namespace qhidden {

Assignment Assignment::complement() const {
  Assignment out(*this);
  for (auto& v : out.values_) v ^= 1;
  return out;
}

Formula::Formula(std::uint32_t n, std::uint32_t k, std::vector<Literal> literals)
    : n_(n), k_(k), literals_(std::move(literals)) {
  if (k == 0) throw ValidationError("clause width must be positive");
  if (literals_.size() % k != 0)
    throw ValidationError("literal count " + std::to_string(literals_.size()) +
                          " is not a multiple of k=" + std::to_string(k));
  const std::size_t m = literals_.size() / k;
  offsets_.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) offsets_[i] = i * k;
  validate();
}

Formula::Formula(std::uint32_t n, std::vector<std::vector<Literal>> clauses)
    : n_(n) {
  offsets_.reserve(clauses.size() + 1);
  for (const auto& c : clauses) {
    if (k_ != 0 && c.size() != k_) uniform_ = false;
    k_ = std::max<std::uint32_t>(k_, static_cast<std::uint32_t>(c.size()));
    literals_.insert(literals_.end(), c.begin(), c.end());
    offsets_.push_back(literals_.size());
  }
  validate();
}

Formula Formula::from_dimacs(
    std::uint32_t n, std::initializer_list<std::initializer_list<int>> clauses) {
  std::vector<std::vector<Literal>> out;
  for (const auto& c : clauses) {
    auto& clause = out.emplace_back();
    for (int v : c) {
      if (v == 0) throw ValidationError("literal 0 is not a variable");
      clause.push_back(Literal::from_dimacs(v));
    }
  }
  return Formula(n, std::move(out));
}

void Formula::validate() const {
  std::vector<std::size_t> seen(n_, SIZE_MAX);
  for (std::size_t c = 0; c + 1 < offsets_.size(); ++c) {
    if (offsets_[c] == offsets_[c + 1])
      throw ValidationError("clause " + std::to_string(c + 1) + " is empty");
    for (Literal lit : clause(c)) {
      if (lit.var() > n_)
        throw ValidationError("clause " + std::to_string(c + 1) +
                              ": variable " + std::to_string(lit.var()) +
                              " exceeds n=" + std::to_string(n_));
      if (seen[lit.index()] == c)
        throw ValidationError("clause " + std::to_string(c + 1) +
                              ": variable " + std::to_string(lit.var()) +
                              " appears twice");
      seen[lit.index()] = c;
    }
  }
}

std::size_t evaluate(const Formula& formula, const Assignment& assignment) {
  if (assignment.size() != formula.num_vars())
    throw DimensionError("assignment has " + std::to_string(assignment.size()) +
                         " values, formula has " +
                         std::to_string(formula.num_vars()) + " variables");
  std::size_t unsat = 0;
  for (std::size_t c = 0; c < formula.num_clauses(); ++c) {
    bool sat = false;
    for (Literal lit : formula.clause(c)) {
      if (assignment.satisfies(lit)) {
        sat = true;
        break;
      }
    }
    if (!sat) ++unsat;
  }
  return unsat;
}

double overlap_alpha(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size())
    throw DimensionError("assignments differ in length: " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.size() == 0) throw DimensionError("overlap of empty assignments");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) agree += (a[i] == b[i]);
  return static_cast<double>(agree) / static_cast<double>(a.size());
}

std::vector<std::vector<std::uint32_t>> occurrence_lists(const Formula& formula) {
  std::vector<std::vector<std::uint32_t>> occ(2 * std::size_t{formula.num_vars()});
  for (std::size_t c = 0; c < formula.num_clauses(); ++c)
    for (Literal lit : formula.clause(c))
      occ[lit.code()].push_back(static_cast<std::uint32_t>(c));
  return occ;
}

}  // namespace qhidden
