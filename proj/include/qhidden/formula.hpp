#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace qhidden {

/// A variable together with a polarity.
///
/// Variables are 1-based, as in DIMACS. Internally a literal is packed as
/// 2*(var-1) + (negative ? 1 : 0), which doubles as a dense index for
/// occurrence lists.
class Literal {
 public:
  Literal() = default;
  Literal(std::uint32_t var, bool positive)
      : code_(2 * (var - 1) + (positive ? 0U : 1U)) {}

  /// Builds a literal from a signed DIMACS integer (nonzero).
  static Literal from_dimacs(std::int64_t value) {
    return value > 0 ? Literal(static_cast<std::uint32_t>(value), true)
                     : Literal(static_cast<std::uint32_t>(-value), false);
  }
  static Literal from_code(std::uint32_t code) {
    Literal lit;
    lit.code_ = code;
    return lit;
  }

  std::uint32_t var() const { return (code_ >> 1) + 1; }
  /// Zero-based variable index.
  std::uint32_t index() const { return code_ >> 1; }
  bool positive() const { return (code_ & 1U) == 0; }
  std::uint32_t code() const { return code_; }
  std::int64_t dimacs() const {
    return positive() ? static_cast<std::int64_t>(var())
                      : -static_cast<std::int64_t>(var());
  }

  Literal operator~() const { return from_code(code_ ^ 1U); }
  friend bool operator==(Literal, Literal) = default;

 private:
  std::uint32_t code_ = 0;
};

/// A total truth assignment over n variables, indexed from 0.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n, bool value = false) : values_(n, value) {}
  explicit Assignment(std::vector<std::uint8_t> values)
      : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool operator[](std::size_t i) const { return values_[i] != 0; }
  void set(std::size_t i, bool value) { values_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { values_[i] ^= 1; }

  bool satisfies(Literal lit) const {
    return (values_[lit.index()] != 0) == lit.positive();
  }

  Assignment complement() const;

  std::span<const std::uint8_t> values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

/// An immutable CNF formula over variables 1..n.
///
/// Clauses are stored contiguously; clause(i) returns a view. Literal order
/// inside a clause is preserved as given. Duplicate clauses are allowed;
/// a clause may not mention the same variable twice and may not be empty.
class Formula {
 public:
  Formula() = default;

  /// Uniform-width formula from a flat literal list of m*k entries.
  /// Throws ValidationError if an invariant is violated.
  Formula(std::uint32_t n, std::uint32_t k, std::vector<Literal> literals);

  /// General formula from an explicit clause list (widths may differ).
  Formula(std::uint32_t n, std::vector<std::vector<Literal>> clauses);

  /// Convenience constructor from DIMACS-style signed integers.
  static Formula from_dimacs(
      std::uint32_t n,
      std::initializer_list<std::initializer_list<int>> clauses);

  std::uint32_t num_vars() const { return n_; }
  std::size_t num_clauses() const { return offsets_.size() - 1; }
  /// Common clause width, or the largest width for mixed formulas.
  std::uint32_t width() const { return k_; }
  bool uniform() const { return uniform_; }

  std::span<const Literal> clause(std::size_t i) const {
    return {literals_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const Literal> literals() const { return literals_; }

  /// Same variable count and the same clause sequence.
  friend bool operator==(const Formula& a, const Formula& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.literals_ == b.literals_;
  }

 private:
  void validate() const;

  std::uint32_t n_ = 0;
  std::uint32_t k_ = 0;
  bool uniform_ = true;
  std::vector<Literal> literals_;
  std::vector<std::size_t> offsets_{0};
};

/// Number of clauses not satisfied by `assignment`.
/// Throws DimensionError if assignment.size() != formula.num_vars().
std::size_t evaluate(const Formula& formula, const Assignment& assignment);

/// Fraction of positions on which a and b agree.
double overlap_alpha(const Assignment& a, const Assignment& b);

/// Occurrence lists indexed by Literal::code(): for each literal, the
/// clauses that contain it.
std::vector<std::vector<std::uint32_t>> occurrence_lists(const Formula& formula);

}  // namespace qhidden
