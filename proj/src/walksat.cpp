#include <algorithm>
#include <span>
#include <stdexcept>

#include "qhidden/error.hpp"
#include "qhidden/rng.hpp"
#include "qhidden/solvers.hpp"

namespace qhidden {
namespace {

constexpr std::uint32_t kNotListed = UINT32_MAX;

class WalkSat {
 public:
  WalkSat(const Formula& formula, const WalkSatParams& params)
      : formula_(formula),
        params_(params),
        rng_(params.seed),
        value_(formula.num_vars()),
        num_true_(formula.num_clauses()),
        true_xor_(formula.num_clauses()),
        break_(formula.num_vars()),
        where_(formula.num_clauses(), kNotListed) {
    // Flat occurrence lists: clauses containing literal code l are
    // occ_[occ_start_[l] .. occ_start_[l+1]).
    const auto lists = occurrence_lists(formula);
    occ_start_.reserve(lists.size() + 1);
    occ_start_.push_back(0);
    for (const auto& l : lists) {
      occ_.insert(occ_.end(), l.begin(), l.end());
      occ_start_.push_back(static_cast<std::uint32_t>(occ_.size()));
    }
    unsat_.reserve(formula.num_clauses());
  }

  SolveOutcome solve() {
    SolveOutcome out;
    for (std::uint64_t attempt = 0; attempt < params_.max_tries; ++attempt) {
      restart();
      for (std::uint64_t step = 0; !unsat_.empty() && step < params_.max_flips; ++step) {
        flip(pick_variable());
        ++out.effort;
      }
      if (unsat_.empty()) {
        Assignment model{std::vector<std::uint8_t>(value_)};
        if (evaluate(formula_, model) != 0)
          throw std::logic_error("walksat_solve produced a model that does not satisfy the formula");
        out.status = SolveStatus::Sat;
        out.model = std::move(model);
        return out;
      }
    }
    out.status = SolveStatus::GaveUp;
    return out;
  }

 private:
  bool is_true(Literal lit) const { return (value_[lit.index()] != 0) == lit.positive(); }

  std::span<const std::uint32_t> occurrences(Literal lit) const {
    return {occ_.data() + occ_start_[lit.code()], occ_start_[lit.code() + 1] - occ_start_[lit.code()]};
  }

  void restart() {
    for (auto& v : value_) v = rng_.coin() ? 1 : 0;
    std::fill(break_.begin(), break_.end(), 0);
    for (auto c : unsat_) where_[c] = kNotListed;
    unsat_.clear();
    for (std::size_t c = 0; c < formula_.num_clauses(); ++c) {
      std::uint32_t count = 0;
      std::uint32_t x = 0;
      for (Literal lit : formula_.clause(c)) {
        if (is_true(lit)) {
          ++count;
          x ^= lit.index();
        }
      }
      num_true_[c] = count;
      true_xor_[c] = x;
      if (count == 0) add_unsat(static_cast<std::uint32_t>(c));
      else if (count == 1) ++break_[x];
    }
  }

  void add_unsat(std::uint32_t c) {
    where_[c] = static_cast<std::uint32_t>(unsat_.size());
    unsat_.push_back(c);
  }

  void remove_unsat(std::uint32_t c) {
    const auto last = unsat_.back();
    unsat_[where_[c]] = last;
    where_[last] = where_[c];
    unsat_.pop_back();
    where_[c] = kNotListed;
  }

  std::int64_t make_count(Literal false_lit) const {
    std::int64_t make = 0;
    for (auto c : occurrences(false_lit)) make += (num_true_[c] == 0);
    return make;
  }

  std::uint32_t pick_variable() {
    const auto c = unsat_[rng_.below(unsat_.size())];
    const auto clause = formula_.clause(c);
    if (rng_.bernoulli(params_.noise)) return clause[rng_.below(clause.size())].index();

    // Greedy: best score, ties broken uniformly by reservoir sampling.
    std::uint32_t best = clause[0].index();
    std::int64_t best_score = 0;
    std::uint64_t ties = 0;
    for (Literal lit : clause) {
      std::int64_t score = -static_cast<std::int64_t>(break_[lit.index()]);
      if (params_.greedy == GreedyRule::NetGain) score += make_count(lit);
      if (ties == 0 || score > best_score) {
        best = lit.index();
        best_score = score;
        ties = 1;
      } else if (score == best_score && rng_.below(++ties) == 0) {
        best = lit.index();
      }
    }
    return best;
  }

  // true_xor_[c] is the XOR of the indices of the true variables in c, so
  // when exactly one literal is true it names that variable.
  void flip(std::uint32_t v) {
    const Literal was_true(v + 1, value_[v] != 0);
    value_[v] ^= 1;
    for (auto c : occurrences(was_true)) {
      true_xor_[c] ^= v;
      const auto count = --num_true_[c];
      if (count == 0) {
        add_unsat(c);
        --break_[v];
      } else if (count == 1) {
        ++break_[true_xor_[c]];
      }
    }
    for (auto c : occurrences(~was_true)) {
      const auto count = ++num_true_[c];
      if (count == 1) {
        remove_unsat(c);
        ++break_[v];
      } else if (count == 2) {
        --break_[true_xor_[c]];
      }
      true_xor_[c] ^= v;
    }
  }

  const Formula& formula_;
  WalkSatParams params_;
  std::vector<std::uint32_t> occ_;
  std::vector<std::uint32_t> occ_start_;
  Rng rng_;
  std::vector<std::uint8_t> value_;
  std::vector<std::uint32_t> num_true_;
  std::vector<std::uint32_t> true_xor_;
  std::vector<std::uint32_t> break_;
  std::vector<std::uint32_t> unsat_;
  std::vector<std::uint32_t> where_;
};

}  // namespace

SolveOutcome walksat_solve(const Formula& formula, const WalkSatParams& params) {
  if (params.max_flips == 0 || params.max_tries == 0)
    throw ParameterError("WalkSAT budgets must be positive");
  if (!(params.noise >= 0.0 && params.noise <= 1.0))
    throw ParameterError("WalkSAT noise must lie in [0, 1]");
  return WalkSat(formula, params).solve();
}

}  // namespace qhidden
