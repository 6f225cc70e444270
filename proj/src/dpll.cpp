#include <stdexcept>

#include "qhidden/error.hpp"
#include "qhidden/rng.hpp"
#include "qhidden/solvers.hpp"

namespace qhidden {
namespace {

constexpr std::uint8_t kUnset = 2;

// Counter-based DPLL: every clause tracks how many of its literals are true
// and how many are false, so assignment and undo are both O(occurrences).
class Dpll {
 public:
  Dpll(const Formula& formula, std::uint64_t seed, const DpllOptions& options)
      : formula_(formula),
        options_(options),
        occ_(occurrence_lists(formula)),
        rng_(seed),
        value_(formula.num_vars(), kUnset),
        num_true_(formula.num_clauses(), 0),
        num_false_(formula.num_clauses(), 0),
        unset_(formula.num_vars()),
        where_(formula.num_vars()) {
    for (std::uint32_t v = 0; v < formula.num_vars(); ++v) unset_[v] = where_[v] = v;
  }

  SolveOutcome solve() {
    SolveOutcome out;
    for (std::size_t c = 0; c < formula_.num_clauses(); ++c)
      if (formula_.clause(c).size() == 1) pending_.push_back(static_cast<std::uint32_t>(c));
    bool ok = propagate();

    while (true) {
      if (!ok) {
        if (!options_.backtrack) {
          out.status = SolveStatus::GaveUp;
          return out;
        }
        // Unwind to the deepest split whose second value is still untried.
        while (!frames_.empty() && frames_.back().second_tried) {
          undo_to(frames_.back().trail_size);
          frames_.pop_back();
        }
        if (frames_.empty()) {
          out.status = SolveStatus::Unsat;
          return out;
        }
        if (out.effort >= static_cast<std::uint64_t>(options_.node_limit)) {
          out.status = SolveStatus::GaveUp;
          return out;
        }
        Frame& f = frames_.back();
        undo_to(f.trail_size);
        f.second_tried = true;
        ++out.effort;
        ok = assign(~f.first) && propagate();
        continue;
      }
      if (satisfied_count_ == formula_.num_clauses()) break;
      if (out.effort >= static_cast<std::uint64_t>(options_.node_limit)) {
        out.status = SolveStatus::GaveUp;
        return out;
      }
      const auto var = unset_[rng_.below(unset_.size())];
      const Literal lit(var + 1, rng_.coin());
      frames_.push_back({trail_.size(), lit, false});
      ++out.effort;
      ok = assign(lit) && propagate();
    }

    // Every clause is satisfied; variables left open get false.
    Assignment model(formula_.num_vars());
    for (std::uint32_t v = 0; v < formula_.num_vars(); ++v) model.set(v, value_[v] == 1);
    if (evaluate(formula_, model) != 0)
      throw std::logic_error("dpll_solve produced a model that does not satisfy the formula");
    out.status = SolveStatus::Sat;
    out.model = std::move(model);
    return out;
  }

 private:
  struct Frame {
    std::size_t trail_size;
    Literal first;
    bool second_tried;
  };

  bool assign(Literal lit) {
    const auto v = lit.index();
    value_[v] = lit.positive() ? 1 : 0;
    const auto last = unset_.back();
    unset_[where_[v]] = last;
    where_[last] = where_[v];
    unset_.pop_back();
    trail_.push_back(lit);

    for (auto c : occ_[lit.code()])
      if (num_true_[c]++ == 0) ++satisfied_count_;
    bool ok = true;
    for (auto c : occ_[(~lit).code()]) {
      const auto size = formula_.clause(c).size();
      ++num_false_[c];
      if (num_true_[c] != 0) continue;
      if (num_false_[c] == size) ok = false;
      else if (num_false_[c] + 1 == size) pending_.push_back(c);
    }
    return ok;
  }

  void undo_to(std::size_t trail_size) {
    pending_.clear();
    while (trail_.size() > trail_size) {
      const Literal lit = trail_.back();
      trail_.pop_back();
      for (auto c : occ_[lit.code()])
        if (--num_true_[c] == 0) --satisfied_count_;
      for (auto c : occ_[(~lit).code()]) --num_false_[c];
      const auto v = lit.index();
      value_[v] = kUnset;
      where_[v] = static_cast<std::uint32_t>(unset_.size());
      unset_.push_back(v);
    }
  }

  bool propagate() {
    while (!pending_.empty()) {
      const auto c = pending_.back();
      pending_.pop_back();
      if (num_true_[c] != 0) continue;
      bool found = false;
      for (Literal lit : formula_.clause(c)) {
        if (value_[lit.index()] == kUnset) {
          found = true;
          if (!assign(lit)) {
            pending_.clear();
            return false;
          }
          break;
        }
      }
      if (!found) {
        pending_.clear();
        return false;
      }
    }
    return true;
  }

  const Formula& formula_;
  DpllOptions options_;
  std::vector<std::vector<std::uint32_t>> occ_;
  Rng rng_;
  std::vector<std::uint8_t> value_;
  std::vector<std::uint32_t> num_true_;
  std::vector<std::uint32_t> num_false_;
  std::size_t satisfied_count_ = 0;
  std::vector<std::uint32_t> unset_;
  std::vector<std::uint32_t> where_;
  std::vector<Literal> trail_;
  std::vector<Frame> frames_;
  std::vector<std::uint32_t> pending_;
};

}  // namespace

SolveOutcome dpll_solve(const Formula& formula, std::uint64_t seed, const DpllOptions& options) {
  if (options.node_limit <= 0) throw ParameterError("node_limit must be positive");
  return Dpll(formula, seed, options).solve();
}

}  // namespace qhidden
