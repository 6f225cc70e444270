#include <deque>
#include <stdexcept>

#include "qhidden/rng.hpp"
#include "qhidden/solvers.hpp"

namespace qhidden {
namespace {

constexpr std::uint8_t kUnset = 2;

class UnitClauseRun {
 public:
  UnitClauseRun(const Formula& formula, std::uint64_t seed)
      : formula_(formula),
        occ_(occurrence_lists(formula)),
        rng_(seed),
        value_(formula.num_vars(), kUnset),
        satisfied_(formula.num_clauses(), 0),
        open_(formula.num_clauses()),
        unset_(formula.num_vars()),
        where_(formula.num_vars()) {
    for (std::uint32_t v = 0; v < formula.num_vars(); ++v) unset_[v] = where_[v] = v;
    for (std::size_t c = 0; c < formula.num_clauses(); ++c) {
      open_[c] = static_cast<std::uint32_t>(formula.clause(c).size());
      if (open_[c] == 1) units_.push_back(static_cast<std::uint32_t>(c));
    }
  }

  SolveOutcome run() {
    SolveOutcome out;
    bool ok = propagate();
    while (ok && !unset_.empty()) {
      ++out.effort;
      const auto var = unset_[rng_.below(unset_.size())];
      ok = assign(Literal(var + 1, rng_.coin())) && propagate();
    }
    if (!ok) {
      out.status = SolveStatus::GaveUp;
      return out;
    }
    Assignment model(formula_.num_vars());
    for (std::uint32_t v = 0; v < formula_.num_vars(); ++v) model.set(v, value_[v] == 1);
    if (evaluate(formula_, model) != 0)
      throw std::logic_error("uc_run produced a model that does not satisfy the formula");
    out.status = SolveStatus::Sat;
    out.model = std::move(model);
    return out;
  }

 private:
  // Returns false when some clause loses its last open literal.
  bool assign(Literal lit) {
    const auto v = lit.index();
    value_[v] = lit.positive() ? 1 : 0;
    const auto last = unset_.back();
    unset_[where_[v]] = last;
    where_[last] = where_[v];
    unset_.pop_back();

    for (auto c : occ_[lit.code()]) satisfied_[c] = 1;
    bool ok = true;
    for (auto c : occ_[(~lit).code()]) {
      if (satisfied_[c]) continue;
      if (--open_[c] == 0) ok = false;
      else if (open_[c] == 1) units_.push_back(c);
    }
    return ok;
  }

  bool propagate() {
    while (!units_.empty()) {
      const auto c = units_.front();
      units_.pop_front();
      if (satisfied_[c]) continue;
      for (Literal lit : formula_.clause(c)) {
        if (value_[lit.index()] == kUnset) {
          if (!assign(lit)) return false;
          break;
        }
      }
    }
    return true;
  }

  const Formula& formula_;
  std::vector<std::vector<std::uint32_t>> occ_;
  Rng rng_;
  std::vector<std::uint8_t> value_;
  std::vector<std::uint8_t> satisfied_;
  std::vector<std::uint32_t> open_;
  std::vector<std::uint32_t> unset_;
  std::vector<std::uint32_t> where_;
  std::deque<std::uint32_t> units_;
};

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::GaveUp: return "gaveup";
  }
  return "?";
}

SolveOutcome uc_run(const Formula& formula, std::uint64_t seed) {
  return UnitClauseRun(formula, seed).run();
}

}  // namespace qhidden
