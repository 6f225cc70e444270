#include "qhidden/rng.hpp"
#include "qhidden/solvers.hpp"

namespace qhidden {

Assignment majority_assignment(const Formula& formula, std::uint64_t seed) {
  std::vector<std::int64_t> balance(formula.num_vars(), 0);
  for (Literal lit : formula.literals()) balance[lit.index()] += lit.positive() ? 1 : -1;
  Rng rng(seed);
  Assignment a(formula.num_vars());
  for (std::uint32_t v = 0; v < formula.num_vars(); ++v)
    a.set(v, balance[v] == 0 ? rng.coin() : balance[v] > 0);
  return a;
}

}  // namespace qhidden
