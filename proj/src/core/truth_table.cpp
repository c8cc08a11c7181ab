#include "core/truth_table.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace odec {

TruthTable::TruthTable(uint32_t n) : n_(n) {
  if (n == 0 || n > 20)
    fail(errc::resource_limit, "truth table arity must be in [1, 20]");
  bits_.assign(uint64_t(1) << n, 0);
}

TruthTable TruthTable::from_function(uint32_t n,
                                     const std::function<bool(uint64_t)>& f) {
  TruthTable t(n);
  for (uint64_t x = 0; x < t.entries(); ++x) t.set(x, f(x));
  return t;
}

uint64_t TruthTable::count_ones() const {
  return std::count(bits_.begin(), bits_.end(), uint8_t(1));
}

}  // namespace odec
