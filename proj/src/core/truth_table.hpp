#pragma once

// Dense truth tables for small Boolean functions. Input strings are indexed
// most-significant-bit first: the string x1 x2 ... xn maps to the integer
// whose top bit is x1.

#include <cstdint>
#include <functional>
#include <vector>

namespace odec {

class TruthTable {
 public:
  // n up to 20; the construction-oriented operations cap n tighter.
  explicit TruthTable(uint32_t n);

  static TruthTable from_function(uint32_t n,
                                  const std::function<bool(uint64_t)>& f);

  uint32_t n() const { return n_; }
  uint64_t entries() const { return uint64_t(1) << n_; }

  bool at(uint64_t x) const { return bits_[x] != 0; }
  void set(uint64_t x, bool v) { bits_[x] = v ? 1 : 0; }

  uint64_t count_ones() const;

  bool operator==(const TruthTable&) const = default;

 private:
  uint32_t n_;
  std::vector<uint8_t> bits_;
};

}  // namespace odec
