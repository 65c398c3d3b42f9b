#pragma once

// Brute-force semantic tools used as ground truth by validators and tests.
// Exhaustive enumeration is bounded by caps; callers beyond a cap either get
// an error (tables, counts) or a seeded sampling fallback (equivalence).

#include <cstdint>
#include <optional>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/varset.hpp"
#include "strux/vtree.hpp"

namespace strux {

// Largest variable count enumerated exhaustively for truth tables and counts.
inline constexpr std::size_t kTableCap = 22;
// Largest variable count for all-pairs gate comparisons inside validators.
inline constexpr std::size_t kPairCap = 12;

struct TruthTable {
  std::vector<VarId> order;         // bit k of an assignment index = value of order[k]
  std::vector<std::uint64_t> bits;  // 2^order.size() result bits, 64 per word
  bool bit(std::uint64_t index) const {
    return (bits[index >> 6] >> (index & 63)) & 1;
  }
  std::uint64_t assignment_count() const { return std::uint64_t{1} << order.size(); }
  bool operator==(const TruthTable& o) const = default;
};

// Table of the subcircuit at `node` over `over` (ascending var list required;
// must cover the subcircuit's variables). Throws input_error past `cap`.
TruthTable truth_table(const Circuit& c, NodeRef node, const std::vector<VarId>& over,
                       std::size_t cap = kTableCap);
// Whole circuit over its sorted universe.
TruthTable truth_table(const Circuit& c, std::size_t cap = kTableCap);

// Number of satisfying assignments over `over` (defaults to the universe).
std::uint64_t model_count(const Circuit& c, std::size_t cap = kTableCap);
std::uint64_t model_count(const Circuit& c, const std::vector<VarId>& over,
                          std::size_t cap = kTableCap);

struct EquivOptions {
  std::size_t cap = kTableCap;     // exhaustive up to this many enumerated vars
  std::uint64_t samples = 1 << 16; // sampling fallback volume
  std::uint64_t seed = 1;
  VarSet aux;                      // compared with aux held all-0 and all-1
};

struct EquivResult {
  bool equivalent = false;
  bool sampled = false;  // true when the verdict rests on sampling only
  std::optional<Assignment> counterexample;
};

// Function equality of two circuits over the union of their universes. Aux
// variables are excluded from enumeration and toggled as a block instead.
EquivResult equivalent(const Circuit& a, const Circuit& b, const EquivOptions& opts = {});

// Distinct residual functions over the non-fixed variables as the `fixed`
// variables range over all assignments. Throws input_error past the cap.
std::uint64_t count_subfunctions(const Circuit& c, const std::vector<VarId>& fixed,
                                 std::size_t cap = kTableCap);

// Disjunction of vtree-shaped minterms of the complement of c, over all of
// t's variables. Yields a deterministic smooth simple structured d-DNNF
// (constant when c is). Sized 2^n, so capped low.
Circuit minterm_complement(const Circuit& c, const Vtree& t, std::size_t cap = 16);

}  // namespace strux
