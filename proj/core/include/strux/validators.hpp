#pragma once

// Property checkers. Structural properties are exact; semantic ones
// (determinism, SDD partitions) enumerate exhaustively up to a cap and fall
// back to seeded sampling above it, with the report labeled accordingly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/varset.hpp"
#include "strux/vtree.hpp"

namespace strux {

enum class CircuitProperty {
  decomposable,
  deterministic,
  smooth,
  simple,
  respects_vtree,
  sdd,
  partition,
};

enum class RespectMode {
  sdd_oriented,      // left input under the left vtree child, right under right
  ddnnf_unoriented,  // either orientation of the two inputs
};

struct PropertyReport {
  CircuitProperty property = CircuitProperty::decomposable;
  bool holds = true;
  bool sampled = false;  // a positive verdict that rests partly on sampling
  std::vector<NodeRef> witness_gates;
  std::optional<Assignment> witness_assignment;
  std::string detail;
};

const char* property_name(CircuitProperty p);

// Every ∧-gate's inputs mention pairwise disjoint variables.
PropertyReport check_decomposable(const Circuit& c);

// Every ∨-gate's inputs are pairwise unsatisfiable together. Exhaustive over
// the whole universe when small, else per-gate over the gate's variables,
// else sampled.
PropertyReport check_deterministic(const Circuit& c, std::size_t cap = 20,
                                   std::uint64_t seed = 1);

// Every ∨-gate's inputs mention exactly the gate's variables.
PropertyReport check_smooth(const Circuit& c);

// No ∨→∨ wire, no constant input to an ∨-gate, and ⊥-labeled nodes are the
// only nodes computing ⊥ (requires decomposability to decide).
PropertyReport check_simple(const Circuit& c);

// Structuredness: each ∧-gate's inputs fit the two sides of some vtree node.
PropertyReport check_respects_vtree(const Circuit& c, const Vtree& t, RespectMode mode);

// Syntactic SDD shape with full prime partitions: the circuit is a constant,
// a literal of t, or an ∨ of binary ∧-gates (prime, sub) placed at some
// internal vtree node w with primes under left(w), subs under right(w),
// primes recursively SDDs that are pairwise disjoint, never ⊥, and
// exhaustive. check_sdd_node anchors the check at a given subcircuit root
// and vtree node.
PropertyReport check_sdd(const Circuit& c, const Vtree& t, std::size_t cap = 20,
                         std::uint64_t seed = 1);
PropertyReport check_sdd_node(const Circuit& c, NodeRef root, const Vtree& t, VtreeRef at,
                              std::size_t cap = 20, std::uint64_t seed = 1);

// A family of subcircuit functions, possibly drawn from different circuits.
struct PartitionMember {
  const Circuit* circuit;
  NodeRef node;
};

// The members must be pairwise disjoint, individually satisfiable, and
// jointly exhaustive over the given variables.
PropertyReport check_partition(const std::vector<PartitionMember>& members,
                               const std::vector<VarId>& over, std::size_t cap = 20,
                               std::uint64_t seed = 1);

}  // namespace strux
