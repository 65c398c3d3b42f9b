#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "strux/errors.hpp"
#include "strux/varset.hpp"

namespace strux {

using NodeRef = std::uint32_t;
inline constexpr NodeRef kNullNode = 0xFFFFFFFFu;

enum class GateKind : std::uint8_t {
  const_false,
  const_true,
  literal,
  and_gate,  // exactly two children
  or_gate,   // one or more children, ordered
};

inline bool is_constant(GateKind k) {
  return k == GateKind::const_false || k == GateKind::const_true;
}

struct Gate {
  GateKind kind;
  bool positive;            // literal only
  VarId var;                // literal only
  std::uint32_t child_off;  // and/or: range into the shared child pool
  std::uint32_t child_cnt;
};

// Immutable gate DAG. Node indices are topological: every child index is
// strictly smaller than its parent's, and the root is the last node, so a
// single ascending scan visits children first. All nodes are reachable from
// the root. Built via CircuitBuilder.
class Circuit {
 public:
  NodeRef root() const { return root_; }
  std::size_t size() const { return gates_.size(); }
  std::size_t edge_count() const { return children_.size(); }
  const VarSet& universe() const { return universe_; }

  GateKind kind(NodeRef n) const { return gate(n).kind; }
  VarId var(NodeRef n) const { return gate(n).var; }
  bool positive(NodeRef n) const { return gate(n).positive; }

  std::span<const NodeRef> children(NodeRef n) const {
    const Gate& g = gate(n);
    return {children_.data() + g.child_off, g.child_cnt};
  }

  // Variables mentioned in the subgraph rooted at n.
  const VarSet& vars(NodeRef n) const {
    check_ref(n);
    return vars_[n];
  }

  bool evaluate(const Assignment& a) const { return evaluate(root_, a); }
  bool evaluate(NodeRef n, const Assignment& a) const;

  // Linear satisfiability scan; sound only for decomposable subcircuits,
  // which is verified on the fly (offending gate reported otherwise).
  bool is_satisfiable_dnnf() const { return is_satisfiable_dnnf(root_); }
  bool is_satisfiable_dnnf(NodeRef n) const;

 private:
  friend class CircuitBuilder;

  const Gate& gate(NodeRef n) const {
    check_ref(n);
    return gates_[n];
  }
  void check_ref(NodeRef n) const {
    if (n >= gates_.size())
      throw input_error("circuit: node ref " + std::to_string(n) + " out of range");
  }

  std::vector<Gate> gates_;
  std::vector<NodeRef> children_;
  std::vector<VarSet> vars_;
  NodeRef root_ = kNullNode;
  VarSet universe_;
};

// Hash-consing builder: structurally identical gates get one node. Or-gate
// children are ordered, so permuted child lists stay distinct. Pass
// dedup=false for one distinct node per call, preserving a bijection between
// calls and nodes (restriction relies on that to keep node identity).
class CircuitBuilder {
 public:
  explicit CircuitBuilder(bool dedup = true) : dedup_enabled_(dedup) {}
  // The dedup table's hasher points back at this builder.
  CircuitBuilder(const CircuitBuilder&) = delete;
  CircuitBuilder& operator=(const CircuitBuilder&) = delete;

  NodeRef literal(VarId v, bool positive);
  NodeRef constant(bool value);
  NodeRef conjoin(NodeRef left, NodeRef right);
  NodeRef disjoin(const std::vector<NodeRef>& children);  // fan-in >= 1

  std::size_t size() const { return gates_.size(); }
  GateKind kind(NodeRef n) const { return gates_.at(n).kind; }
  VarId var(NodeRef n) const { return gates_.at(n).var; }
  bool positive(NodeRef n) const { return gates_.at(n).positive; }
  std::span<const NodeRef> children(NodeRef n) const {
    const Gate& g = gates_.at(n);
    return {children_.data() + g.child_off, g.child_cnt};
  }

  struct BuildResult {
    Circuit circuit;
    std::vector<NodeRef> to_builder;    // circuit node -> builder node
    std::vector<NodeRef> from_builder;  // builder node -> circuit node or kNullNode
  };

  // Compacts to the nodes reachable from root, renumbered children-first.
  // Every literal variable must lie in the universe.
  Circuit build(NodeRef root, const VarSet& universe) const;
  BuildResult build_mapped(NodeRef root, const VarSet& universe) const;

 private:
  NodeRef intern(Gate g, std::span<const NodeRef> kids);

  struct KeyHash {
    const CircuitBuilder* b;
    std::size_t operator()(NodeRef n) const;
  };
  struct KeyEq {
    const CircuitBuilder* b;
    bool operator()(NodeRef x, NodeRef y) const;
  };

  bool dedup_enabled_ = true;
  std::vector<Gate> gates_;
  std::vector<NodeRef> children_;
  std::unordered_map<NodeRef, NodeRef, KeyHash, KeyEq> dedup_{16, KeyHash{this}, KeyEq{this}};
};

// Standalone copy of the subgraph rooted at n, over the variables it mentions.
Circuit subcircuit(const Circuit& c, NodeRef n);

}  // namespace strux
