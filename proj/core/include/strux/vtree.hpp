#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/errors.hpp"
#include "strux/varset.hpp"

namespace strux {

using VtreeRef = std::uint32_t;
inline constexpr VtreeRef kNullVtree = 0xFFFFFFFFu;

enum class VtreeNodeKind : std::uint8_t { leaf, internal, stub };

// Full binary tree whose variable leaves biject with the variable set; a
// pruned tree additionally contains stub leaves (empty variable set). Node
// refs are stable identities within one tree; derived trees publish mappings.
class Vtree {
 public:
  VtreeRef root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }

  VtreeNodeKind kind(VtreeRef v) const { return node(v).kind; }
  bool is_leaf(VtreeRef v) const { return node(v).kind == VtreeNodeKind::leaf; }
  bool is_internal(VtreeRef v) const { return node(v).kind == VtreeNodeKind::internal; }
  bool is_stub(VtreeRef v) const { return node(v).kind == VtreeNodeKind::stub; }

  VarId var(VtreeRef v) const { return node(v).var; }
  VtreeRef left(VtreeRef v) const { return node(v).left; }
  VtreeRef right(VtreeRef v) const { return node(v).right; }
  VtreeRef parent(VtreeRef v) const { return node(v).parent; }

  // Variables under v (empty for stubs).
  const VarSet& vars(VtreeRef v) const { return node(v).vars; }
  std::size_t var_count(VtreeRef v) const { return node(v).var_count; }

  const VarSet& variables() const { return node(root_).vars; }
  const VarSet& aux_vars() const { return aux_; }
  bool has_stubs() const { return has_stubs_; }

  VtreeRef leaf_of(VarId x) const {
    if (x < leaf_of_.size() && leaf_of_[x] != kNullVtree) return leaf_of_[x];
    throw input_error("vtree: no leaf for variable " + std::to_string(x));
  }

  // Minimal node whose variable set contains `s`; `s` must be nonempty and
  // within the tree's variables.
  VtreeRef hull(const VarSet& s) const;

  VarSet shell(VtreeRef v) const { return variables() - vars(v); }

  bool is_ancestor_or_self(VtreeRef anc, VtreeRef v) const;

 private:
  friend class VtreeBuilder;

  struct Node {
    VtreeNodeKind kind;
    VarId var;  // leaf only
    VtreeRef left, right, parent;
    std::uint32_t var_count;
    VarSet vars;
  };

  const Node& node(VtreeRef v) const {
    if (v >= nodes_.size())
      throw input_error("vtree: node ref " + std::to_string(v) + " out of range");
    return nodes_[v];
  }

  std::vector<Node> nodes_;
  std::vector<VtreeRef> leaf_of_;  // indexed by VarId
  VtreeRef root_ = kNullVtree;
  VarSet aux_;
  bool has_stubs_ = false;
};

class VtreeBuilder {
 public:
  VtreeRef leaf(VarId var);
  VtreeRef stub();
  VtreeRef internal(VtreeRef left, VtreeRef right);

  // Validates tree shape (each node is a child at most once, all nodes
  // reachable from root) and leaf-variable uniqueness. `aux` marks a subset
  // of the leaf variables as auxiliary.
  Vtree build(VtreeRef root, const VarSet& aux = VarSet{});

 private:
  struct Proto {
    VtreeNodeKind kind;
    VarId var;
    VtreeRef left, right;
  };
  std::vector<Proto> protos_;
};

bool is_normalized(const Vtree& t);

// Children swapped where the left side has more variables than the right.
// Node refs and the leaf set are unchanged.
Vtree normalize(const Vtree& t);

struct ModifyResult {
  Vtree tree;
  std::vector<VarId> aux_vars;           // fresh ids, in allocation order
  std::vector<VtreeRef> orig_to_new;     // original node -> its copy in tree
  std::vector<VtreeRef> inserted_parent; // original node -> wrapper above the copy, or kNullVtree
};

// Inserts, above each internal node v covering more than two variables, a new
// parent whose right child is a fresh auxiliary leaf. Auxiliary ids start
// after the largest original id and are allocated in postorder, so the
// deepest-left eligible node gets the first one. Input must be stub-free and
// normalized.
ModifyResult modify(const Vtree& t);

struct PruneResult {
  Vtree tree;
  std::vector<VtreeRef> orig_to_pruned;  // nodes inside a pruned subtree map to its stub
  std::vector<VtreeRef> pruned_to_orig;  // a stub maps to the maximal node it replaced
};

// Each maximal subtree whose variables all lie in `a` collapses to a stub.
PruneResult prune(const Vtree& t, const VarSet& a);

// Node of t that each gate decomposes at: the minimal vtree node containing
// the gate's variables. Constants (and gates mentioning no variables) map to
// kNullVtree.
using DecompositionTable = std::vector<VtreeRef>;
DecompositionTable hull_table(const Circuit& c, const Vtree& t);

// As hull_table, but verifies the contract: every and-gate must split its
// children across the two sides of its table entry (either orientation), and
// every or-gate's children must share the gate's entry (smoothness gives
// this). Throws property_violation naming the first offending gate.
DecompositionTable decomposition_nodes(const Circuit& c, const Vtree& t);

}  // namespace strux
