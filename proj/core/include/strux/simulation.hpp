#pragma once

// Compilation of a structured d-DNNF pair (a function and its complement over
// one normalized vtree) into a syntactically correct SDD of quadratic size,
// plus the per-node audit trail and the checker that replays it.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/varset.hpp"
#include "strux/vtree.hpp"

namespace strux {

enum class SimOrigin : std::uint8_t { d, dbar };

inline const char* origin_name(SimOrigin o) { return o == SimOrigin::d ? "d" : "dbar"; }

// Truth table over the one or two variables of a vtree subtree, x = left leaf,
// y = right leaf (kNoVar when the subtree is a single leaf). Row index is
// x_val | (y_val << 1); bits 2..3 are ignored for one variable.
struct TwoVarFunction {
  std::array<VarId, 2> vars{kNoVar, kNoVar};
  std::uint8_t bits = 0;
};

// Canonical SDD for f over the subtree rooted at t2 (at most two leaves):
// constant functions become a constant node, functions of one variable a
// literal, and everything else the two-element decision form
// (x ∧ f|x=1) ∨ (x̄ ∧ f|x=0) with literal-or-constant subs — seven nodes.
Circuit two_var_sdd(const TwoVarFunction& f, const Vtree& t, VtreeRef t2);

// Replaces every maximal subcircuit whose decomposition node covers at most
// two variables by the canonical form above (function-preserving, checked by
// enumerating the at most four assignments). The output can lose smoothness:
// a subcircuit computing ⊤ collapses to a constant.
Circuit preprocess_base(const Circuit& c, const Vtree& t);

struct SimulateOptions {
  std::size_t complement_cap = 12;      // exhaustive complement check up to this many variables
  std::size_t complement_samples = 1u << 16;  // sampled fallback above the cap
  std::uint64_t seed = 1;
  bool skip_complement_check = false;
};

// One audit record per emitted key (origin, u, ∅).
struct SimKeyRecord {
  enum class Case : std::uint8_t { base, or_case, and_case };

  SimOrigin origin = SimOrigin::d;
  NodeRef u = kNullNode;  // node in the oriented source circuit
  Case kind = Case::base;
  NodeRef s_node = kNullNode;  // the key's node in the final output circuit
  VtreeRef v = kNullVtree;     // decomposition node of u in the normalized input vtree

  // base only: the function emitted, over the decomposition node's variables.
  TwoVarFunction base_fn;

  // or/and cases: the shell restriction in use. For the and case it is taken
  // w.r.t. v_ell, the left input's decomposition node.
  Assignment p;
  VtreeRef v_ell = kNullVtree;

  // Node sets produced under p, translated back to source-circuit ids.
  std::vector<NodeRef> own_r, own_r_plus, own_r_plus_plus;
  std::vector<NodeRef> foreign_r_plus;

  // ∧-elements of the emitted ∨ in child order, excluding the leading
  // (left ∧ right) element of the and case: partner node and whether its sub
  // is ⊤ (only or-case partners that are edges of the source get ⊤).
  std::vector<std::pair<SimOrigin, NodeRef>> partners;
  std::vector<std::uint8_t> partner_sub_true;
};

struct SimulationTrace {
  std::vector<SimKeyRecord> records;

  static std::uint64_t key_of(SimOrigin o, NodeRef u) {
    return (o == SimOrigin::dbar ? (std::uint64_t{1} << 40) : 0) | u;
  }
  const SimKeyRecord* find(SimOrigin o, NodeRef u) const {
    auto it = index.find(key_of(o, u));
    return it == index.end() ? nullptr : &records[it->second];
  }

  std::unordered_map<std::uint64_t, std::size_t> index;
};

struct SimulationResult {
  Circuit s;
  Vtree normalized_t;
  ModifyResult modification;  // modification.tree is the output vtree
  Circuit d_oriented, dbar_oriented;
  std::vector<NodeRef> d_to_oriented, dbar_to_oriented;
  SimulationTrace trace;
  bool complement_sampled = false;  // complement verified by sampling only

  const Vtree& t_prime() const { return modification.tree; }
  VarSet aux_vars() const {
    VarSet h;
    for (VarId a : modification.aux_vars) h.insert(a);
    return h;
  }
};

// Builds an SDD for d's function w.r.t. the modified vtree of normalize(t).
//
// Inputs must be smooth, simple structured d-DNNFs over t (either ∧-child
// orientation), with constants at most as roots, and dbar must compute the
// complement of d — verified exhaustively up to options.complement_cap
// variables and by seeded sampling above it.
//
// The output mentions no auxiliary variable, so it is trivially independent
// of all of them; its universe is t's variables plus the auxiliaries.
SimulationResult simulate(const Circuit& d, const Circuit& dbar, const Vtree& t,
                          const SimulateOptions& options = {});

// Output-vtree node at which the emitted key (u, ∅) is rooted: the copy of
// u's decomposition node v for ∧-nodes and every node covering ≤ 2 variables,
// the inserted parent of that copy for ∨-nodes above 2 variables, and the
// output root for a constant u.
VtreeRef node_map(const Circuit& c_oriented, NodeRef u, const Vtree& normalized_t,
                  const ModifyResult& m);

struct Lemma2Report {
  std::size_t keys_checked = 0;
  std::map<std::size_t, std::size_t> keys_by_width;  // |vars(v)| -> count
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Replays the inductive guarantee over every traced key: the key's node is a
// syntactically correct SDD at node_map(u), and it computes the same function
// as the source subcircuit at u (exhaustively up to cap variables, sampled
// beyond).
Lemma2Report verify_lemma2(const SimulationResult& r, std::size_t cap = 20,
                           std::uint64_t seed = 1);

}  // namespace strux
