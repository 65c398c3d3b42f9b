#pragma once

// Circuit rewrites and the certificate/restriction machinery: simplification,
// smoothing, partial-assignment restriction with vtree pruning, decomposition
// node sets, and satisfying certificates.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/varset.hpp"
#include "strux/vtree.hpp"

namespace strux {

// A connected subgraph containing the root, both inputs of each contained
// ∧-gate, and exactly one input of each contained ∨-gate. In a decomposable
// circuit its literal leaves mention pairwise distinct variables, read as
// decisions; any assignment extending the decisions satisfies the circuit
// unless the certificate touches a ⊥ node.
struct Certificate {
  std::vector<NodeRef> nodes;                           // ascending
  std::vector<std::pair<NodeRef, NodeRef>> or_choices;  // (∨-gate, chosen input)
  Assignment decisions;
  bool contains_false = false;
};

// Removes everything the simplicity validator forbids and then some: gates computing
// ⊥ become ⊥ (and vanish from surviving parents), ∨-inputs of ∨-gates are
// inlined, constant inputs of ∧-gates are absorbed, unary ∨-gates fold into
// their input. Constants survive only as a constant root. Requires a
// decomposable circuit; preserves the function and the universe.
Circuit make_simple(const Circuit& c);

// Extends every ∨-input to mention its gate's full variable set by conjoining
// don't-care gadgets (x ∨ x̄ per missing leaf, combined along the vtree).
// Requires a circuit respecting t; preserves function, universe, structure.
Circuit smooth(const Circuit& c, const Vtree& t);

struct RestrictResult {
  Circuit circuit;
  PruneResult pruned;                  // vtree with assigned regions stubbed out
  std::vector<NodeRef> to_original;    // restricted node -> source node
  std::vector<NodeRef> from_original;  // source node -> restricted node, kNullNode if gone
};

// Substitutes p's values, eliminates gates that become ⊥ (exact for
// decomposable circuits), folds constants upward (∧ absorbs ⊤ inputs, ∨ drops
// ⊥ inputs but keeps its node, unary included), and prunes the vtree by p's
// domain. Surviving nodes correspond one-to-one to source nodes.
RestrictResult restrict(const Circuit& c, const Vtree& t, const Assignment& p);

struct NodeSetReport {
  VtreeRef v = kNullVtree;
  std::vector<NodeRef> r;            // nodes whose decomposition node is v
  std::vector<NodeRef> r_plus;       // members of r with no member input
  std::vector<NodeRef> r_plus_plus;  // r_plus minus u_ell and u_ell's inputs
};

// Decomposition-node membership sets at vtree node v. u_ell, when given, must
// itself be a member of r.
NodeSetReport node_sets(const Circuit& c, const Vtree& t, VtreeRef v,
                        std::optional<NodeRef> u_ell = std::nullopt);

// Deterministic ⊥-free certificate containing u: fixes a root-to-u path
// (preferring the first viable input at each ∨) and completes off-path
// obligations the same way. Requires a decomposable circuit. Empty when every
// certificate through u would touch ⊥.
std::optional<Certificate> extract_certificate_through(const Circuit& c, NodeRef u);

// Assignment over shell(v) = t's variables minus vars(v): each variable takes
// the decision of a certificate through u, or 0 where the certificate is
// silent. Errors when u admits no ⊥-free certificate.
Assignment shell_restriction_for(const Circuit& c, const Vtree& t, NodeRef u, VtreeRef v);

// All certificates of a decomposable circuit in a fixed deterministic order,
// stopping at `limit`.
std::vector<Certificate> enumerate_certificates(const Circuit& c, std::size_t limit = 1u << 20);

}  // namespace strux
