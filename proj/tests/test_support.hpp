#pragma once

// Shared helpers: random vtrees, a truth-table-driven compiler that emits
// smooth simple deterministic structured circuits, an independent reference
// evaluator, and assignment enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/varset.hpp"
#include "strux/vtree.hpp"

namespace strux::testing {

inline std::vector<VarId> var_range(VarId lo, VarId hi) {
  std::vector<VarId> v;
  for (VarId x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

inline Vtree random_vtree(std::mt19937_64& rng, std::vector<VarId> vars) {
  std::shuffle(vars.begin(), vars.end(), rng);
  VtreeBuilder b;
  std::function<VtreeRef(std::size_t, std::size_t)> go =
      [&](std::size_t lo, std::size_t hi) -> VtreeRef {
    if (hi - lo == 1) return b.leaf(vars[lo]);
    std::uniform_int_distribution<std::size_t> d(lo + 1, hi - 1);
    std::size_t mid = d(rng);
    VtreeRef l = go(lo, mid);
    return b.internal(l, go(mid, hi));
  };
  return b.build(go(0, vars.size()));
}

inline Vtree balanced_vtree(const std::vector<VarId>& vars) {
  VtreeBuilder b;
  std::function<VtreeRef(std::size_t, std::size_t)> go =
      [&](std::size_t lo, std::size_t hi) -> VtreeRef {
    if (hi - lo == 1) return b.leaf(vars[lo]);
    std::size_t mid = lo + (hi - lo) / 2;
    VtreeRef l = go(lo, mid);
    return b.internal(l, go(mid, hi));
  };
  return b.build(go(0, vars.size()));
}

inline Vtree right_linear_vtree(const std::vector<VarId>& vars) {
  VtreeBuilder b;
  std::function<VtreeRef(std::size_t)> go = [&](std::size_t lo) -> VtreeRef {
    if (lo + 1 == vars.size()) return b.leaf(vars[lo]);
    VtreeRef l = b.leaf(vars[lo]);
    return b.internal(l, go(lo + 1));
  };
  return b.build(go(0));
}

using Pred = std::function<bool(const Assignment&)>;

// A uniformly random function over `vars`, usable as a Pred.
struct RandomFn {
  std::vector<VarId> order;  // ascending
  std::vector<char> bits;    // indexed by the assignment's bit pattern

  bool operator()(const Assignment& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      if (a.value(order[i])) idx |= std::uint64_t{1} << i;
    return bits[idx] != 0;
  }
};

inline RandomFn random_fn(std::mt19937_64& rng, const std::vector<VarId>& vars) {
  RandomFn f;
  f.order = vars;
  std::sort(f.order.begin(), f.order.end());
  f.bits.resize(std::size_t{1} << vars.size());
  for (char& b : f.bits) b = char(rng() & 1);
  return f;
}

inline NodeRef minterm_node(CircuitBuilder& b, const Vtree& t, VtreeRef v,
                            const Assignment& a) {
  if (t.is_leaf(v)) return b.literal(t.var(v), a.value(t.var(v)));
  return b.conjoin(minterm_node(b, t, t.left(v), a),
                   minterm_node(b, t, t.right(v), a));
}

// Emits a smooth, simple, deterministic circuit for pred over vars(v),
// respecting t. Returns kNullNode for the constant-false function.
inline NodeRef compile_fn(CircuitBuilder& b, const Vtree& t, VtreeRef v,
                          const Pred& pred) {
  if (t.is_leaf(v)) {
    VarId x = t.var(v);
    Assignment a0, a1;
    a0.set(x, false);
    a1.set(x, true);
    bool f0 = pred(a0), f1 = pred(a1);
    if (!f0 && !f1) return kNullNode;
    if (f0 && f1) return b.disjoin({b.literal(x, true), b.literal(x, false)});
    return b.literal(x, f1);
  }
  std::vector<VarId> lv = t.vars(t.left(v)).to_vector();
  std::vector<VarId> rv = t.vars(t.right(v)).to_vector();
  std::map<std::vector<char>, std::vector<Assignment>> groups;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << lv.size()); ++m) {
    Assignment la;
    for (std::size_t i = 0; i < lv.size(); ++i) la.set(lv[i], (m >> i) & 1);
    std::vector<char> sig(std::size_t{1} << rv.size());
    bool any = false;
    for (std::uint64_t q = 0; q < (std::uint64_t{1} << rv.size()); ++q) {
      Assignment a = la;
      for (std::size_t j = 0; j < rv.size(); ++j) a.set(rv[j], (q >> j) & 1);
      sig[q] = pred(a) ? 1 : 0;
      any = any || sig[q];
    }
    if (any) groups[sig].push_back(la);
  }
  if (groups.empty()) return kNullNode;
  std::vector<NodeRef> elems;
  for (auto& [sig, mins] : groups) {
    std::vector<NodeRef> ms;
    for (const Assignment& a : mins) ms.push_back(minterm_node(b, t, t.left(v), a));
    NodeRef prime = ms.size() == 1 ? ms[0] : b.disjoin(ms);
    NodeRef sub = compile_fn(b, t, t.right(v), [&](const Assignment& ra) {
      std::uint64_t q = 0;
      for (std::size_t j = 0; j < rv.size(); ++j)
        if (ra.value(rv[j])) q |= std::uint64_t{1} << j;
      return sig[q] != 0;
    });
    elems.push_back(b.conjoin(prime, sub));
  }
  return elems.size() == 1 ? elems[0] : b.disjoin(elems);
}

inline Circuit compile_circuit(const Vtree& t, const Pred& pred) {
  CircuitBuilder b;
  NodeRef r = compile_fn(b, t, t.root(), pred);
  if (r == kNullNode) r = b.constant(false);
  return b.build(r, t.variables());
}

// Independent recursive evaluator (deliberately not Circuit::evaluate).
inline bool ref_eval(const Circuit& c, NodeRef n, const Assignment& a) {
  switch (c.kind(n)) {
    case GateKind::const_false: return false;
    case GateKind::const_true: return true;
    case GateKind::literal: return a.value(c.var(n)) == c.positive(n);
    case GateKind::and_gate: {
      for (NodeRef k : c.children(n))
        if (!ref_eval(c, k, a)) return false;
      return true;
    }
    case GateKind::or_gate: {
      for (NodeRef k : c.children(n))
        if (ref_eval(c, k, a)) return true;
      return false;
    }
  }
  return false;
}

// Calls fn with every total assignment over `vars` (ascending bit order).
inline void for_all_assignments(const std::vector<VarId>& vars,
                                const std::function<void(const Assignment&)>& fn) {
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << vars.size()); ++m) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a.set(vars[i], (m >> i) & 1);
    fn(a);
  }
}

}  // namespace strux::testing
