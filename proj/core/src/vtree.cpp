#include "strux/vtree.hpp"

#include <algorithm>

namespace strux {

VtreeRef Vtree::hull(const VarSet& s) const {
  if (s.empty()) throw input_error("hull: empty variable set has no minimal node");
  if (!s.subset_of(variables()))
    throw input_error("hull: variables " + (s - variables()).to_string() + " are not in the tree");
  VtreeRef v = leaf_of(s.min());
  while (!s.subset_of(vars(v))) v = parent(v);
  return v;
}

bool Vtree::is_ancestor_or_self(VtreeRef anc, VtreeRef v) const {
  node(anc);
  for (VtreeRef w = v; w != kNullVtree; w = parent(w))
    if (w == anc) return true;
  return false;
}

VtreeRef VtreeBuilder::leaf(VarId var) {
  if (var == kNoVar) throw input_error("vtree leaf: variable id 0 is reserved");
  protos_.push_back({VtreeNodeKind::leaf, var, kNullVtree, kNullVtree});
  return static_cast<VtreeRef>(protos_.size() - 1);
}

VtreeRef VtreeBuilder::stub() {
  protos_.push_back({VtreeNodeKind::stub, kNoVar, kNullVtree, kNullVtree});
  return static_cast<VtreeRef>(protos_.size() - 1);
}

VtreeRef VtreeBuilder::internal(VtreeRef left, VtreeRef right) {
  if (left >= protos_.size() || right >= protos_.size())
    throw input_error("vtree internal: unknown child ref");
  if (left == right) throw input_error("vtree internal: children must be distinct nodes");
  protos_.push_back({VtreeNodeKind::internal, kNoVar, left, right});
  return static_cast<VtreeRef>(protos_.size() - 1);
}

Vtree VtreeBuilder::build(VtreeRef root, const VarSet& aux) {
  if (root >= protos_.size()) throw input_error("vtree build: unknown root ref");

  Vtree t;
  t.nodes_.resize(protos_.size());
  std::vector<std::uint8_t> used(protos_.size(), 0);

  // Postorder fill; also detects sharing (a ref used as a child twice).
  std::vector<std::pair<VtreeRef, int>> stack{{root, 0}};
  std::vector<std::uint8_t> done(protos_.size(), 0);
  while (!stack.empty()) {
    auto [v, phase] = stack.back();
    stack.pop_back();
    const Proto& p = protos_[v];
    if (phase == 0) {
      if (used[v]) throw input_error("vtree build: node " + std::to_string(v) + " is shared");
      used[v] = 1;
      if (p.kind == VtreeNodeKind::internal) {
        stack.push_back({v, 1});
        stack.push_back({p.right, 0});
        stack.push_back({p.left, 0});
        continue;
      }
    }
    Vtree::Node& n = t.nodes_[v];
    n.kind = p.kind;
    n.var = p.var;
    n.left = p.left;
    n.right = p.right;
    n.parent = kNullVtree;
    if (p.kind == VtreeNodeKind::leaf) {
      n.vars = VarSet::single(p.var);
      n.var_count = 1;
    } else if (p.kind == VtreeNodeKind::stub) {
      n.var_count = 0;
      t.has_stubs_ = true;
    } else {
      if (!done[p.left] || !done[p.right])
        throw input_error("vtree build: malformed tree");
      if (t.nodes_[p.left].vars.intersects(t.nodes_[p.right].vars))
        throw input_error("vtree build: variable appears in both subtrees of node " +
                          std::to_string(v));
      n.vars = t.nodes_[p.left].vars | t.nodes_[p.right].vars;
      n.var_count = t.nodes_[p.left].var_count + t.nodes_[p.right].var_count;
      t.nodes_[p.left].parent = v;
      t.nodes_[p.right].parent = v;
    }
    done[v] = 1;
  }

  // Unreached protos would leave stale entries; require exact coverage.
  for (std::size_t i = 0; i < protos_.size(); ++i)
    if (!used[i] && i != root)
      throw input_error("vtree build: node " + std::to_string(i) + " is not part of the tree");

  t.root_ = root;
  VarId maxv = t.nodes_[root].vars.max();
  t.leaf_of_.assign(static_cast<std::size_t>(maxv) + 1, kNullVtree);
  for (VtreeRef v = 0; v < t.nodes_.size(); ++v)
    if (t.nodes_[v].kind == VtreeNodeKind::leaf) t.leaf_of_[t.nodes_[v].var] = v;

  if (!aux.subset_of(t.nodes_[root].vars))
    throw input_error("vtree build: aux markers name unknown variables");
  t.aux_ = aux;
  return t;
}

bool is_normalized(const Vtree& t) {
  for (VtreeRef v = 0; v < t.size(); ++v)
    if (t.is_internal(v) && t.var_count(t.left(v)) > t.var_count(t.right(v))) return false;
  return true;
}

Vtree normalize(const Vtree& t) {
  VtreeBuilder b;
  // Builder refs mirror t's refs because nodes are emitted in index order.
  for (VtreeRef v = 0; v < t.size(); ++v) {
    switch (t.kind(v)) {
      case VtreeNodeKind::leaf:
        b.leaf(t.var(v));
        break;
      case VtreeNodeKind::stub:
        b.stub();
        break;
      case VtreeNodeKind::internal: {
        VtreeRef l = t.left(v), r = t.right(v);
        if (t.var_count(l) > t.var_count(r)) std::swap(l, r);
        b.internal(l, r);
        break;
      }
    }
  }
  return b.build(t.root(), t.aux_vars());
}

namespace {

void check_plain_normalized(const Vtree& t, const char* op) {
  if (t.has_stubs()) throw property_violation(std::string(op) + ": tree contains stubs");
  if (!is_normalized(t)) throw property_violation(std::string(op) + ": tree is not normalized");
}

}  // namespace

ModifyResult modify(const Vtree& t) {
  check_plain_normalized(t, "modify");

  ModifyResult out;
  out.orig_to_new.assign(t.size(), kNullVtree);
  out.inserted_parent.assign(t.size(), kNullVtree);

  VtreeBuilder b;
  VarId next_aux = t.variables().max();
  VarSet aux_set;

  // Postorder; a node's subtrees are wrapped before the node itself, which
  // fixes the auxiliary numbering.
  std::vector<std::pair<VtreeRef, int>> stack{{t.root(), 0}};
  std::vector<VtreeRef> made(t.size(), kNullVtree);  // copy-or-wrapper per node
  while (!stack.empty()) {
    auto [v, phase] = stack.back();
    stack.pop_back();
    if (phase == 0 && t.is_internal(v)) {
      stack.push_back({v, 1});
      stack.push_back({t.right(v), 0});
      stack.push_back({t.left(v), 0});
      continue;
    }
    VtreeRef nv;
    if (t.is_leaf(v)) {
      nv = b.leaf(t.var(v));
    } else {
      nv = b.internal(made[t.left(v)], made[t.right(v)]);
    }
    out.orig_to_new[v] = nv;
    if (t.is_internal(v) && t.var_count(v) > 2) {
      VarId h = ++next_aux;
      out.aux_vars.push_back(h);
      aux_set.insert(h);
      VtreeRef wrapper = b.internal(nv, b.leaf(h));
      out.inserted_parent[v] = wrapper;
      nv = wrapper;
    }
    made[v] = nv;
  }

  out.tree = b.build(made[t.root()], t.aux_vars() | aux_set);
  return out;
}

PruneResult prune(const Vtree& t, const VarSet& a) {
  if (!a.subset_of(t.variables()))
    throw input_error("prune: variables " + (a - t.variables()).to_string() +
                      " are not in the tree");

  PruneResult out;
  out.orig_to_pruned.assign(t.size(), kNullVtree);

  VtreeBuilder b;
  std::vector<VtreeRef> made(t.size(), kNullVtree);
  std::vector<VtreeRef> new_to_old;
  auto emit = [&](VtreeRef nv, VtreeRef old) {
    if (nv >= new_to_old.size()) new_to_old.resize(nv + 1, kNullVtree);
    new_to_old[nv] = old;
  };

  // Stack phases: 0 = decide/stub, 1 = assemble internal.
  std::vector<std::pair<VtreeRef, int>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto [v, phase] = stack.back();
    stack.pop_back();
    if (phase == 0) {
      if (t.vars(v).subset_of(a)) {  // covers stubs (empty vars) too
        VtreeRef s = b.stub();
        emit(s, v);
        made[v] = s;
        // Everything underneath maps to this stub.
        std::vector<VtreeRef> sub{v};
        while (!sub.empty()) {
          VtreeRef w = sub.back();
          sub.pop_back();
          out.orig_to_pruned[w] = s;
          if (t.is_internal(w)) {
            sub.push_back(t.left(w));
            sub.push_back(t.right(w));
          }
        }
        continue;
      }
      if (t.is_leaf(v)) {
        VtreeRef nv = b.leaf(t.var(v));
        emit(nv, v);
        out.orig_to_pruned[v] = nv;
        made[v] = nv;
        continue;
      }
      stack.push_back({v, 1});
      stack.push_back({t.right(v), 0});
      stack.push_back({t.left(v), 0});
      continue;
    }
    VtreeRef nv = b.internal(made[t.left(v)], made[t.right(v)]);
    emit(nv, v);
    out.orig_to_pruned[v] = nv;
    made[v] = nv;
  }

  out.tree = b.build(made[t.root()], t.aux_vars() - a);
  out.pruned_to_orig = std::move(new_to_old);
  out.pruned_to_orig.resize(out.tree.size(), kNullVtree);
  return out;
}

DecompositionTable hull_table(const Circuit& c, const Vtree& t) {
  DecompositionTable table(c.size(), kNullVtree);
  for (NodeRef n = 0; n < c.size(); ++n) {
    const VarSet& vs = c.vars(n);
    if (vs.empty()) continue;
    if (c.kind(n) == GateKind::literal) {
      table[n] = t.leaf_of(c.var(n));
    } else {
      // Children are visited first, so start the upward walk at a child hull.
      VtreeRef start = kNullVtree;
      for (NodeRef ch : c.children(n)) {
        if (table[ch] != kNullVtree) {
          start = table[ch];
          break;
        }
      }
      if (start == kNullVtree) {
        table[n] = t.hull(vs);
        continue;
      }
      VtreeRef v = start;
      while (!vs.subset_of(t.vars(v))) v = t.parent(v);
      table[n] = v;
    }
  }
  return table;
}

DecompositionTable decomposition_nodes(const Circuit& c, const Vtree& t) {
  if (!c.vars(c.root()).subset_of(t.variables()))
    throw input_error("decomposition_nodes: circuit mentions variables outside the tree");
  DecompositionTable table = hull_table(c, t);
  for (NodeRef n = 0; n < c.size(); ++n) {
    GateKind k = c.kind(n);
    if (k == GateKind::and_gate) {
      if (table[n] == kNullVtree || !t.is_internal(table[n]))
        throw property_violation("decomposition_nodes: and-gate " + std::to_string(n) +
                                 " respects no vtree node");
      auto ch = c.children(n);
      const VarSet& lv = t.vars(t.left(table[n]));
      const VarSet& rv = t.vars(t.right(table[n]));
      bool straight = c.vars(ch[0]).subset_of(lv) && c.vars(ch[1]).subset_of(rv);
      bool swapped = c.vars(ch[0]).subset_of(rv) && c.vars(ch[1]).subset_of(lv);
      if (!straight && !swapped)
        throw property_violation("decomposition_nodes: and-gate " + std::to_string(n) +
                                 " does not split at its minimal vtree node");
    } else if (k == GateKind::or_gate) {
      for (NodeRef chn : c.children(n))
        if (table[chn] != table[n])
          throw property_violation("decomposition_nodes: or-gate " + std::to_string(n) +
                                   " has child " + std::to_string(chn) +
                                   " with a different decomposition node (not smooth)");
    }
  }
  return table;
}

}  // namespace strux
