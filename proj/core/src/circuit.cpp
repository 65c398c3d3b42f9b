#include "strux/circuit.hpp"

#include <algorithm>

namespace strux {

namespace {

// Reachable-from-n mask over indices 0..n; relies on children < parent.
std::vector<std::uint8_t> reach_mask(const Circuit& c, NodeRef n) {
  std::vector<std::uint8_t> mark(static_cast<std::size_t>(n) + 1, 0);
  mark[n] = 1;
  for (NodeRef i = n + 1; i-- > 0;) {
    if (!mark[i]) continue;
    for (NodeRef ch : c.children(i)) mark[ch] = 1;
  }
  return mark;
}

}  // namespace

bool Circuit::evaluate(NodeRef n, const Assignment& a) const {
  check_ref(n);
  auto mark = reach_mask(*this, n);
  std::vector<std::uint8_t> val(static_cast<std::size_t>(n) + 1, 0);
  for (NodeRef i = 0; i <= n; ++i) {
    if (!mark[i]) continue;
    const Gate& g = gates_[i];
    switch (g.kind) {
      case GateKind::const_false:
        val[i] = 0;
        break;
      case GateKind::const_true:
        val[i] = 1;
        break;
      case GateKind::literal:
        val[i] = (a.value(g.var) == g.positive) ? 1 : 0;
        break;
      case GateKind::and_gate: {
        std::uint8_t r = 1;
        for (NodeRef ch : children(i)) r &= val[ch];
        val[i] = r;
        break;
      }
      case GateKind::or_gate: {
        std::uint8_t r = 0;
        for (NodeRef ch : children(i)) r |= val[ch];
        val[i] = r;
        break;
      }
    }
  }
  return val[n] != 0;
}

bool Circuit::is_satisfiable_dnnf(NodeRef n) const {
  check_ref(n);
  auto mark = reach_mask(*this, n);
  std::vector<std::uint8_t> sat(static_cast<std::size_t>(n) + 1, 0);
  for (NodeRef i = 0; i <= n; ++i) {
    if (!mark[i]) continue;
    const Gate& g = gates_[i];
    switch (g.kind) {
      case GateKind::const_false:
        sat[i] = 0;
        break;
      case GateKind::const_true:
      case GateKind::literal:
        sat[i] = 1;
        break;
      case GateKind::and_gate: {
        auto ch = children(i);
        if (vars_[ch[0]].intersects(vars_[ch[1]]))
          throw property_violation("is_satisfiable_dnnf: and-gate " + std::to_string(i) +
                                   " has overlapping children; circuit is not decomposable");
        sat[i] = sat[ch[0]] & sat[ch[1]];
        break;
      }
      case GateKind::or_gate: {
        std::uint8_t r = 0;
        for (NodeRef ch : children(i)) r |= sat[ch];
        sat[i] = r;
        break;
      }
    }
  }
  return sat[n] != 0;
}

NodeRef CircuitBuilder::literal(VarId v, bool positive) {
  if (v == kNoVar) throw input_error("literal: variable id 0 is reserved");
  return intern(Gate{GateKind::literal, positive, v, 0, 0}, {});
}

NodeRef CircuitBuilder::constant(bool value) {
  return intern(Gate{value ? GateKind::const_true : GateKind::const_false, false, kNoVar, 0, 0},
                {});
}

NodeRef CircuitBuilder::conjoin(NodeRef left, NodeRef right) {
  if (left >= gates_.size() || right >= gates_.size())
    throw input_error("conjoin: unknown child ref");
  NodeRef kids[2] = {left, right};
  return intern(Gate{GateKind::and_gate, false, kNoVar, 0, 2}, kids);
}

NodeRef CircuitBuilder::disjoin(const std::vector<NodeRef>& children) {
  if (children.empty()) throw input_error("disjoin: or-gate needs at least one child");
  for (NodeRef ch : children)
    if (ch >= gates_.size()) throw input_error("disjoin: unknown child ref");
  return intern(Gate{GateKind::or_gate, false, kNoVar, 0, static_cast<std::uint32_t>(children.size())},
                children);
}

NodeRef CircuitBuilder::intern(Gate g, std::span<const NodeRef> kids) {
  g.child_off = static_cast<std::uint32_t>(children_.size());
  children_.insert(children_.end(), kids.begin(), kids.end());
  gates_.push_back(g);
  NodeRef cand = static_cast<NodeRef>(gates_.size() - 1);
  if (!dedup_enabled_) return cand;
  auto [it, inserted] = dedup_.emplace(cand, cand);
  if (!inserted) {
    gates_.pop_back();
    children_.resize(g.child_off);
    return it->second;
  }
  return cand;
}

std::size_t CircuitBuilder::KeyHash::operator()(NodeRef n) const {
  const Gate& g = b->gates_[n];
  std::size_t h = static_cast<std::size_t>(g.kind);
  auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b9 + (h << 6) + (h >> 2); };
  if (g.kind == GateKind::literal) {
    mix(g.var);
    mix(g.positive ? 1 : 2);
  }
  for (std::uint32_t i = 0; i < g.child_cnt; ++i) mix(b->children_[g.child_off + i]);
  return h;
}

bool CircuitBuilder::KeyEq::operator()(NodeRef x, NodeRef y) const {
  const Gate& gx = b->gates_[x];
  const Gate& gy = b->gates_[y];
  if (gx.kind != gy.kind || gx.child_cnt != gy.child_cnt) return false;
  if (gx.kind == GateKind::literal && (gx.var != gy.var || gx.positive != gy.positive))
    return false;
  return std::equal(b->children_.begin() + gx.child_off,
                    b->children_.begin() + gx.child_off + gx.child_cnt,
                    b->children_.begin() + gy.child_off);
}

Circuit CircuitBuilder::build(NodeRef root, const VarSet& universe) const {
  return build_mapped(root, universe).circuit;
}

CircuitBuilder::BuildResult CircuitBuilder::build_mapped(NodeRef root,
                                                         const VarSet& universe) const {
  if (root >= gates_.size()) throw input_error("build: unknown root ref");

  BuildResult out;
  out.from_builder.assign(gates_.size(), kNullNode);

  // Iterative postorder DFS; children get indices before parents.
  std::vector<std::pair<NodeRef, std::uint32_t>> stack;
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [n, next_child] = stack.back();
    if (out.from_builder[n] != kNullNode) {
      stack.pop_back();
      continue;
    }
    const Gate& g = gates_[n];
    if (next_child < g.child_cnt) {
      NodeRef ch = children_[g.child_off + next_child];
      ++next_child;
      if (out.from_builder[ch] == kNullNode) stack.emplace_back(ch, 0);
      continue;
    }
    out.from_builder[n] = static_cast<NodeRef>(out.to_builder.size());
    out.to_builder.push_back(n);
    stack.pop_back();
  }

  Circuit& c = out.circuit;
  c.universe_ = universe;
  c.root_ = out.from_builder[root];
  c.gates_.reserve(out.to_builder.size());
  c.vars_.reserve(out.to_builder.size());
  for (NodeRef bn : out.to_builder) {
    Gate g = gates_[bn];
    std::uint32_t off = static_cast<std::uint32_t>(c.children_.size());
    for (std::uint32_t i = 0; i < g.child_cnt; ++i)
      c.children_.push_back(out.from_builder[children_[g.child_off + i]]);
    g.child_off = off;
    c.gates_.push_back(g);

    VarSet vs;
    if (g.kind == GateKind::literal) {
      if (!universe.contains(g.var))
        throw input_error("build: literal variable " + std::to_string(g.var) +
                          " is outside the universe");
      vs.insert(g.var);
    } else {
      for (std::uint32_t i = 0; i < g.child_cnt; ++i) vs |= c.vars_[c.children_[off + i]];
    }
    c.vars_.push_back(std::move(vs));
  }
  return out;
}

Circuit subcircuit(const Circuit& c, NodeRef n) {
  auto mark = reach_mask(c, n);
  CircuitBuilder b;
  std::vector<NodeRef> img(static_cast<std::size_t>(n) + 1, kNullNode);
  for (NodeRef i = 0; i <= n; ++i) {
    if (!mark[i]) continue;
    switch (c.kind(i)) {
      case GateKind::const_false:
      case GateKind::const_true:
        img[i] = b.constant(c.kind(i) == GateKind::const_true);
        break;
      case GateKind::literal:
        img[i] = b.literal(c.var(i), c.positive(i));
        break;
      case GateKind::and_gate: {
        auto ch = c.children(i);
        NodeRef acc = img[ch[0]];
        for (std::size_t k = 1; k < ch.size(); ++k) acc = b.conjoin(acc, img[ch[k]]);
        img[i] = acc;
        break;
      }
      case GateKind::or_gate: {
        std::vector<NodeRef> kids;
        for (NodeRef ch : c.children(i)) kids.push_back(img[ch]);
        img[i] = b.disjoin(kids);
        break;
      }
    }
  }
  return b.build(img[n], c.vars(n));
}

}  // namespace strux
