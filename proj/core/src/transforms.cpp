#include "strux/transforms.hpp"

#include <algorithm>

#include "strux/errors.hpp"
#include "strux/validators.hpp"

namespace strux {

namespace {

enum class Mark : std::uint8_t { value_false, value_true, open };

}  // namespace

Circuit make_simple(const Circuit& c) {
  PropertyReport dec = check_decomposable(c);
  if (!dec.holds) throw property_violation("make_simple: " + dec.detail);

  CircuitBuilder b;
  std::vector<Mark> mark(c.size(), Mark::open);
  std::vector<NodeRef> img(c.size(), kNullNode);

  for (NodeRef n = 0; n < c.size(); ++n) {
    switch (c.kind(n)) {
      case GateKind::const_false:
        mark[n] = Mark::value_false;
        break;
      case GateKind::const_true:
        mark[n] = Mark::value_true;
        break;
      case GateKind::literal:
        img[n] = b.literal(c.var(n), c.positive(n));
        break;
      case GateKind::and_gate: {
        bool dead = false;
        std::vector<NodeRef> kids;
        for (NodeRef ch : c.children(n)) {
          if (mark[ch] == Mark::value_false) {
            dead = true;
            break;
          }
          if (mark[ch] == Mark::open) kids.push_back(img[ch]);
        }
        if (dead) {
          mark[n] = Mark::value_false;
        } else if (kids.empty()) {
          mark[n] = Mark::value_true;
        } else if (kids.size() == 1) {
          img[n] = kids[0];
        } else {
          NodeRef acc = kids[0];
          for (std::size_t i = 1; i < kids.size(); ++i) acc = b.conjoin(acc, kids[i]);
          img[n] = acc;
        }
        break;
      }
      case GateKind::or_gate: {
        bool valid = false;
        std::vector<NodeRef> kids;
        for (NodeRef ch : c.children(n)) {
          if (mark[ch] == Mark::value_false) continue;
          if (mark[ch] == Mark::value_true) {
            valid = true;
            break;
          }
          if (b.kind(img[ch]) == GateKind::or_gate) {
            auto inner = b.children(img[ch]);
            kids.insert(kids.end(), inner.begin(), inner.end());
          } else {
            kids.push_back(img[ch]);
          }
        }
        if (valid) {
          mark[n] = Mark::value_true;
        } else if (kids.empty()) {
          mark[n] = Mark::value_false;
        } else if (kids.size() == 1) {
          img[n] = kids[0];
        } else {
          img[n] = b.disjoin(kids);
        }
        break;
      }
    }
  }

  NodeRef root = c.root();
  if (mark[root] != Mark::open) {
    CircuitBuilder cb;
    return cb.build(cb.constant(mark[root] == Mark::value_true), c.universe());
  }
  return b.build(img[root], c.universe());
}

namespace {

// ⊤-function circuit over subtree w mentioning exactly the variables in
// `need`, shaped to respect every vtree node it spans. A non-null `seed` is
// conjoined below the deepest-left leaf so the combined term still respects
// every node strictly above that leaf (seeds carry no variables).
NodeRef dont_care(CircuitBuilder& b, const Vtree& t, VtreeRef w, const VarSet& need,
                  NodeRef seed = kNullNode) {
  if (t.is_leaf(w)) {
    VarId v = t.var(w);
    NodeRef g = b.disjoin({b.literal(v, true), b.literal(v, false)});
    return seed == kNullNode ? g : b.conjoin(seed, g);
  }
  VarSet ln = need;
  ln &= t.vars(t.left(w));
  VarSet rn = need;
  rn &= t.vars(t.right(w));
  if (ln.empty()) return dont_care(b, t, t.right(w), rn, seed);
  if (rn.empty()) return dont_care(b, t, t.left(w), ln, seed);
  return b.conjoin(dont_care(b, t, t.left(w), ln, seed), dont_care(b, t, t.right(w), rn));
}

}  // namespace

Circuit smooth(const Circuit& c, const Vtree& t) {
  if (!c.vars(c.root()).subset_of(t.variables()))
    throw input_error("smooth: circuit mentions variables outside the vtree");

  CircuitBuilder b;
  std::vector<NodeRef> img(c.size(), kNullNode);

  for (NodeRef n = 0; n < c.size(); ++n) {
    switch (c.kind(n)) {
      case GateKind::const_false:
        img[n] = b.constant(false);
        break;
      case GateKind::const_true:
        img[n] = b.constant(true);
        break;
      case GateKind::literal:
        img[n] = b.literal(c.var(n), c.positive(n));
        break;
      case GateKind::and_gate: {
        auto ch = c.children(n);
        NodeRef acc = img[ch[0]];
        for (std::size_t i = 1; i < ch.size(); ++i) acc = b.conjoin(acc, img[ch[i]]);
        img[n] = acc;
        break;
      }
      case GateKind::or_gate: {
        const VarSet& target = c.vars(n);
        std::vector<NodeRef> kids;
        kids.reserve(c.children(n).size());
        for (NodeRef ch : c.children(n)) {
          VarSet missing = target;
          missing -= c.vars(ch);
          if (missing.empty()) {
            kids.push_back(img[ch]);
            continue;
          }
          NodeRef acc = img[ch];
          if (c.vars(ch).empty()) {
            // Constant input: one gadget over everything missing, with the
            // constant threaded to the gadget's deepest-left position.
            acc = dont_care(b, t, t.hull(missing), missing, acc);
          } else {
            VtreeRef top = t.hull(target);
            VtreeRef z = t.hull(c.vars(ch));
            while (z != top) {
              VtreeRef p = t.parent(z);
              bool z_left = t.left(p) == z;
              VtreeRef sib = z_left ? t.right(p) : t.left(p);
              VarSet part = missing;
              part &= t.vars(sib);
              if (!part.empty()) {
                NodeRef gadget = dont_care(b, t, sib, part);
                acc = z_left ? b.conjoin(acc, gadget) : b.conjoin(gadget, acc);
              }
              z = p;
            }
          }
          kids.push_back(acc);
        }
        img[n] = kids.size() == 1 ? kids[0] : b.disjoin(kids);
        break;
      }
    }
  }
  return b.build(img[c.root()], c.universe());
}

RestrictResult restrict(const Circuit& c, const Vtree& t, const Assignment& p) {
  if (!p.domain().subset_of(t.variables()))
    throw input_error("restrict: assignment mentions variables outside the vtree");

  std::vector<Mark> mark(c.size(), Mark::open);
  for (NodeRef n = 0; n < c.size(); ++n) {
    switch (c.kind(n)) {
      case GateKind::const_false:
        mark[n] = Mark::value_false;
        break;
      case GateKind::const_true:
        mark[n] = Mark::value_true;
        break;
      case GateKind::literal:
        if (p.defines(c.var(n)))
          mark[n] = p.value(c.var(n)) == c.positive(n) ? Mark::value_true : Mark::value_false;
        break;
      case GateKind::and_gate: {
        bool any_false = false, all_true = true;
        for (NodeRef ch : c.children(n)) {
          any_false |= mark[ch] == Mark::value_false;
          all_true &= mark[ch] == Mark::value_true;
        }
        if (any_false)
          mark[n] = Mark::value_false;
        else if (all_true)
          mark[n] = Mark::value_true;
        break;
      }
      case GateKind::or_gate: {
        bool any_true = false, all_false = true;
        for (NodeRef ch : c.children(n)) {
          any_true |= mark[ch] == Mark::value_true;
          all_false &= mark[ch] == Mark::value_false;
        }
        if (any_true)
          mark[n] = Mark::value_true;
        else if (all_false)
          mark[n] = Mark::value_false;
        break;
      }
    }
  }

  RestrictResult res{Circuit{}, prune(t, p.domain()), {}, {}};
  VarSet rest_universe = c.universe();
  rest_universe -= p.domain();
  res.from_original.assign(c.size(), kNullNode);

  if (mark[c.root()] != Mark::open) {
    CircuitBuilder cb;
    res.circuit = cb.build(cb.constant(mark[c.root()] == Mark::value_true), rest_universe);
    res.to_original.assign(res.circuit.size(), kNullNode);
    return res;
  }

  // One node per surviving source node: no deduplication, so identity maps
  // stay unambiguous. ∧-gates whose siblings all folded to ⊤ are absorbed
  // into their surviving input; ∨-gates always keep their own node.
  CircuitBuilder b(false);
  std::vector<NodeRef> builder_to_orig;
  auto made = [&](NodeRef built, NodeRef orig) {
    if (builder_to_orig.size() <= built) builder_to_orig.resize(built + 1, kNullNode);
    builder_to_orig[built] = orig;
    return built;
  };

  std::vector<std::uint8_t> want(c.size(), 0);
  want[c.root()] = 1;
  for (NodeRef n = c.size(); n-- > 0;) {
    if (!want[n] || mark[n] != Mark::open) continue;
    for (NodeRef ch : c.children(n))
      if (mark[ch] == Mark::open) want[ch] = 1;
  }

  for (NodeRef n = 0; n < c.size(); ++n) {
    if (!want[n] || mark[n] != Mark::open) continue;
    switch (c.kind(n)) {
      case GateKind::literal:
        res.from_original[n] = made(b.literal(c.var(n), c.positive(n)), n);
        break;
      case GateKind::and_gate: {
        std::vector<NodeRef> kids;
        for (NodeRef ch : c.children(n))
          if (mark[ch] == Mark::open) kids.push_back(res.from_original[ch]);
        if (kids.size() == 1) {
          res.from_original[n] = kids[0];  // absorbed; no node of its own
        } else {
          NodeRef acc = kids[0];
          for (std::size_t i = 1; i < kids.size(); ++i) acc = b.conjoin(acc, kids[i]);
          res.from_original[n] = made(acc, n);
        }
        break;
      }
      case GateKind::or_gate: {
        std::vector<NodeRef> kids;
        for (NodeRef ch : c.children(n))
          if (mark[ch] == Mark::open) kids.push_back(res.from_original[ch]);
        res.from_original[n] = made(b.disjoin(kids), n);
        break;
      }
      default:
        break;
    }
  }

  CircuitBuilder::BuildResult built = b.build_mapped(res.from_original[c.root()], rest_universe);
  res.to_original.assign(built.circuit.size(), kNullNode);
  for (NodeRef nf = 0; nf < built.circuit.size(); ++nf) {
    NodeRef bn = built.to_builder[nf];
    res.to_original[nf] = bn < builder_to_orig.size() ? builder_to_orig[bn] : kNullNode;
  }
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (res.from_original[n] != kNullNode)
      res.from_original[n] = built.from_builder[res.from_original[n]];
  }
  res.circuit = std::move(built.circuit);
  return res;
}

NodeSetReport node_sets(const Circuit& c, const Vtree& t, VtreeRef v,
                        std::optional<NodeRef> u_ell) {
  NodeSetReport rep;
  rep.v = v;
  DecompositionTable table = hull_table(c, t);
  std::vector<std::uint8_t> in_r(c.size(), 0);
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (table[n] == v) {
      in_r[n] = 1;
      rep.r.push_back(n);
    }
  }
  for (NodeRef n : rep.r) {
    bool leaf_member = true;
    for (NodeRef ch : c.children(n)) {
      if (in_r[ch]) {
        leaf_member = false;
        break;
      }
    }
    if (leaf_member) rep.r_plus.push_back(n);
  }
  if (u_ell) {
    if (*u_ell >= c.size() || !in_r[*u_ell])
      throw input_error("node_sets: u_ell is not a member of the set at the given vtree node");
    std::vector<std::uint8_t> drop(c.size(), 0);
    drop[*u_ell] = 1;
    for (NodeRef ch : c.children(*u_ell)) drop[ch] = 1;
    for (NodeRef n : rep.r_plus)
      if (!drop[n]) rep.r_plus_plus.push_back(n);
  }
  return rep;
}

std::optional<Certificate> extract_certificate_through(const Circuit& c, NodeRef u) {
  PropertyReport dec = check_decomposable(c);
  if (!dec.holds) throw property_violation("extract_certificate_through: " + dec.detail);
  if (u >= c.size()) throw input_error("extract_certificate_through: node out of range");

  std::vector<std::uint8_t> viable(c.size(), 0), can(c.size(), 0);
  for (NodeRef n = 0; n < c.size(); ++n) {
    switch (c.kind(n)) {
      case GateKind::const_false:
        viable[n] = 0;
        break;
      case GateKind::const_true:
      case GateKind::literal:
        viable[n] = 1;
        break;
      case GateKind::and_gate: {
        std::uint8_t v = 1;
        for (NodeRef ch : c.children(n)) v &= viable[ch];
        viable[n] = v;
        break;
      }
      case GateKind::or_gate: {
        std::uint8_t v = 0;
        for (NodeRef ch : c.children(n)) v |= viable[ch];
        viable[n] = v;
        break;
      }
    }
    if (n == u) {
      can[n] = viable[n];
      continue;
    }
    switch (c.kind(n)) {
      case GateKind::and_gate: {
        auto ch = c.children(n);
        bool ok = false;
        for (std::size_t i = 0; i < ch.size() && !ok; ++i) {
          if (!can[ch[i]]) continue;
          bool rest = true;
          for (std::size_t j = 0; j < ch.size(); ++j)
            if (j != i) rest &= viable[ch[j]] != 0;
          ok = rest;
        }
        can[n] = ok;
        break;
      }
      case GateKind::or_gate: {
        std::uint8_t v = 0;
        for (NodeRef ch : c.children(n)) v |= can[ch];
        can[n] = v;
        break;
      }
      default:
        break;
    }
  }
  if (!can[c.root()]) return std::nullopt;

  std::vector<NodeRef> choice(c.size(), kNullNode);

  // Pin the root-to-u path, choosing deterministically.
  NodeRef cur = c.root();
  while (cur != u) {
    auto ch = c.children(cur);
    if (c.kind(cur) == GateKind::and_gate) {
      NodeRef next = kNullNode;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (!can[ch[i]]) continue;
        bool rest = true;
        for (std::size_t j = 0; j < ch.size(); ++j)
          if (j != i) rest &= viable[ch[j]] != 0;
        if (rest) {
          next = ch[i];
          break;
        }
      }
      cur = next;
    } else {  // or_gate: literals/constants cannot be on a strict path
      NodeRef next = kNullNode;
      for (NodeRef x : ch) {
        if (can[x]) {
          next = x;
          break;
        }
      }
      choice[cur] = next;
      cur = next;
    }
  }

  // Complete: walk the chosen subgraph, fixing remaining ∨-choices to the
  // first viable input.
  Certificate cert;
  std::vector<std::uint8_t> in_cert(c.size(), 0);
  std::vector<NodeRef> stack{c.root()};
  while (!stack.empty()) {
    NodeRef n = stack.back();
    stack.pop_back();
    if (in_cert[n]) continue;
    in_cert[n] = 1;
    switch (c.kind(n)) {
      case GateKind::literal:
        cert.decisions.set(c.var(n), c.positive(n));
        break;
      case GateKind::and_gate:
        for (NodeRef ch : c.children(n)) stack.push_back(ch);
        break;
      case GateKind::or_gate: {
        if (choice[n] == kNullNode) {
          for (NodeRef ch : c.children(n)) {
            if (viable[ch]) {
              choice[n] = ch;
              break;
            }
          }
        }
        stack.push_back(choice[n]);
        break;
      }
      case GateKind::const_false:
        cert.contains_false = true;
        break;
      case GateKind::const_true:
        break;
    }
  }
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (!in_cert[n]) continue;
    cert.nodes.push_back(n);
    if (c.kind(n) == GateKind::or_gate) cert.or_choices.emplace_back(n, choice[n]);
  }
  return cert;
}

Assignment shell_restriction_for(const Circuit& c, const Vtree& t, NodeRef u, VtreeRef v) {
  std::optional<Certificate> cert = extract_certificate_through(c, u);
  if (!cert) {
    throw property_violation("shell_restriction_for: node " + std::to_string(u) +
                             " admits no certificate; it computes ⊥ in every context (run "
                             "make_simple first)");
  }
  Assignment p;
  for (VarId var : t.shell(v).to_vector()) {
    p.set(var, cert->decisions.defines(var) ? cert->decisions.value(var) : false);
  }
  return p;
}

std::vector<Certificate> enumerate_certificates(const Circuit& c, std::size_t limit) {
  PropertyReport dec = check_decomposable(c);
  if (!dec.holds) throw property_violation("enumerate_certificates: " + dec.detail);

  std::vector<Certificate> out;
  std::vector<NodeRef> choice(c.size(), kNullNode);

  auto included = [&](std::vector<NodeRef>& pending) {
    std::vector<std::uint8_t> in(c.size(), 0);
    std::vector<NodeRef> nodes;
    pending.clear();
    std::vector<NodeRef> stack{c.root()};
    while (!stack.empty()) {
      NodeRef n = stack.back();
      stack.pop_back();
      if (in[n]) continue;
      in[n] = 1;
      nodes.push_back(n);
      if (c.kind(n) == GateKind::and_gate) {
        for (NodeRef ch : c.children(n)) stack.push_back(ch);
      } else if (c.kind(n) == GateKind::or_gate) {
        if (choice[n] == kNullNode)
          pending.push_back(n);
        else
          stack.push_back(choice[n]);
      }
    }
    return nodes;
  };

  auto recurse = [&](auto&& self) -> bool {
    std::vector<NodeRef> pending;
    std::vector<NodeRef> nodes = included(pending);
    if (pending.empty()) {
      Certificate cert;
      std::sort(nodes.begin(), nodes.end());
      cert.nodes = std::move(nodes);
      for (NodeRef n : cert.nodes) {
        if (c.kind(n) == GateKind::or_gate) cert.or_choices.emplace_back(n, choice[n]);
        if (c.kind(n) == GateKind::literal) cert.decisions.set(c.var(n), c.positive(n));
        if (c.kind(n) == GateKind::const_false) cert.contains_false = true;
      }
      out.push_back(std::move(cert));
      return out.size() < limit;
    }
    NodeRef g = *std::max_element(pending.begin(), pending.end());
    for (NodeRef ch : c.children(g)) {
      choice[g] = ch;
      bool go = self(self);
      choice[g] = kNullNode;
      if (!go) return false;
    }
    return true;
  };
  recurse(recurse);
  return out;
}

}  // namespace strux
