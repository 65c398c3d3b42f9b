#include "strux/validators.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "bit_eval.hpp"
#include "strux/errors.hpp"

namespace strux {

namespace {

constexpr std::uint64_t kSampleBlocks = 2048;  // 131072 assignments per sampled sweep

Assignment decode_over(const std::vector<VarId>& order, std::uint64_t block, unsigned lane) {
  Assignment a;
  std::uint64_t idx = block * 64 + lane;
  for (std::size_t k = 0; k < order.size(); ++k) a.set(order[k], (idx >> k) & 1);
  return a;
}

}  // namespace

const char* property_name(CircuitProperty p) {
  switch (p) {
    case CircuitProperty::decomposable: return "decomposable";
    case CircuitProperty::deterministic: return "deterministic";
    case CircuitProperty::smooth: return "smooth";
    case CircuitProperty::simple: return "simple";
    case CircuitProperty::respects_vtree: return "respects-vtree";
    case CircuitProperty::sdd: return "sdd";
    case CircuitProperty::partition: return "partition";
  }
  return "unknown";
}

PropertyReport check_decomposable(const Circuit& c) {
  PropertyReport r;
  r.property = CircuitProperty::decomposable;
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (c.kind(n) != GateKind::and_gate) continue;
    auto ch = c.children(n);
    for (std::size_t i = 0; i < ch.size(); ++i) {
      for (std::size_t j = i + 1; j < ch.size(); ++j) {
        if (c.vars(ch[i]).intersects(c.vars(ch[j]))) {
          r.holds = false;
          r.witness_gates = {n, ch[i], ch[j]};
          VarSet shared = c.vars(ch[i]);
          shared &= c.vars(ch[j]);
          r.detail = "∧-gate " + std::to_string(n) + " has inputs sharing variables " +
                     shared.to_string();
          return r;
        }
      }
    }
  }
  return r;
}

namespace {

// Looks for a 64-assignment block on which two inputs of some ∨-gate are both
// true; returns the offending lane or 64 if none.
unsigned or_overlap_lane(const Circuit& c, const std::vector<std::uint64_t>& vals, NodeRef gate,
                         std::uint64_t valid, NodeRef& out_a, NodeRef& out_b) {
  std::uint64_t seen = 0, dup = 0;
  for (NodeRef ch : c.children(gate)) {
    dup |= seen & vals[ch];
    seen |= vals[ch];
  }
  dup &= valid;
  if (!dup) return 64;
  unsigned lane = static_cast<unsigned>(std::countr_zero(dup));
  std::uint64_t bit = std::uint64_t{1} << lane;
  out_a = out_b = kNullNode;
  for (NodeRef ch : c.children(gate)) {
    if (!(vals[ch] & bit)) continue;
    if (out_a == kNullNode) {
      out_a = ch;
    } else {
      out_b = ch;
      break;
    }
  }
  return lane;
}

}  // namespace

PropertyReport check_deterministic(const Circuit& c, std::size_t cap, std::uint64_t seed) {
  PropertyReport r;
  r.property = CircuitProperty::deterministic;
  std::vector<NodeRef> ors;
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (c.kind(n) == GateKind::or_gate && c.children(n).size() >= 2) ors.push_back(n);
  }
  if (ors.empty()) return r;

  std::vector<std::uint64_t> vals;
  std::vector<VarId> uni = c.universe().to_vector();
  if (uni.size() <= cap) {
    detail::BitEval ev(c, uni);
    for (std::uint64_t b = 0; b < ev.block_count(); ++b) {
      ev.eval_block(b, Assignment{}, vals);
      for (NodeRef g : ors) {
        NodeRef x, y;
        unsigned lane = or_overlap_lane(c, vals, g, ev.valid_mask(), x, y);
        if (lane < 64) {
          r.holds = false;
          r.witness_gates = {g, x, y};
          r.witness_assignment = ev.decode(b, lane);
          r.detail = "∨-gate " + std::to_string(g) + " has two inputs satisfied together";
          return r;
        }
      }
    }
    return r;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> words;
  for (NodeRef g : ors) {
    std::vector<VarId> gv = c.vars(g).to_vector();
    detail::BitEval ev(c, gv, g);
    if (gv.size() <= cap) {
      for (std::uint64_t b = 0; b < ev.block_count(); ++b) {
        ev.eval_block(b, Assignment{}, vals);
        NodeRef x, y;
        unsigned lane = or_overlap_lane(c, vals, g, ev.valid_mask(), x, y);
        if (lane < 64) {
          r.holds = false;
          r.witness_gates = {g, x, y};
          r.witness_assignment = ev.decode(b, lane);
          r.detail = "∨-gate " + std::to_string(g) + " has two inputs satisfied together";
          return r;
        }
      }
    } else {
      r.sampled = true;
      for (std::uint64_t b = 0; b < kSampleBlocks; ++b) {
        ev.eval_random_block(rng, Assignment{}, vals, words);
        NodeRef x, y;
        unsigned lane = or_overlap_lane(c, vals, g, ~0ull, x, y);
        if (lane < 64) {
          r.holds = false;
          r.witness_gates = {g, x, y};
          r.witness_assignment = ev.decode_random(words, lane);
          r.detail = "∨-gate " + std::to_string(g) + " has two inputs satisfied together (found by sampling)";
          return r;
        }
      }
    }
  }
  if (r.sampled) r.detail = "gates over more than " + std::to_string(cap) + " variables were sampled";
  return r;
}

PropertyReport check_smooth(const Circuit& c) {
  PropertyReport r;
  r.property = CircuitProperty::smooth;
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (c.kind(n) != GateKind::or_gate) continue;
    for (NodeRef ch : c.children(n)) {
      if (c.vars(ch) != c.vars(n)) {
        r.holds = false;
        r.witness_gates = {n, ch};
        r.detail = "∨-gate " + std::to_string(n) + " over " + c.vars(n).to_string() +
                   " has an input over " + c.vars(ch).to_string();
        return r;
      }
    }
  }
  return r;
}

PropertyReport check_simple(const Circuit& c) {
  PropertyReport r;
  r.property = CircuitProperty::simple;
  PropertyReport dec = check_decomposable(c);
  if (!dec.holds) {
    r.holds = false;
    r.witness_gates = dec.witness_gates;
    r.detail = "not decomposable, so ⊥-freeness of gates cannot be decided: " + dec.detail;
    return r;
  }
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (c.kind(n) != GateKind::or_gate) continue;
    for (NodeRef ch : c.children(n)) {
      if (c.kind(ch) == GateKind::or_gate) {
        r.holds = false;
        r.witness_gates = {n, ch};
        r.detail = "∨-gate " + std::to_string(n) + " has an ∨-gate input";
        return r;
      }
      if (is_constant(c.kind(ch))) {
        r.holds = false;
        r.witness_gates = {n, ch};
        r.detail = "∨-gate " + std::to_string(n) + " has a constant input";
        return r;
      }
    }
  }
  std::vector<std::uint8_t> sat(c.size(), 0);
  for (NodeRef n = 0; n < c.size(); ++n) {
    switch (c.kind(n)) {
      case GateKind::const_false:
        sat[n] = 0;
        break;
      case GateKind::const_true:
      case GateKind::literal:
        sat[n] = 1;
        break;
      case GateKind::and_gate: {
        std::uint8_t v = 1;
        for (NodeRef ch : c.children(n)) v &= sat[ch];
        sat[n] = v;
        break;
      }
      case GateKind::or_gate: {
        std::uint8_t v = 0;
        for (NodeRef ch : c.children(n)) v |= sat[ch];
        sat[n] = v;
        break;
      }
    }
    if (!sat[n] && c.kind(n) != GateKind::const_false) {
      r.holds = false;
      r.witness_gates = {n};
      r.detail = "gate " + std::to_string(n) + " computes ⊥ but is not a ⊥-labeled node";
      return r;
    }
  }
  return r;
}

PropertyReport check_respects_vtree(const Circuit& c, const Vtree& t, RespectMode mode) {
  PropertyReport r;
  r.property = CircuitProperty::respects_vtree;
  if (!c.vars(c.root()).subset_of(t.variables())) {
    r.holds = false;
    VarSet extra = c.vars(c.root());
    extra -= t.variables();
    r.detail = "circuit mentions variables outside the vtree: " + extra.to_string();
    return r;
  }
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (c.kind(n) != GateKind::and_gate) continue;
    auto ch = c.children(n);
    if (ch.size() != 2) {
      r.holds = false;
      r.witness_gates = {n};
      r.detail = "∧-gate " + std::to_string(n) + " is not binary";
      return r;
    }
    const VarSet& lv = c.vars(ch[0]);
    const VarSet& rv = c.vars(ch[1]);
    if (lv.empty() && rv.empty()) continue;
    if (lv.intersects(rv)) {
      r.holds = false;
      r.witness_gates = {n, ch[0], ch[1]};
      r.detail = "∧-gate " + std::to_string(n) + " has inputs sharing variables";
      return r;
    }
    if (lv.empty() || rv.empty()) {
      const VarSet& nv = lv.empty() ? rv : lv;
      bool need_left = lv.empty() ? false : true;  // which input carries the variables
      bool ok = false;
      for (VtreeRef z = t.hull(nv); z != t.root(); z = t.parent(z)) {
        VtreeRef p = t.parent(z);
        if (mode == RespectMode::ddnnf_unoriented || (t.left(p) == z) == need_left) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        r.holds = false;
        r.witness_gates = {n};
        r.detail = "∧-gate " + std::to_string(n) + " over " + nv.to_string() +
                   " has no vtree node whose matching side covers it";
        return r;
      }
      continue;
    }
    VarSet both = lv;
    both |= rv;
    VtreeRef h = t.hull(both);
    if (!t.is_internal(h)) {
      r.holds = false;
      r.witness_gates = {n};
      r.detail = "∧-gate " + std::to_string(n) + " cannot be split by any vtree node";
      return r;
    }
    bool fwd =
        lv.subset_of(t.vars(t.left(h))) && rv.subset_of(t.vars(t.right(h)));
    bool rev =
        rv.subset_of(t.vars(t.left(h))) && lv.subset_of(t.vars(t.right(h)));
    bool ok = mode == RespectMode::sdd_oriented ? fwd : (fwd || rev);
    if (!ok) {
      r.holds = false;
      r.witness_gates = {n, ch[0], ch[1]};
      r.detail = "∧-gate " + std::to_string(n) + " with inputs over " + lv.to_string() + " and " +
                 rv.to_string() + " does not match the sides of its vtree node";
      return r;
    }
  }
  return r;
}

PropertyReport check_partition(const std::vector<PartitionMember>& members,
                               const std::vector<VarId>& over, std::size_t cap,
                               std::uint64_t seed) {
  PropertyReport r;
  r.property = CircuitProperty::partition;
  VarSet overset;
  for (VarId v : over) overset.insert(v);
  for (const PartitionMember& m : members) {
    if (!m.circuit->vars(m.node).subset_of(overset)) {
      throw input_error("check_partition: member variables are not covered by the given order");
    }
  }
  if (members.empty()) {
    r.holds = false;
    r.detail = "an empty family covers nothing";
    return r;
  }

  std::vector<detail::BitEval> evs;
  evs.reserve(members.size());
  for (const PartitionMember& m : members) evs.emplace_back(*m.circuit, over, m.node);

  std::vector<std::vector<std::uint64_t>> vals(members.size());
  std::vector<std::uint8_t> anytrue(members.size(), 0);

  auto scan_block = [&](std::uint64_t valid) -> bool {
    std::uint64_t seen = 0, dup = 0;
    std::size_t first_dup_i = 0, first_dup_j = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      std::uint64_t v = vals[i][evs[i].top()] & valid;
      if (v) anytrue[i] = 1;
      if ((dup == 0) && (seen & v)) {
        dup = seen & v;
        first_dup_j = i;
        std::uint64_t bit = dup & (~dup + 1);
        for (std::size_t k = 0; k < i; ++k) {
          if (vals[k][evs[k].top()] & bit) {
            first_dup_i = k;
            break;
          }
        }
      }
      seen |= v;
    }
    if (dup) {
      r.holds = false;
      r.witness_gates = {members[first_dup_i].node, members[first_dup_j].node};
      r.detail = "members " + std::to_string(first_dup_i) + " and " + std::to_string(first_dup_j) +
                 " are satisfied together";
      return false;
    }
    if (seen != valid) {
      r.holds = false;
      r.detail = "the family is not exhaustive";
      return false;
    }
    return true;
  };

  if (over.size() <= cap) {
    std::uint64_t blocks = evs[0].block_count();
    for (std::uint64_t b = 0; b < blocks; ++b) {
      for (std::size_t i = 0; i < members.size(); ++i)
        evs[i].eval_block(b, Assignment{}, vals[i]);
      std::uint64_t valid = evs[0].valid_mask();
      if (!scan_block(valid)) {
        // Recover the offending lane for a concrete witness.
        std::uint64_t seen = 0, dup = 0, cover = 0;
        for (std::size_t i = 0; i < members.size(); ++i) {
          std::uint64_t v = vals[i][evs[i].top()] & valid;
          dup |= seen & v;
          seen |= v;
        }
        cover = seen;
        unsigned lane = dup ? static_cast<unsigned>(std::countr_zero(dup))
                            : static_cast<unsigned>(std::countr_zero(valid & ~cover));
        r.witness_assignment = decode_over(over, b, lane);
        return r;
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!anytrue[i]) {
        r.holds = false;
        r.witness_gates = {members[i].node};
        r.detail = "member " + std::to_string(i) + " computes ⊥";
        return r;
      }
    }
    return r;
  }

  r.sampled = true;
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> words;
  for (std::uint64_t b = 0; b < kSampleBlocks; ++b) {
    words.assign(over.size(), 0);
    for (auto& w : words) w = rng();
    for (std::size_t i = 0; i < members.size(); ++i)
      evs[i].eval_block_with_words(words, Assignment{}, vals[i]);
    if (!scan_block(~0ull)) {
      std::uint64_t seen = 0, dup = 0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        std::uint64_t v = vals[i][evs[i].top()];
        dup |= seen & v;
        seen |= v;
      }
      unsigned lane = dup ? static_cast<unsigned>(std::countr_zero(dup))
                          : static_cast<unsigned>(std::countr_zero(~seen));
      Assignment a;
      for (std::size_t k = 0; k < over.size(); ++k) a.set(over[k], (words[k] >> lane) & 1);
      r.witness_assignment = std::move(a);
      r.detail += " (found by sampling)";
      return r;
    }
  }
  r.detail = "verified by sampling only (" + std::to_string(over.size()) + " variables exceed cap " +
             std::to_string(cap) + ")";
  return r;
}

namespace {

class SddChecker {
 public:
  SddChecker(const Circuit& c, const Vtree& t, std::size_t cap, std::uint64_t seed,
             PropertyReport& rep)
      : c_(c), t_(t), cap_(cap), seed_(seed), rep_(rep) {}

  bool at(NodeRef n, VtreeRef v) {
    if (is_constant(c_.kind(n))) return true;
    std::uint64_t key = (std::uint64_t{n} << 32) | v;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool ok = eval(n, v);
    memo_[key] = ok;
    return ok;
  }

  bool sampled() const { return sampled_; }

 private:
  bool fail(NodeRef n, std::string msg) {
    if (rep_.holds) {
      rep_.holds = false;
      rep_.witness_gates = {n};
      rep_.detail = std::move(msg);
    }
    return false;
  }

  bool eval(NodeRef n, VtreeRef v) {
    switch (c_.kind(n)) {
      case GateKind::const_false:
      case GateKind::const_true:
        return true;
      case GateKind::literal:
        if (!t_.vars(v).contains(c_.var(n))) {
          return fail(n, "literal over variable " + std::to_string(c_.var(n)) +
                             " placed at a vtree node that does not contain it");
        }
        return true;
      case GateKind::and_gate:
        return fail(n, "∧-gate " + std::to_string(n) +
                           " found where an SDD requires a constant, literal, or ∨ of "
                           "prime/sub pairs");
      case GateKind::or_gate:
        break;
    }

    auto ch = c_.children(n);
    std::vector<NodeRef> primes, subs;
    primes.reserve(ch.size());
    subs.reserve(ch.size());
    for (NodeRef e : ch) {
      if (c_.kind(e) != GateKind::and_gate || c_.children(e).size() != 2) {
        return fail(n, "∨-gate " + std::to_string(n) + " has input " + std::to_string(e) +
                           " that is not a binary ∧ (prime, sub) pair");
      }
      primes.push_back(c_.children(e)[0]);
      subs.push_back(c_.children(e)[1]);
    }

    VarSet pu, su;
    for (NodeRef p : primes) pu |= c_.vars(p);
    for (NodeRef s : subs) su |= c_.vars(s);

    // The partition requirements are placement-independent: disjointness and
    // non-⊥ never mention the vtree, and a disjunction equal to ⊤ over the
    // primes' own variables is ⊤ over any superset.
    {
      std::vector<PartitionMember> fam;
      fam.reserve(primes.size());
      for (NodeRef p : primes) fam.push_back({&c_, p});
      PropertyReport part = check_partition(fam, pu.to_vector(), cap_, seed_ ^ n);
      if (part.sampled) sampled_ = true;
      if (!part.holds) {
        bool was_ok = rep_.holds;
        if (was_ok) {
          rep_.holds = false;
          rep_.witness_gates = {n};
          rep_.witness_assignment = part.witness_assignment;
          rep_.detail = "primes of ∨-gate " + std::to_string(n) +
                        " do not form a partition: " + part.detail;
        }
        return false;
      }
    }

    std::vector<VtreeRef> cands;
    if (!pu.empty()) {
      VtreeRef h = t_.hull(pu);
      if (!t_.is_ancestor_or_self(v, h)) {
        return fail(n, "primes of ∨-gate " + std::to_string(n) +
                           " mention variables outside the required subtree");
      }
      for (VtreeRef z = h; z != v; z = t_.parent(z)) {
        VtreeRef w = t_.parent(z);
        if (t_.left(w) == z && su.subset_of(t_.vars(t_.right(w)))) cands.push_back(w);
      }
    } else if (!su.empty()) {
      VtreeRef h = t_.hull(su);
      if (!t_.is_ancestor_or_self(v, h)) {
        return fail(n, "subs of ∨-gate " + std::to_string(n) +
                           " mention variables outside the required subtree");
      }
      for (VtreeRef z = h; z != v; z = t_.parent(z)) {
        VtreeRef w = t_.parent(z);
        if (t_.right(w) == z) cands.push_back(w);
      }
    } else {
      // Constant decomposition: any internal node admits it, v itself if it is one.
      if (t_.is_internal(v)) cands.push_back(v);
    }
    if (cands.empty()) {
      return fail(n, "no vtree node below the required subtree admits the prime/sub split of "
                     "∨-gate " + std::to_string(n));
    }

    for (VtreeRef w : cands) {
      bool ok = true;
      for (std::size_t i = 0; ok && i < primes.size(); ++i) ok = at(primes[i], t_.left(w));
      for (std::size_t i = 0; ok && i < subs.size(); ++i) ok = at(subs[i], t_.right(w));
      if (ok) {
        if (!rep_.holds) {
          // A deeper candidate recorded a failure that this placement voids.
          rep_.holds = true;
          rep_.witness_gates.clear();
          rep_.witness_assignment.reset();
          rep_.detail.clear();
        }
        return true;
      }
    }
    return fail(n, "no vtree placement admits ∨-gate " + std::to_string(n) +
                       " with all primes and subs checked recursively");
  }

  const Circuit& c_;
  const Vtree& t_;
  std::size_t cap_;
  std::uint64_t seed_;
  PropertyReport& rep_;
  std::unordered_map<std::uint64_t, bool> memo_;
  bool sampled_ = false;
};

}  // namespace

PropertyReport check_sdd_node(const Circuit& c, NodeRef root, const Vtree& t, VtreeRef at,
                              std::size_t cap, std::uint64_t seed) {
  PropertyReport r;
  r.property = CircuitProperty::sdd;
  if (!c.vars(root).subset_of(t.vars(at))) {
    r.holds = false;
    r.detail = "subcircuit mentions variables outside the vtree subtree";
    return r;
  }
  SddChecker checker(c, t, cap, seed, r);
  bool ok = checker.at(root, at);
  r.holds = ok;
  if (ok) {
    r.witness_gates.clear();
    r.witness_assignment.reset();
    r.detail.clear();
  }
  r.sampled = checker.sampled();
  return r;
}

PropertyReport check_sdd(const Circuit& c, const Vtree& t, std::size_t cap, std::uint64_t seed) {
  return check_sdd_node(c, c.root(), t, t.root(), cap, seed);
}

}  // namespace strux
