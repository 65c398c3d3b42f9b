#include "strux/simulation.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "bit_eval.hpp"
#include "strux/errors.hpp"
#include "strux/oracle.hpp"
#include "strux/transforms.hpp"
#include "strux/validators.hpp"

namespace strux {

namespace {

constexpr int side_index(SimOrigin o) { return o == SimOrigin::dbar ? 1 : 0; }

// Truth table of node u over (x, y), row index = x_val | y_val << 1. With y
// absent only rows 0 and 1 are meaningful.
std::uint8_t table_bits(const Circuit& c, NodeRef u, VarId x, VarId y) {
  std::uint8_t bits = 0;
  int rows = y == kNoVar ? 2 : 4;
  for (int i = 0; i < rows; ++i) {
    Assignment a;
    a.set(x, (i & 1) != 0);
    if (y != kNoVar) a.set(y, (i & 2) != 0);
    if (c.evaluate(u, a)) bits |= std::uint8_t(1) << i;
  }
  return bits;
}

// Canonical compressed SDD of a function over at most two variables. For two
// variables the shape is a constant, a literal, or an (x, x-bar) decision
// whose subs are constants or literals of y; at most 7 nodes either way.
NodeRef emit_canonical(CircuitBuilder& b, VarId x, VarId y, std::uint8_t bits) {
  if (y == kNoVar) {
    switch (bits & 0x3) {
      case 0x0: return b.constant(false);
      case 0x3: return b.constant(true);
      case 0x2: return b.literal(x, true);
      default: return b.literal(x, false);
    }
  }
  switch (bits) {
    case 0x0: return b.constant(false);
    case 0xF: return b.constant(true);
    case 0xA: return b.literal(x, true);
    case 0x5: return b.literal(x, false);
    case 0xC: return b.literal(y, true);
    case 0x3: return b.literal(y, false);
    default: break;
  }
  auto sub = [&](bool lo, bool hi) {
    if (lo == hi) return b.constant(lo);
    return b.literal(y, hi);
  };
  NodeRef s1 = sub((bits & 0x2) != 0, (bits & 0x8) != 0);  // x = 1 column
  NodeRef s0 = sub((bits & 0x1) != 0, (bits & 0x4) != 0);  // x = 0 column
  return b.disjoin({b.conjoin(b.literal(x, true), s1),
                    b.conjoin(b.literal(x, false), s0)});
}

// The decision variable pair (x, y) of a node covering at most two variables:
// x from the left side, y from the right (kNoVar at a leaf).
void base_vars_of(const Vtree& t, VtreeRef v, VarId& x, VarId& y) {
  if (t.is_leaf(v)) {
    x = t.var(v);
    y = kNoVar;
    return;
  }
  x = t.vars(t.left(v)).min();
  y = t.vars(t.right(v)).min();
}

void require(const PropertyReport& r, const char* who) {
  if (r.holds) return;
  std::string msg = std::string("simulate: ") + who + ": " +
                    property_name(r.property) + " does not hold";
  if (!r.detail.empty()) msg += ": " + r.detail;
  throw input_error(msg);
}

void validate_input(const Circuit& c, const Vtree& t, const char* who) {
  if (!c.vars(c.root()).subset_of(t.variables()))
    throw input_error(std::string("simulate: ") + who +
                      " mentions variables outside the vtree");
  require(check_decomposable(c), who);
  require(check_deterministic(c), who);
  require(check_smooth(c), who);
  require(check_simple(c), who);
  require(check_respects_vtree(c, t, RespectMode::ddnnf_unoriented), who);
  // The root is the last node, so every earlier node is internal here.
  for (NodeRef n = 0; n + 1 < c.size(); ++n)
    if (is_constant(c.kind(n)))
      throw input_error(std::string("simulate: ") + who +
                        " feeds a constant into a gate (run make_simple first)");
}

void verify_complement(const Circuit& d, const Circuit& dbar, const Vtree& t,
                       const SimulateOptions& opt, bool& sampled) {
  std::vector<VarId> order = t.variables().to_vector();
  detail::BitEval ed(d, order);
  detail::BitEval eb(dbar, order);
  std::vector<std::uint64_t> vd, vb;
  Assignment none;
  auto fail = [](const Assignment& a) {
    throw input_error(
        "simulate: the two inputs are not complements; they agree at " +
        a.to_string());
  };
  if (order.size() <= opt.complement_cap) {
    for (std::uint64_t blk = 0; blk < ed.block_count(); ++blk) {
      ed.eval_block(blk, none, vd);
      eb.eval_block(blk, none, vb);
      std::uint64_t bad = ~(vd[ed.top()] ^ vb[eb.top()]) & ed.valid_mask();
      if (bad) fail(ed.decode(blk, std::uint32_t(__builtin_ctzll(bad))));
    }
    return;
  }
  sampled = true;
  std::mt19937_64 rng(opt.seed ^ 0x636f6d706cull);
  std::vector<std::uint64_t> words;
  std::uint64_t blocks = (opt.complement_samples + 63) / 64;
  for (std::uint64_t i = 0; i < blocks; ++i) {
    ed.eval_random_block(rng, none, vd, words);
    eb.eval_block_with_words(words, none, vb);
    std::uint64_t bad = ~(vd[ed.top()] ^ vb[eb.top()]);
    if (bad) fail(ed.decode_random(words, std::uint32_t(__builtin_ctzll(bad))));
  }
}

struct Oriented {
  Circuit circuit;
  std::vector<NodeRef> map;
};

// Rebuilds c with every and-gate's inputs ordered (left-side input first)
// against the given vtree. Gate identities survive through `map`.
Oriented reorient(const Circuit& c, const Vtree& t) {
  DecompositionTable h = hull_table(c, t);
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
      case GateKind::or_gate: {
        std::vector<NodeRef> kids;
        kids.reserve(c.children(n).size());
        for (NodeRef k : c.children(n)) kids.push_back(img[k]);
        img[n] = b.disjoin(kids);
        break;
      }
      case GateKind::and_gate: {
        auto ch = c.children(n);
        NodeRef first = img[ch[0]];
        NodeRef second = img[ch[1]];
        VtreeRef v = h[n];
        if (v != kNullVtree && t.is_internal(v) &&
            !c.vars(ch[0]).subset_of(t.vars(t.left(v))))
          std::swap(first, second);
        img[n] = b.conjoin(first, second);
        break;
      }
    }
  }
  CircuitBuilder::BuildResult br = b.build_mapped(img[c.root()], c.universe());
  Oriented out{std::move(br.circuit), std::vector<NodeRef>(c.size(), kNullNode)};
  for (NodeRef n = 0; n < c.size(); ++n)
    out.map[n] = br.from_builder[img[n]];
  return out;
}

struct Sim {
  const Vtree& t;
  std::array<const Circuit*, 2> src;
  std::array<DecompositionTable, 2> hull;
  CircuitBuilder b;
  std::unordered_map<std::uint64_t, NodeRef> memo;
  struct RPair {
    RestrictResult side[2];
  };
  std::unordered_map<std::string, RPair> cache;
  std::vector<SimKeyRecord> records;
  std::unordered_map<std::uint64_t, std::size_t> rec_index;

  Sim(const Circuit& d, const Circuit& db, const Vtree& tt) : t(tt), src{&d, &db} {
    hull[0] = hull_table(d, tt);
    hull[1] = hull_table(db, tt);
  }

  RPair& restricted(const Assignment& p) {
    std::string k = p.key();
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    RPair pair{{restrict(*src[0], t, p), restrict(*src[1], t, p)}};
    return cache.emplace(std::move(k), std::move(pair)).first->second;
  }

  NodeRef process(SimOrigin o, NodeRef u);
};

NodeRef Sim::process(SimOrigin o, NodeRef u) {
  const std::uint64_t key = SimulationTrace::key_of(o, u);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const Circuit& c = *src[side_index(o)];
  if (is_constant(c.kind(u)))
    throw property_violation("simulate: a constant node reached emission");
  VtreeRef v = hull[side_index(o)][u];

  SimKeyRecord rec;
  rec.origin = o;
  rec.u = u;
  rec.v = v;
  NodeRef out = kNullNode;

  if (t.var_count(v) <= 2) {
    rec.kind = SimKeyRecord::Case::base;
    VarId x = kNoVar, y = kNoVar;
    base_vars_of(t, v, x, y);
    rec.base_fn.vars = {x, y};
    rec.base_fn.bits = table_bits(c, u, x, y);
    out = emit_canonical(b, x, y, rec.base_fn.bits);
  } else if (c.kind(u) == GateKind::or_gate) {
    rec.kind = SimKeyRecord::Case::or_case;
    Assignment p = shell_restriction_for(c, t, u, v);
    RPair& rp = restricted(p);
    const RestrictResult& own = rp.side[side_index(o)];
    const RestrictResult& foreign = rp.side[1 - side_index(o)];
    NodeRef u_img = own.from_original[u];
    NodeSetReport so = node_sets(own.circuit, t, v);
    NodeSetReport sf = node_sets(foreign.circuit, t, v);
    if (u_img == kNullNode ||
        !std::binary_search(so.r.begin(), so.r.end(), u_img))
      throw property_violation(
          "simulate: a processed node left its own family under the shell "
          "restriction");

    auto back = [](const RestrictResult& rr, const std::vector<NodeRef>& ns) {
      std::vector<NodeRef> out_ids;
      out_ids.reserve(ns.size());
      for (NodeRef m : ns) out_ids.push_back(rr.to_original[m]);
      return out_ids;
    };
    rec.p = std::move(p);
    rec.own_r = back(own, so.r);
    rec.own_r_plus = back(own, so.r_plus);
    rec.foreign_r_plus = back(foreign, sf.r_plus);

    std::unordered_set<NodeRef> edges(c.children(u).begin(), c.children(u).end());
    {
      std::unordered_set<NodeRef> member_srcs(rec.own_r_plus.begin(),
                                              rec.own_r_plus.end());
      for (NodeRef chd : c.children(u))
        if (!member_srcs.count(chd))
          throw property_violation(
              "simulate: an input of a processed or-gate is missing from its "
              "family");
    }

    std::vector<NodeRef> elems;
    bool true_edge = false;
    for (SimOrigin side : {SimOrigin::d, SimOrigin::dbar}) {
      const bool is_own = side == o;
      const RestrictResult& rr = is_own ? own : foreign;
      const std::vector<NodeRef>& members = is_own ? so.r_plus : sf.r_plus;
      for (NodeRef m : members) {
        NodeRef s = rr.to_original[m];
        NodeRef prime = process(side, s);
        bool sub_true = is_own && edges.count(s) != 0;
        if (sub_true && prime == b.constant(true)) true_edge = true;
        elems.push_back(b.conjoin(prime, b.constant(sub_true)));
        rec.partners.emplace_back(side, s);
        rec.partner_sub_true.push_back(sub_true ? 1 : 0);
      }
    }
    // An input computing top makes the gate constant; a decision built from
    // it would carry no variables and fit no decomposition node.
    out = true_edge ? b.constant(true) : b.disjoin(elems);
  } else {
    rec.kind = SimKeyRecord::Case::and_case;
    auto ch = c.children(u);
    NodeRef u_ell = ch[0];
    NodeRef u_r = ch[1];
    VtreeRef v_ell = hull[side_index(o)][u_ell];
    rec.v_ell = v_ell;
    Assignment p = shell_restriction_for(c, t, u_ell, v_ell);
    RPair& rp = restricted(p);
    const RestrictResult& own = rp.side[side_index(o)];
    const RestrictResult& foreign = rp.side[1 - side_index(o)];
    NodeRef ul_img = own.from_original[u_ell];
    if (ul_img == kNullNode)
      throw property_violation(
          "simulate: the left input of a processed and-gate vanished under "
          "the shell restriction");
    NodeSetReport so;
    try {
      so = node_sets(own.circuit, t, v_ell, ul_img);
    } catch (const input_error& e) {
      throw property_violation(
          std::string("simulate: left-input family lookup failed: ") + e.what());
    }
    NodeSetReport sf = node_sets(foreign.circuit, t, v_ell);

    auto back = [](const RestrictResult& rr, const std::vector<NodeRef>& ns) {
      std::vector<NodeRef> out_ids;
      out_ids.reserve(ns.size());
      for (NodeRef m : ns) out_ids.push_back(rr.to_original[m]);
      return out_ids;
    };
    rec.p = std::move(p);
    rec.own_r = back(own, so.r);
    rec.own_r_plus = back(own, so.r_plus);
    rec.own_r_plus_plus = back(own, so.r_plus_plus);
    rec.foreign_r_plus = back(foreign, sf.r_plus);

    std::vector<NodeRef> elems;
    NodeRef lead_prime = process(o, u_ell);
    NodeRef lead_sub = process(o, u_r);
    elems.push_back(b.conjoin(lead_prime, lead_sub));
    for (SimOrigin side : {SimOrigin::d, SimOrigin::dbar}) {
      const bool is_own = side == o;
      const RestrictResult& rr = is_own ? own : foreign;
      const std::vector<NodeRef>& members = is_own ? so.r_plus_plus : sf.r_plus;
      for (NodeRef m : members) {
        NodeRef s = rr.to_original[m];
        NodeRef prime = process(side, s);
        elems.push_back(b.conjoin(prime, b.constant(false)));
        rec.partners.emplace_back(side, s);
        rec.partner_sub_true.push_back(0);
      }
    }
    // Both inputs computing top happens above wide don't-care regions; the
    // gate is the constant, and a variable-free decision would fit no
    // decomposition node. Partner elements carry bottom subs, so they add
    // nothing here.
    out = lead_prime == b.constant(true) && lead_sub == b.constant(true)
              ? b.constant(true)
              : b.disjoin(elems);
  }

  memo.emplace(key, out);
  rec.s_node = out;
  rec_index.emplace(key, records.size());
  records.push_back(std::move(rec));
  return out;
}

}  // namespace

Circuit two_var_sdd(const TwoVarFunction& f, const Vtree& t, VtreeRef t2) {
  if (t.var_count(t2) > 2)
    throw input_error("two_var_sdd: target node covers more than two variables");
  VarId x = kNoVar, y = kNoVar;
  base_vars_of(t, t2, x, y);
  if (f.vars[0] != x || f.vars[1] != y)
    throw input_error("two_var_sdd: function variables do not match the node");
  CircuitBuilder b;
  return b.build(emit_canonical(b, x, y, f.bits), t.vars(t2));
}

namespace {

bool same_structure(const Circuit& a, const Circuit& b) {
  if (a.size() != b.size() || a.edge_count() != b.edge_count() || a.root() != b.root())
    return false;
  for (NodeRef n = 0; n < a.size(); ++n) {
    if (a.kind(n) != b.kind(n)) return false;
    if (a.kind(n) == GateKind::literal &&
        (a.var(n) != b.var(n) || a.positive(n) != b.positive(n)))
      return false;
    auto ca = a.children(n);
    auto cb = b.children(n);
    if (ca.size() != cb.size() || !std::equal(ca.begin(), ca.end(), cb.begin())) return false;
  }
  return true;
}

Circuit preprocess_base_pass(const Circuit& c, const Vtree& t) {
  DecompositionTable h = hull_table(c, t);
  std::vector<char> base(c.size(), 0);
  for (NodeRef n = 0; n < c.size(); ++n)
    base[n] = h[n] != kNullVtree && t.var_count(h[n]) <= 2;
  // Region roots: base nodes fed into non-base parents, plus a base root.
  std::vector<char> region_root(c.size(), 0);
  if (base[c.root()]) region_root[c.root()] = 1;
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (base[n]) continue;
    for (NodeRef k : c.children(n))
      if (base[k]) region_root[k] = 1;
  }
  CircuitBuilder b;
  std::vector<NodeRef> img(c.size(), kNullNode);
  for (NodeRef n = 0; n < c.size(); ++n) {
    if (region_root[n]) {
      VarId x = kNoVar, y = kNoVar;
      base_vars_of(t, h[n], x, y);
      img[n] = emit_canonical(b, x, y, table_bits(c, n, x, y));
      continue;
    }
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
      case GateKind::and_gate:
        img[n] = b.conjoin(img[c.children(n)[0]], img[c.children(n)[1]]);
        break;
      case GateKind::or_gate: {
        std::vector<NodeRef> kids;
        for (NodeRef k : c.children(n)) kids.push_back(img[k]);
        img[n] = b.disjoin(kids);
        break;
      }
    }
  }
  return b.build(img[c.root()], c.universe());
}

}  // namespace

Circuit preprocess_base(const Circuit& c, const Vtree& t) {
  // A region collapsing to a constant shrinks its parent's coverage, which can
  // pull the parent into base range; iterate until nothing moves.
  Circuit cur = preprocess_base_pass(c, t);
  for (std::size_t guard = c.size() + 2; guard-- > 0;) {
    Circuit next = preprocess_base_pass(cur, t);
    if (same_structure(cur, next)) break;
    cur = std::move(next);
  }
  return cur;
}

VtreeRef node_map(const Circuit& c, NodeRef u, const Vtree& t,
                  const ModifyResult& m) {
  if (is_constant(c.kind(u))) return m.tree.root();
  DecompositionTable h = hull_table(c, t);
  VtreeRef v = h[u];
  if (t.var_count(v) <= 2 || c.kind(u) == GateKind::and_gate)
    return m.orig_to_new[v];
  return m.inserted_parent[v];
}

SimulationResult simulate(const Circuit& d, const Circuit& dbar, const Vtree& t,
                          const SimulateOptions& options) {
  if (t.has_stubs())
    throw input_error("simulate: the vtree must not contain stubs");
  validate_input(d, t, "first input");
  validate_input(dbar, t, "second input");

  SimulationResult res;
  if (!options.skip_complement_check)
    verify_complement(d, dbar, t, options, res.complement_sampled);

  res.normalized_t = normalize(t);
  Oriented od = reorient(d, res.normalized_t);
  Oriented ob = reorient(dbar, res.normalized_t);
  res.d_oriented = std::move(od.circuit);
  res.dbar_oriented = std::move(ob.circuit);
  res.d_to_oriented = std::move(od.map);
  res.dbar_to_oriented = std::move(ob.map);
  res.modification = modify(res.normalized_t);

  VarSet universe = res.normalized_t.variables();
  for (VarId a : res.modification.aux_vars) universe.insert(a);

  if (is_constant(res.d_oriented.kind(res.d_oriented.root()))) {
    CircuitBuilder cb;
    bool val = res.d_oriented.kind(res.d_oriented.root()) == GateKind::const_true;
    res.s = cb.build(cb.constant(val), universe);
    SimKeyRecord rec;
    rec.origin = SimOrigin::d;
    rec.u = res.d_oriented.root();
    rec.kind = SimKeyRecord::Case::base;
    rec.s_node = res.s.root();
    rec.base_fn.bits = val ? 0xF : 0x0;
    res.trace.index.emplace(SimulationTrace::key_of(rec.origin, rec.u), 0);
    res.trace.records.push_back(std::move(rec));
    return res;
  }

  Sim sim(res.d_oriented, res.dbar_oriented, res.normalized_t);
  NodeRef root_node = sim.process(SimOrigin::d, res.d_oriented.root());
  CircuitBuilder::BuildResult br = sim.b.build_mapped(root_node, universe);
  res.s = std::move(br.circuit);
  for (SimKeyRecord& rec : sim.records) rec.s_node = br.from_builder[rec.s_node];
  res.trace.records = std::move(sim.records);
  res.trace.index = std::move(sim.rec_index);
  return res;
}

Lemma2Report verify_lemma2(const SimulationResult& r, std::size_t cap,
                           std::uint64_t seed) {
  Lemma2Report rep;
  const Vtree& tp = r.t_prime();
  std::array<const Circuit*, 2> src{&r.d_oriented, &r.dbar_oriented};
  for (const SimKeyRecord& rec : r.trace.records) {
    ++rep.keys_checked;
    const Circuit& c = *src[side_index(rec.origin)];
    std::size_t width =
        rec.v == kNullVtree ? 0 : r.normalized_t.var_count(rec.v);
    ++rep.keys_by_width[width];
    VtreeRef at;
    if (rec.v == kNullVtree)
      at = tp.root();
    else if (width <= 2 || c.kind(rec.u) == GateKind::and_gate)
      at = r.modification.orig_to_new[rec.v];
    else
      at = r.modification.inserted_parent[rec.v];
    std::string tag =
        std::string(origin_name(rec.origin)) + ":" + std::to_string(rec.u);

    PropertyReport sd = check_sdd_node(r.s, rec.s_node, tp, at, cap, seed);
    if (!sd.holds)
      rep.failures.push_back(tag + ": not an SDD at its position: " + sd.detail);

    EquivOptions eo;
    eo.cap = cap;
    eo.seed = seed;
    EquivResult eq =
        equivalent(subcircuit(r.s, rec.s_node), subcircuit(c, rec.u), eo);
    if (!eq.equivalent) {
      std::string msg = tag + ": emitted function differs from the source";
      if (eq.counterexample) msg += " at " + eq.counterexample->to_string();
      rep.failures.push_back(msg);
    }
  }
  return rep;
}

}  // namespace strux
