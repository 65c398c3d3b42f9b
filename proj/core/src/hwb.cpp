#include "strux/hwb.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "strux/errors.hpp"
#include "strux/oracle.hpp"

namespace strux {

namespace {

constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

VtreeRef right_linear(VtreeBuilder& b, const std::vector<VarId>& vars,
                      std::size_t lo) {
  if (lo + 1 == vars.size()) return b.leaf(vars[lo]);
  return b.internal(b.leaf(vars[lo]), right_linear(b, vars, lo + 1));
}

// Running-count decision lattice over one block, in leaf order. A node keyed
// by (position, ones still needed, pending forced position/polarity) computes
// "exactly `need` ones among vars[k..], with vars[forced] pinned". Dead keys
// are kNullNode. Every emitted node mentions all of vars[k..], so the lattice
// is smooth; each decision is an (x ∨ x̄) split, so it is deterministic; and
// every ∧ splits leaf-first, so it respects the block's right-linear subtree.
struct Chain {
  CircuitBuilder& b;
  const std::vector<VarId>& vars;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, NodeRef> memo;

  NodeRef at(std::size_t k, std::size_t need, std::size_t forced, bool fpos) {
    std::size_t rem = vars.size() - k;
    if (need > rem) return kNullNode;
    std::size_t f = forced != kNpos && forced >= k ? forced : kNpos;
    auto key = std::make_tuple(k, need, f, f == kNpos ? 0 : int(fpos));
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    bool may1 = need >= 1 && (f != k || fpos);
    bool may0 = need + 1 <= rem && (f != k || !fpos);
    NodeRef out = kNullNode;
    if (rem == 1) {
      if (may1)
        out = b.literal(vars[k], true);
      else if (may0)
        out = b.literal(vars[k], false);
    } else {
      NodeRef e1 = kNullNode;
      NodeRef e0 = kNullNode;
      if (may1) {
        NodeRef s = at(k + 1, need - 1, f, fpos);
        if (s != kNullNode) e1 = b.conjoin(b.literal(vars[k], true), s);
      }
      if (may0) {
        NodeRef s = at(k + 1, need, f, fpos);
        if (s != kNullNode) e0 = b.conjoin(b.literal(vars[k], false), s);
      }
      if (e1 != kNullNode && e0 != kNullNode)
        out = b.disjoin({e1, e0});
      else if (e1 != kNullNode)
        out = e1;
      else if (e0 != kNullNode)
        out = e0;
    }
    memo.emplace(key, out);
    return out;
  }
};

}  // namespace

bool hwb_value(const Assignment& x) {
  const VarSet& dom = x.domain();
  if (dom.empty()) throw input_error("hwb_value: empty assignment");
  std::size_t n = dom.max();
  if (dom.min() != 1 || dom.count() != n)
    throw input_error("hwb_value: the assignment must be total over 1..n");
  std::size_t w = 0;
  for (std::size_t v = 1; v <= n; ++v)
    if (x.value(VarId(v))) ++w;
  return w != 0 && x.value(VarId(w));
}

HwbInstance build_hwb(std::size_t n) {
  if (n == 0 || n % 10 != 0)
    throw input_error("build_hwb: n must be a positive multiple of 10");
  const std::size_t left_count = 6 * n / 10;
  const std::size_t right_count = n - left_count;
  std::vector<VarId> left_vars, right_vars;
  for (std::size_t v = 1; v <= left_count; ++v) left_vars.push_back(VarId(v));
  for (std::size_t v = left_count + 1; v <= n; ++v) right_vars.push_back(VarId(v));

  HwbInstance inst;
  inst.n = n;
  VtreeBuilder tb;
  inst.vtree = tb.build(tb.internal(right_linear(tb, left_vars, 0),
                                    right_linear(tb, right_vars, 0)));

  CircuitBuilder cb;
  Chain lc{cb, left_vars, {}};
  Chain rc{cb, right_vars, {}};
  // Forced position of variable i inside its block, or kNpos for the other.
  auto lforce = [&](std::size_t i) { return i <= left_count ? i - 1 : kNpos; };
  auto rforce = [&](std::size_t i) {
    return i > left_count ? i - left_count - 1 : kNpos;
  };

  std::vector<NodeRef> dterms, bterms;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t jlo = i > right_count ? i - right_count : 0;
    std::size_t jhi = std::min(i, left_count);
    for (std::size_t j = jlo; j <= jhi; ++j) {
      NodeRef f = lc.at(0, j, lforce(i), true);
      NodeRef g = rc.at(0, i - j, rforce(i), true);
      if (f == kNullNode || g == kNullNode) continue;
      dterms.push_back(cb.conjoin(f, g));
      inst.terms.emplace_back(i, j);
    }
  }

  bterms.push_back(cb.conjoin(lc.at(0, 0, kNpos, false), rc.at(0, 0, kNpos, false)));
  inst.dbar_terms.emplace_back(0, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t jlo = k > right_count ? k - right_count : 0;
    std::size_t jhi = std::min(k, left_count);
    for (std::size_t j = jlo; j <= jhi; ++j) {
      NodeRef f = lc.at(0, j, lforce(k), false);
      NodeRef g = rc.at(0, k - j, rforce(k), false);
      if (f == kNullNode || g == kNullNode) continue;
      bterms.push_back(cb.conjoin(f, g));
      inst.dbar_terms.emplace_back(k, j);
    }
  }

  VarSet universe;
  for (std::size_t v = 1; v <= n; ++v) universe.insert(VarId(v));
  inst.d = cb.build(cb.disjoin(dterms), universe);
  inst.dbar = cb.build(cb.disjoin(bterms), universe);
  return inst;
}

std::vector<SeparationRow> separation_experiment(
    const std::vector<std::size_t>& n_values, std::size_t cap) {
  std::vector<SeparationRow> rows;
  for (std::size_t n : n_values) {
    HwbInstance inst = build_hwb(n);
    SeparationRow row;
    row.n = n;
    row.size_d = inst.d.size();
    row.size_dbar = inst.dbar.size();
    row.bound = std::uint64_t{1} << (n / 5 - 1);
    if (n <= cap) {
      std::vector<VarId> fixed;
      for (std::size_t v = 1; v <= 6 * n / 10; ++v) fixed.push_back(VarId(v));
      row.subfunctions = count_subfunctions(inst.d, fixed, cap);
    } else {
      row.note = "subfunction count skipped: " + std::to_string(n) +
                 " variables exceed the cap of " + std::to_string(cap);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string separation_csv(const std::vector<SeparationRow>& rows) {
  std::string s = "n,size_d,size_dbar,subfunctions,bound,note\n";
  for (const SeparationRow& r : rows) {
    s += std::to_string(r.n) + "," + std::to_string(r.size_d) + "," +
         std::to_string(r.size_dbar) + ",";
    if (r.note.empty()) s += std::to_string(r.subfunctions);
    s += "," + std::to_string(r.bound) + "," + r.note + "\n";
  }
  return s;
}

}  // namespace strux
