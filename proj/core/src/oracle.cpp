#include "strux/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "bit_eval.hpp"
#include "strux/errors.hpp"

namespace strux {

namespace {

void require_order(const std::vector<VarId>& over, const VarSet& needed, std::size_t cap,
                   const char* what) {
  if (over.size() > cap) {
    throw input_error(std::string(what) + ": " + std::to_string(over.size()) +
                      " variables exceed the cap of " + std::to_string(cap));
  }
  VarSet seen;
  for (VarId v : over) {
    if (v == kNoVar) throw input_error(std::string(what) + ": variable ids start at 1");
    if (seen.contains(v)) throw input_error(std::string(what) + ": duplicate variable in order");
    seen.insert(v);
  }
  if (!needed.subset_of(seen)) {
    throw input_error(std::string(what) + ": order does not cover the circuit's variables");
  }
}

}  // namespace

TruthTable truth_table(const Circuit& c, NodeRef node, const std::vector<VarId>& over,
                       std::size_t cap) {
  require_order(over, c.vars(node), cap, "truth_table");
  detail::BitEval ev(c, over, node);
  TruthTable t;
  t.order = over;
  t.bits.assign(static_cast<std::size_t>(ev.block_count()), 0);
  std::vector<std::uint64_t> vals;
  for (std::uint64_t b = 0; b < ev.block_count(); ++b) {
    ev.eval_block(b, Assignment{}, vals);
    t.bits[b] = vals[ev.top()] & ev.valid_mask();
  }
  return t;
}

TruthTable truth_table(const Circuit& c, std::size_t cap) {
  return truth_table(c, c.root(), c.universe().to_vector(), cap);
}

std::uint64_t model_count(const Circuit& c, const std::vector<VarId>& over, std::size_t cap) {
  require_order(over, c.vars(c.root()), cap, "model_count");
  detail::BitEval ev(c, over);
  std::vector<std::uint64_t> vals;
  std::uint64_t count = 0;
  for (std::uint64_t b = 0; b < ev.block_count(); ++b) {
    ev.eval_block(b, Assignment{}, vals);
    count += static_cast<std::uint64_t>(std::popcount(vals[ev.top()] & ev.valid_mask()));
  }
  return count;
}

std::uint64_t model_count(const Circuit& c, std::size_t cap) {
  return model_count(c, c.universe().to_vector(), cap);
}

EquivResult equivalent(const Circuit& a, const Circuit& b, const EquivOptions& opts) {
  VarSet all = a.universe();
  all |= b.universe();
  VarSet aux = opts.aux;
  aux &= all;
  VarSet plain = all;
  plain -= aux;
  std::vector<VarId> vars = plain.to_vector();
  std::vector<VarId> auxv = aux.to_vector();

  EquivResult res;
  res.equivalent = true;

  auto compare_fixed = [&](const std::vector<VarId>& order, const Assignment& fixed) {
    detail::BitEval ea(a, order), eb(b, order);
    std::vector<std::uint64_t> va, vb;
    for (std::uint64_t blk = 0; blk < ea.block_count(); ++blk) {
      ea.eval_block(blk, fixed, va);
      eb.eval_block(blk, fixed, vb);
      std::uint64_t diff = (va[ea.top()] ^ vb[eb.top()]) & ea.valid_mask();
      if (diff) {
        res.equivalent = false;
        Assignment w = ea.decode(blk, static_cast<unsigned>(std::countr_zero(diff)));
        for (VarId v : auxv)
          if (fixed.defines(v)) w.set(v, fixed.value(v));
        res.counterexample = std::move(w);
        return;
      }
    }
  };

  if (vars.size() + auxv.size() <= opts.cap) {
    std::vector<VarId> order = vars;
    order.insert(order.end(), auxv.begin(), auxv.end());
    std::sort(order.begin(), order.end());
    compare_fixed(order, Assignment{});
    return res;
  }

  Assignment fill0, fill1;
  for (VarId v : auxv) {
    fill0.set(v, false);
    fill1.set(v, true);
  }
  if (vars.size() <= opts.cap) {
    compare_fixed(vars, fill0);
    if (res.equivalent) compare_fixed(vars, fill1);
    return res;
  }

  res.sampled = true;
  std::mt19937_64 rng(opts.seed);
  detail::BitEval ea(a, vars), eb(b, vars);
  std::vector<std::uint64_t> va, vb, words_a;
  std::uint64_t blocks = (opts.samples + 127) / 128 + 1;
  for (const Assignment* fixed : {&fill0, &fill1}) {
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
      ea.eval_random_block(rng, *fixed, va, words_a);
      eb.eval_block_with_words(words_a, *fixed, vb);
      std::uint64_t diff = va[ea.top()] ^ vb[eb.top()];
      if (diff) {
        res.equivalent = false;
        Assignment w = ea.decode_random(words_a, static_cast<unsigned>(std::countr_zero(diff)));
        for (VarId v : auxv)
          if (fixed->defines(v)) w.set(v, fixed->value(v));
        res.counterexample = std::move(w);
        return res;
      }
    }
  }
  return res;
}

std::uint64_t count_subfunctions(const Circuit& c, const std::vector<VarId>& fixed,
                                 std::size_t cap) {
  std::vector<VarId> vars = c.universe().to_vector();
  VarSet fixedset;
  for (VarId v : fixed) {
    if (!c.universe().contains(v))
      throw input_error("count_subfunctions: fixed variable " + std::to_string(v) +
                        " is not in the circuit's universe");
    fixedset.insert(v);
  }
  std::vector<VarId> free;
  for (VarId v : vars)
    if (!fixedset.contains(v)) free.push_back(v);
  std::vector<VarId> order = free;
  for (VarId v : fixedset.to_vector()) order.push_back(v);
  if (order.size() > cap)
    throw input_error("count_subfunctions: " + std::to_string(order.size()) +
                      " variables exceed the cap of " + std::to_string(cap));

  TruthTable t = truth_table(c, c.root(), order, cap);
  std::size_t fbits = free.size();
  std::uint64_t fsize = std::uint64_t{1} << fbits;
  std::uint64_t blocks = std::uint64_t{1} << (order.size() - fbits);
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::uint64_t> residual((fsize + 63) / 64);
  for (std::uint64_t fi = 0; fi < blocks; ++fi) {
    std::fill(residual.begin(), residual.end(), 0);
    for (std::uint64_t i = 0; i < fsize; ++i) {
      if (t.bit((fi << fbits) | i)) residual[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    seen.insert(residual);
  }
  return seen.size();
}

Circuit minterm_complement(const Circuit& c, const Vtree& t, std::size_t cap) {
  std::vector<VarId> over = t.variables().to_vector();
  if (!c.universe().subset_of(t.variables()))
    throw input_error("minterm_complement: circuit universe must lie inside the vtree");
  if (over.size() > cap)
    throw input_error("minterm_complement: " + std::to_string(over.size()) +
                      " variables exceed the cap of " + std::to_string(cap));
  TruthTable tab = truth_table(c, c.root(), over, cap);
  std::vector<int> pos(static_cast<std::size_t>(t.variables().max()) + 1, -1);
  for (std::size_t k = 0; k < over.size(); ++k) pos[over[k]] = static_cast<int>(k);

  CircuitBuilder b;
  auto minterm = [&](auto&& self, VtreeRef v, std::uint64_t idx) -> NodeRef {
    if (t.is_leaf(v)) {
      VarId var = t.var(v);
      return b.literal(var, (idx >> pos[var]) & 1);
    }
    return b.conjoin(self(self, t.left(v), idx), self(self, t.right(v), idx));
  };

  std::vector<NodeRef> terms;
  for (std::uint64_t i = 0; i < tab.assignment_count(); ++i) {
    if (!tab.bit(i)) terms.push_back(minterm(minterm, t.root(), i));
  }
  NodeRef root = terms.empty() ? b.constant(false)
                 : terms.size() == tab.assignment_count() ? b.constant(true)
                 : terms.size() == 1                      ? terms.front()
                                                          : b.disjoin(terms);
  return b.build(root, t.variables());
}

}  // namespace strux
