#include <vector>

#include "doctest.h"
#include "strux/oracle.hpp"
#include "strux/validators.hpp"
#include "test_support.hpp"

using namespace strux;
using namespace strux::testing;

namespace {

VarSet universe_of(std::initializer_list<VarId> vs) {
  VarSet u;
  for (VarId v : vs) u.insert(v);
  return u;
}

}  // namespace

TEST_CASE("truth_table matches the generating function bit for bit") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 6; ++round) {
    std::vector<VarId> vars = var_range(1, 4 + round % 3);
    Vtree t = random_vtree(rng, vars);
    RandomFn f = random_fn(rng, vars);
    Circuit c = compile_circuit(t, f);
    TruthTable tt = truth_table(c);
    REQUIRE(tt.order == f.order);
    REQUIRE(tt.assignment_count() == (std::uint64_t{1} << vars.size()));
    for (std::uint64_t i = 0; i < tt.assignment_count(); ++i)
      CHECK(tt.bit(i) == (f.bits[i] != 0));
  }
}

TEST_CASE("truth_table of a subcircuit node over an enclosing variable list") {
  CircuitBuilder b;
  NodeRef x2 = b.literal(2, true);
  NodeRef n = b.conjoin(b.literal(1, true), x2);
  CircuitBuilder::BuildResult br = b.build_mapped(n, universe_of({1, 2, 3}));
  // x2 as a function of all three variables: true on half the rows.
  TruthTable tt = truth_table(br.circuit, br.from_builder[x2], {1, 2, 3});
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < tt.assignment_count(); ++i) ones += tt.bit(i);
  CHECK(ones == 4);
  CHECK(tt.bit(0b010));
  CHECK_FALSE(tt.bit(0b101));

  CHECK_THROWS_AS(truth_table(br.circuit, br.circuit.root(), {1, 2, 3}, /*cap=*/2), input_error);
  // The list must cover the node's variables.
  CHECK_THROWS_AS(truth_table(br.circuit, br.circuit.root(), {1}), input_error);
}

TEST_CASE("model_count agrees with the table and scales with extra variables") {
  std::mt19937_64 rng(22);
  for (int round = 0; round < 6; ++round) {
    std::vector<VarId> vars = var_range(1, 5);
    Vtree t = random_vtree(rng, vars);
    RandomFn f = random_fn(rng, vars);
    Circuit c = compile_circuit(t, f);
    std::uint64_t by_hand = 0;
    for (char bit : f.bits) by_hand += bit != 0;
    CHECK(model_count(c) == by_hand);
    CHECK(model_count(c, var_range(1, 6)) == 2 * by_hand);  // one don't-care appended
  }
  CircuitBuilder b;
  Circuit c = b.build(b.constant(true), universe_of({1, 2, 3}));
  CHECK(model_count(c) == 8);
  CHECK_THROWS_AS(model_count(c, var_range(1, 30), /*cap=*/22), input_error);
}

TEST_CASE("equivalent: exhaustive verdicts with counterexamples") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 5; ++round) {
    std::vector<VarId> vars = var_range(1, 6);
    RandomFn f = random_fn(rng, vars);
    // One function, two circuit shapes.
    Circuit c1 = compile_circuit(random_vtree(rng, vars), f);
    Circuit c2 = compile_circuit(random_vtree(rng, vars), f);
    EquivResult r = equivalent(c1, c2);
    CHECK(r.equivalent);
    CHECK_FALSE(r.sampled);

    RandomFn g = random_fn(rng, vars);
    Circuit c3 = compile_circuit(balanced_vtree(vars), g);
    EquivResult r2 = equivalent(c1, c3);
    bool same = f.bits == g.bits;
    CHECK(r2.equivalent == same);
    if (!same) {
      REQUIRE(r2.counterexample.has_value());
      CHECK(c1.evaluate(*r2.counterexample) != c3.evaluate(*r2.counterexample));
    }
  }
}

TEST_CASE("equivalent: universes may differ by irrelevant variables") {
  CircuitBuilder b1, b2;
  NodeRef n1 = b1.conjoin(b1.literal(1, true), b1.literal(2, true));
  NodeRef n2 = b2.conjoin(b2.literal(1, true), b2.literal(2, true));
  Circuit c1 = b1.build(n1, universe_of({1, 2}));
  Circuit c2 = b2.build(n2, universe_of({1, 2, 3}));  // 3 never mentioned
  CHECK(equivalent(c1, c2).equivalent);
}

TEST_CASE("equivalent: auxiliary variables are toggled as a block") {
  CircuitBuilder b1, b2, b3;
  Circuit plain = b1.build(b1.literal(1, true), universe_of({1}));

  // x1 conjoined with a don't-care gadget on the auxiliary: equal under any
  // block value.
  NodeRef gadget = b2.disjoin({b2.literal(9, true), b2.literal(9, false)});
  Circuit padded = b2.build(b2.conjoin(b2.literal(1, true), gadget), universe_of({1, 9}));
  VarSet aux;
  aux.insert(9);
  EquivOptions opts;
  opts.aux = aux;
  CHECK(equivalent(plain, padded, opts).equivalent);

  // x1 and x9: collapses to x1 only when the block is all-1.
  Circuit tied = b3.build(b3.conjoin(b3.literal(1, true), b3.literal(9, true)),
                          universe_of({1, 9}));
  EquivResult r = equivalent(plain, tied, opts);
  CHECK_FALSE(r.equivalent);
}

TEST_CASE("equivalent: sampling tier is labeled") {
  std::mt19937_64 rng(24);
  std::vector<VarId> vars = var_range(1, 6);
  RandomFn f = random_fn(rng, vars);
  Circuit c1 = compile_circuit(random_vtree(rng, vars), f);
  Circuit c2 = compile_circuit(random_vtree(rng, vars), f);
  EquivOptions opts;
  opts.cap = 3;  // below the 6 enumerated variables
  opts.samples = 512;
  EquivResult r = equivalent(c1, c2, opts);
  CHECK(r.equivalent);
  CHECK(r.sampled);

  // Sampling still finds a gross difference.
  CircuitBuilder b;
  Circuit top = b.build(b.constant(true), c1.universe());
  EquivResult r2 = equivalent(c1, top, opts);
  if (model_count(c1) < 63) {  // random f is almost surely not near-tautological
    CHECK_FALSE(r2.equivalent);
    CHECK(r2.counterexample.has_value());
  }
}

TEST_CASE("count_subfunctions on pinned examples") {
  {
    CircuitBuilder b;
    Circuit c = b.build(b.conjoin(b.literal(1, true), b.literal(2, true)), universe_of({1, 2}));
    CHECK(count_subfunctions(c, {1}) == 2);  // bottom and x2
    CHECK(count_subfunctions(c, {2}) == 2);
    CHECK(count_subfunctions(c, {1, 2}) == 2);  // the two constants
  }
  {
    CircuitBuilder b;
    Circuit c = b.build(b.literal(1, true), universe_of({1, 2}));
    CHECK(count_subfunctions(c, {2}) == 1);  // x2 never matters
  }
  {
    std::mt19937_64 rng(25);
    std::vector<VarId> vars = var_range(1, 4);
    // xor of all four variables: every fixing of {1,2} leaves xor or xnor.
    Circuit c = compile_circuit(balanced_vtree(vars), [](const Assignment& a) {
      return (a.value(1) ^ a.value(2) ^ a.value(3) ^ a.value(4)) != 0;
    });
    CHECK(count_subfunctions(c, {1, 2}) == 2);
  }
  {
    CircuitBuilder b;
    Circuit c = b.build(b.literal(1, true), universe_of({1}));
    CHECK_THROWS_AS(count_subfunctions(c, {1}, /*cap=*/0), input_error);
  }
}

TEST_CASE("minterm_complement computes the negation with pipeline-grade shape") {
  std::mt19937_64 rng(26);
  for (int round = 0; round < 4; ++round) {
    std::vector<VarId> vars = var_range(1, 4 + round % 2);
    Vtree t = random_vtree(rng, vars);
    RandomFn f = random_fn(rng, vars);
    Circuit c = compile_circuit(t, f);
    Circuit mc = minterm_complement(c, t);
    CHECK(mc.universe() == t.variables());
    for_all_assignments(vars, [&](const Assignment& a) {
      CHECK(mc.evaluate(a) == !c.evaluate(a));
    });
    CHECK(check_decomposable(mc).holds);
    CHECK(check_deterministic(mc).holds);
    CHECK(check_smooth(mc).holds);
    CHECK(check_simple(mc).holds);
    CHECK(check_respects_vtree(mc, t, RespectMode::sdd_oriented).holds);
  }

  Vtree t = balanced_vtree(var_range(1, 3));
  {
    CircuitBuilder b;
    Circuit top = b.build(b.constant(true), t.variables());
    Circuit mc = minterm_complement(top, t);
    CHECK(mc.kind(mc.root()) == GateKind::const_false);
  }
  {
    CircuitBuilder b;
    Circuit bot = b.build(b.constant(false), t.variables());
    Circuit mc = minterm_complement(bot, t);
    CHECK(mc.kind(mc.root()) == GateKind::const_true);
  }
  {
    CircuitBuilder b;
    Circuit one = b.build(b.literal(1, true), t.variables());
    CHECK_THROWS_AS(minterm_complement(one, t, /*cap=*/2), input_error);
  }
}
