// Acceptance gate. Each numbered check prints one [PASS]/[FAIL] line; the
// process exits 0 only if every line passes. Tolerances are pinned below,
// next to the checks that use them. argv[1] is the strux CLI binary,
// argv[2] a scratch directory.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/errors.hpp"
#include "strux/hwb.hpp"
#include "strux/nnf_io.hpp"
#include "strux/oracle.hpp"
#include "strux/simulation.hpp"
#include "strux/transforms.hpp"
#include "strux/validators.hpp"
#include "strux/varset.hpp"
#include "strux/vtree.hpp"
#include "test_support.hpp"

namespace {

using namespace strux;
using namespace strux::testing;

// Pinned tolerances and budgets.
constexpr double kQuadraticConstant = 3.0;   // size(S) <= c * (|d|+|dbar|)^2
constexpr double kMaxLogLogSlope = 4.0;      // hwb size growth, consecutive n
constexpr std::size_t kMinCorpusSize = 200;  // end-to-end instances
constexpr double kCorpusBudgetSec = 300.0;   // compile + checks, whole corpus
constexpr double kHwbBudgetSec = 60.0;       // hwb(10) build + validation
constexpr std::uint64_t kMasterSeed = 20260816;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << v;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string text;
};

// ---------------------------------------------------------------------------
// Corpus generation. Every instance is a pair (d, dbar) of smooth simple
// deterministic structured d-DNNFs over one vtree, dbar the exact complement.

struct Instance {
  std::string name;
  Vtree t;
  Circuit d, dbar;
};

struct InstanceSpec {
  enum class Kind { minterm_pair, compiled_pair, special };
  Kind kind = Kind::minterm_pair;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int special = 0;
};

std::vector<InstanceSpec> corpus_plan() {
  std::vector<InstanceSpec> plan;
  std::uint64_t s = 1;
  for (std::size_t n = 4; n <= 9; ++n)
    for (int i = 0; i < 25; ++i)
      plan.push_back({InstanceSpec::Kind::minterm_pair, n, kMasterSeed + s++, 0});
  for (int i = 0; i < 5; ++i)
    plan.push_back({InstanceSpec::Kind::minterm_pair, 10, kMasterSeed + s++, 0});
  plan.push_back({InstanceSpec::Kind::minterm_pair, 11, kMasterSeed + s++, 0});
  plan.push_back({InstanceSpec::Kind::minterm_pair, 12, kMasterSeed + s++, 0});
  for (std::size_t n = 9; n <= 12; ++n)
    for (int i = 0; i < 10; ++i)
      plan.push_back({InstanceSpec::Kind::compiled_pair, n, kMasterSeed + s++, 0});
  for (int id = 0; id < 8; ++id)
    plan.push_back({InstanceSpec::Kind::special, 0, kMasterSeed + s++, id});
  return plan;
}

RandomFn nonconstant_fn(std::mt19937_64& rng, const std::vector<VarId>& vars) {
  for (;;) {
    RandomFn f = random_fn(rng, vars);
    bool any0 = false, any1 = false;
    for (char b : f.bits) (b ? any1 : any0) = true;
    if (any0 && any1) return f;
  }
}

Circuit constant_circuit(bool value, const VarSet& universe) {
  CircuitBuilder b;
  return b.build(b.constant(value), universe);
}

Instance make_special(int id, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  switch (id) {
    case 0: {
      Vtree t = balanced_vtree(var_range(1, 4));
      return {"special:false-true", t, constant_circuit(false, t.variables()),
              constant_circuit(true, t.variables())};
    }
    case 1: {
      Vtree t = balanced_vtree(var_range(1, 4));
      return {"special:true-false", t, constant_circuit(true, t.variables()),
              constant_circuit(false, t.variables())};
    }
    case 2: {
      VtreeBuilder vb;
      Vtree t = vb.build(vb.leaf(1));
      CircuitBuilder b1, b2;
      Circuit d = b1.build(b1.literal(1, true), t.variables());
      Circuit dbar = b2.build(b2.literal(1, false), t.variables());
      return {"special:single-literal", t, std::move(d), std::move(dbar)};
    }
    case 3: {
      Vtree t = balanced_vtree(var_range(1, 6));
      auto parity = [](const Assignment& a) {
        bool v = false;
        for (VarId x = 1; x <= 6; ++x) v ^= a.value(x);
        return v;
      };
      Circuit d = compile_circuit(t, parity);
      Circuit dbar = compile_circuit(t, [&](const Assignment& a) { return !parity(a); });
      return {"special:parity6", t, std::move(d), std::move(dbar)};
    }
    case 4: {
      Vtree t = right_linear_vtree(var_range(1, 7));
      auto parity = [](const Assignment& a) {
        bool v = false;
        for (VarId x = 1; x <= 7; ++x) v ^= a.value(x);
        return v;
      };
      Circuit d = compile_circuit(t, parity);
      Circuit dbar = minterm_complement(d, t);
      return {"special:parity7", t, std::move(d), std::move(dbar)};
    }
    case 5: {
      Vtree t = random_vtree(rng, var_range(1, 8));
      auto all_ones = [](const Assignment& a) {
        for (VarId x = 1; x <= 8; ++x)
          if (!a.value(x)) return false;
        return true;
      };
      Circuit d = compile_circuit(t, all_ones);
      Circuit dbar = minterm_complement(d, t);
      return {"special:conjunction8", t, std::move(d), std::move(dbar)};
    }
    case 6: {
      Vtree t = random_vtree(rng, var_range(1, 6));
      auto any_one = [](const Assignment& a) {
        for (VarId x = 1; x <= 6; ++x)
          if (a.value(x)) return true;
        return false;
      };
      Circuit d = compile_circuit(t, any_one);
      Circuit dbar = minterm_complement(d, t);
      return {"special:disjunction6", t, std::move(d), std::move(dbar)};
    }
    default: {
      HwbInstance h = build_hwb(10);
      return {"special:hwb10", std::move(h.vtree), std::move(h.d), std::move(h.dbar)};
    }
  }
}

Instance make_instance(const InstanceSpec& spec) {
  if (spec.kind == InstanceSpec::Kind::special) return make_special(spec.special, spec.seed);
  std::mt19937_64 rng(spec.seed);
  std::vector<VarId> vars = var_range(1, VarId(spec.n));
  Vtree t = random_vtree(rng, vars);
  RandomFn f = nonconstant_fn(rng, vars);
  Circuit d = compile_circuit(t, f);
  std::string tag = std::to_string(spec.n) + "v seed " + std::to_string(spec.seed);
  if (spec.kind == InstanceSpec::Kind::minterm_pair) {
    Circuit dbar = minterm_complement(d, t);
    return {"minterm:" + tag, std::move(t), std::move(d), std::move(dbar)};
  }
  Circuit dbar = compile_circuit(t, [&](const Assignment& a) { return !f(a); });
  return {"compiled:" + tag, std::move(t), std::move(d), std::move(dbar)};
}

// ---------------------------------------------------------------------------
// Word-parallel truth tables: one row bit per assignment over `vars`
// (ascending; bit k of the row index is the value of vars[k]), shell
// variables read from p. Computed for every node in one bottom-up sweep.

using Row = std::vector<std::uint64_t>;

std::size_t row_words(std::size_t width) {
  return width < 6 ? 1 : (std::size_t{1} << (width - 6));
}

std::uint64_t last_word_mask(std::size_t width) {
  return width < 6 ? (std::uint64_t{1} << (std::uint64_t{1} << width)) - 1 : ~std::uint64_t{0};
}

std::vector<Row> node_tables(const Circuit& c, const std::vector<VarId>& vars,
                             const Assignment& p) {
  const std::size_t width = vars.size();
  const std::size_t words = row_words(width);
  const std::uint64_t tail = last_word_mask(width);

  std::vector<Row> pattern(width, Row(words, 0));
  for (std::size_t k = 0; k < width; ++k) {
    if (k < 6) {
      std::uint64_t unit = 0;
      for (std::uint64_t i = 0; i < 64; ++i)
        if ((i >> k) & 1) unit |= std::uint64_t{1} << i;
      for (std::size_t j = 0; j < words; ++j) pattern[k][j] = unit;
    } else {
      for (std::size_t j = 0; j < words; ++j)
        if ((j >> (k - 6)) & 1) pattern[k][j] = ~std::uint64_t{0};
    }
    pattern[k].back() &= tail;
  }
  std::unordered_map<VarId, std::size_t> slot;
  for (std::size_t k = 0; k < width; ++k) slot[vars[k]] = k;

  std::vector<Row> table(c.size(), Row(words, 0));
  for (NodeRef n = 0; n < c.size(); ++n) {
    Row& row = table[n];
    switch (c.kind(n)) {
      case GateKind::const_false:
        break;
      case GateKind::const_true:
        for (auto& w : row) w = ~std::uint64_t{0};
        break;
      case GateKind::literal: {
        VarId x = c.var(n);
        auto it = slot.find(x);
        if (it != slot.end()) {
          row = pattern[it->second];
          if (!c.positive(n))
            for (auto& w : row) w = ~w;
        } else if (p.defines(x) && p.value(x) == c.positive(n)) {
          for (auto& w : row) w = ~std::uint64_t{0};
        }
        break;
      }
      case GateKind::and_gate: {
        for (auto& w : row) w = ~std::uint64_t{0};
        for (NodeRef k : c.children(n))
          for (std::size_t j = 0; j < words; ++j) row[j] &= table[k][j];
        break;
      }
      case GateKind::or_gate: {
        for (NodeRef k : c.children(n))
          for (std::size_t j = 0; j < words; ++j) row[j] |= table[k][j];
        break;
      }
    }
    row.back() &= tail;
  }
  return table;
}

std::uint64_t popcount_row(const Row& r) {
  std::uint64_t n = 0;
  for (std::uint64_t w : r) n += std::uint64_t(__builtin_popcountll(w));
  return n;
}

// ---------------------------------------------------------------------------
// Per-instance checks, accumulated across the corpus.

struct CorpusStats {
  std::size_t instances = 0;

  std::size_t end_to_end_failures = 0;
  double end_to_end_seconds = 0;
  std::string end_to_end_first_failure;

  double max_size_ratio = 0;
  std::size_t quadratic_violations = 0;
  std::size_t bookkeeping_violations = 0;
  std::string size_first_failure;

  std::size_t restriction_records = 0;
  std::size_t restriction_failures = 0;
  std::string restriction_first_failure;

  std::size_t certificate_circuits = 0;
  std::size_t certificate_failures = 0;
  std::string certificate_first_failure;

  std::size_t transform_circuits = 0;
  std::size_t transform_failures = 0;
  std::string transform_first_failure;
};

void note_failure(std::size_t& counter, std::string& first, const std::string& detail) {
  ++counter;
  if (first.empty()) first = detail;
}

// Disjointness of R members and the exhaustive cover by own/foreign R-plus,
// replayed from the trace by exact enumeration over vars(v).
void check_restrictions(const Instance& inst, const SimulationResult& r,
                        CorpusStats& st) {
  const Vtree& t = r.normalized_t;

  struct Group {
    std::vector<const SimKeyRecord*> records;
  };
  std::map<std::string, Group> by_restriction;
  for (const SimKeyRecord& rec : r.trace.records) {
    if (rec.kind == SimKeyRecord::Case::base) continue;
    by_restriction[rec.p.key()].records.push_back(&rec);
  }

  for (auto& [pkey, group] : by_restriction) {
    const Assignment& p = group.records.front()->p;
    VtreeRef v0 = group.records.front()->kind == SimKeyRecord::Case::and_case
                      ? group.records.front()->v_ell
                      : group.records.front()->v;
    std::vector<VarId> vars = t.vars(v0).to_vector();
    std::vector<Row> own_d = node_tables(r.d_oriented, vars, p);
    std::vector<Row> own_dbar = node_tables(r.dbar_oriented, vars, p);
    const std::uint64_t full = std::uint64_t{1} << vars.size();

    for (const SimKeyRecord* rec : group.records) {
      ++st.restriction_records;
      VtreeRef v = rec->kind == SimKeyRecord::Case::and_case ? rec->v_ell : rec->v;
      std::string where = inst.name + " key " + origin_name(rec->origin) + ":" +
                          std::to_string(rec->u);
      if (t.vars(v) != t.vars(v0)) {
        note_failure(st.restriction_failures, st.restriction_first_failure,
                     where + ": one restriction used at two vtree widths");
        continue;
      }
      const std::vector<Row>& own = rec->origin == SimOrigin::d ? own_d : own_dbar;
      const std::vector<Row>& foreign = rec->origin == SimOrigin::d ? own_dbar : own_d;

      // Every R member survives restriction, so it stays satisfiable.
      bool member_dead = false;
      for (NodeRef m : rec->own_r)
        if (popcount_row(own[m]) == 0) member_dead = true;
      if (member_dead) {
        note_failure(st.restriction_failures, st.restriction_first_failure,
                     where + ": an R member is unsatisfiable under p");
        continue;
      }

      // The maximal members (no member input) are pairwise disjoint.
      Row merged(row_words(vars.size()), 0);
      std::uint64_t ones = 0;
      for (NodeRef m : rec->own_r_plus) {
        const Row& row = own[m];
        ones += popcount_row(row);
        for (std::size_t j = 0; j < merged.size(); ++j) merged[j] |= row[j];
      }
      if (ones != popcount_row(merged)) {
        note_failure(st.restriction_failures, st.restriction_first_failure,
                     where + ": R-plus members overlap under p");
        continue;
      }

      // Own and foreign R-plus together cover every assignment exactly once.
      for (auto& w : merged) w = 0;
      ones = 0;
      member_dead = false;
      auto absorb = [&](const std::vector<Row>& side, const std::vector<NodeRef>& ms) {
        for (NodeRef m : ms) {
          const Row& row = side[m];
          std::uint64_t pop = popcount_row(row);
          if (pop == 0) member_dead = true;
          ones += pop;
          for (std::size_t j = 0; j < merged.size(); ++j) merged[j] |= row[j];
        }
      };
      absorb(own, rec->own_r_plus);
      absorb(foreign, rec->foreign_r_plus);
      if (member_dead || ones != full || popcount_row(merged) != full)
        note_failure(st.restriction_failures, st.restriction_first_failure,
                     where + ": R-plus union is not an exact cover");
    }
  }
}

// Every satisfying assignment is represented by exactly one false-free
// certificate, and the weighted certificate count equals the model count.
bool certificates_biject(const Circuit& c, std::string& detail) {
  std::vector<VarId> order = c.universe().to_vector();
  const std::size_t n = order.size();
  std::unordered_map<VarId, std::size_t> slot;
  for (std::size_t k = 0; k < n; ++k) slot[order[k]] = k;

  std::vector<std::uint32_t> hits(std::size_t{1} << n, 0);
  std::uint64_t weighted = 0;
  for (const Certificate& cert : enumerate_certificates(c)) {
    if (cert.contains_false) continue;
    std::uint64_t base = 0;
    std::vector<std::size_t> free_slots;
    VarSet decided = cert.decisions.domain();
    for (std::size_t k = 0; k < n; ++k) {
      if (decided.contains(order[k])) {
        if (cert.decisions.value(order[k])) base |= std::uint64_t{1} << k;
      } else {
        free_slots.push_back(k);
      }
    }
    weighted += std::uint64_t{1} << free_slots.size();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free_slots.size()); ++m) {
      std::uint64_t idx = base;
      for (std::size_t j = 0; j < free_slots.size(); ++j)
        if ((m >> j) & 1) idx |= std::uint64_t{1} << free_slots[j];
      ++hits[idx];
    }
  }

  TruthTable tt = truth_table(c);
  for (std::uint64_t idx = 0; idx < tt.assignment_count(); ++idx) {
    std::uint32_t want = tt.bit(idx) ? 1 : 0;
    if (hits[idx] != want) {
      detail = "assignment " + std::to_string(idx) + " represented " +
               std::to_string(hits[idx]) + "x";
      return false;
    }
  }
  if (weighted != model_count(c)) {
    detail = "weighted certificate count " + std::to_string(weighted) +
             " != model count " + std::to_string(model_count(c));
    return false;
  }
  return true;
}

// Simplify/smooth keep the function and every input property, and are
// idempotent (byte-identical on their own output).
bool transforms_hold(const Circuit& c, const Vtree& t, std::string& detail) {
  auto same_fn = [&](const Circuit& a, const Circuit& b) {
    EquivResult e = equivalent(a, b);
    return e.equivalent && !e.sampled;
  };
  auto properties = [&](const Circuit& x, bool want_smooth, const char* tag) {
    if (!check_decomposable(x).holds) { detail = std::string(tag) + ": decomposability lost"; return false; }
    if (!check_deterministic(x).holds) { detail = std::string(tag) + ": determinism lost"; return false; }
    if (!check_simple(x).holds) { detail = std::string(tag) + ": simplicity lost"; return false; }
    if (want_smooth && !check_smooth(x).holds) { detail = std::string(tag) + ": smoothness lost"; return false; }
    if (!check_respects_vtree(x, t, RespectMode::ddnnf_unoriented).holds) {
      detail = std::string(tag) + ": structure lost";
      return false;
    }
    return true;
  };

  Circuit ms = make_simple(c);
  if (!same_fn(c, ms)) { detail = "simplify changed the function"; return false; }
  if (!properties(ms, true, "simplify")) return false;
  if (serialize_circuit(make_simple(ms)) != serialize_circuit(ms)) {
    detail = "simplify is not idempotent";
    return false;
  }

  Circuit sm = smooth(c, t);
  if (!same_fn(c, sm)) { detail = "smooth changed the function"; return false; }
  if (!properties(sm, true, "smooth")) return false;
  if (serialize_circuit(smooth(sm, t)) != serialize_circuit(sm)) {
    detail = "smooth is not idempotent";
    return false;
  }
  return true;
}

void process_instance(const Instance& inst, CorpusStats& st) {
  ++st.instances;

  // End-to-end compile plus the syntactic and semantic target checks.
  Clock::time_point t0 = Clock::now();
  SimulationResult r = simulate(inst.d, inst.dbar, inst.t);
  PropertyReport sdd = check_sdd(r.s, r.t_prime());
  EquivOptions eq;
  eq.aux = r.aux_vars();
  EquivResult same = equivalent(r.s, inst.d, eq);
  st.end_to_end_seconds += seconds_since(t0);
  if (!sdd.holds)
    note_failure(st.end_to_end_failures, st.end_to_end_first_failure,
                 inst.name + ": sdd check failed (" + sdd.detail + ")");
  else if (!same.equivalent || same.sampled)
    note_failure(st.end_to_end_failures, st.end_to_end_first_failure,
                 inst.name + ": output not exhaustively equivalent to input");

  // Quadratic size in the input pair, and the node-pair bookkeeping bound.
  double total = double(inst.d.size() + inst.dbar.size());
  double ratio = double(r.s.size()) / (total * total);
  st.max_size_ratio = std::max(st.max_size_ratio, ratio);
  if (ratio > kQuadraticConstant)
    note_failure(st.quadratic_violations, st.size_first_failure,
                 inst.name + ": size ratio " + fmt(ratio));
  double pair_nodes = double(r.d_oriented.size() + r.dbar_oriented.size());
  if (double(r.s.size()) > pair_nodes * (pair_nodes + 4))
    note_failure(st.bookkeeping_violations, st.size_first_failure,
                 inst.name + ": bookkeeping bound exceeded");

  check_restrictions(inst, r, st);

  for (const Circuit* c : {&inst.d, &inst.dbar}) {
    ++st.certificate_circuits;
    std::string detail;
    if (!certificates_biject(*c, detail))
      note_failure(st.certificate_failures, st.certificate_first_failure,
                   inst.name + ": " + detail);
  }

  for (const Circuit* c : {&inst.d, &inst.dbar}) {
    ++st.transform_circuits;
    std::string detail;
    if (!transforms_hold(*c, inst.t, detail))
      note_failure(st.transform_failures, st.transform_first_failure,
                   inst.name + ": " + detail);
  }
}

// ---------------------------------------------------------------------------
// Stand-alone checks.

Outcome check_two_var_forms() {
  Vtree t = balanced_vtree({1, 2});
  for (std::uint8_t bits = 0;; ++bits) {
    TwoVarFunction f;
    f.vars = {1, 2};
    f.bits = bits;
    Circuit s = two_var_sdd(f, t, t.root());
    if (s.size() > 7)
      return {false, "function " + std::to_string(bits) + " took " +
                         std::to_string(s.size()) + " nodes"};
    if (!check_sdd(s, t).holds)
      return {false, "function " + std::to_string(bits) + " is not an sdd"};
    for (std::uint64_t row = 0; row < 4; ++row) {
      Assignment a;
      a.set(1, row & 1);
      a.set(2, (row >> 1) & 1);
      if (s.evaluate(a) != bool((bits >> row) & 1))
        return {false, "function " + std::to_string(bits) + " wrong at row " +
                           std::to_string(row)};
    }
    if (bits == 15) break;
  }
  return {true, "16/16 two-variable functions: <= 7 nodes, exact, sdd-valid"};
}

Outcome check_hwb_instance() {
  Clock::time_point t0 = Clock::now();
  HwbInstance h = build_hwb(10);

  const std::pair<const Circuit*, const char*> sides[] = {{&h.d, "d"}, {&h.dbar, "dbar"}};
  for (const auto& [c, tag] : sides) {
    if (!check_decomposable(*c).holds || !check_deterministic(*c).holds ||
        !check_smooth(*c).holds || !check_simple(*c).holds ||
        !check_respects_vtree(*c, h.vtree, RespectMode::ddnnf_unoriented).holds)
      return {false, std::string("hwb(10) ") + tag + " failed a validator"};
  }

  for (std::uint64_t m = 0; m < 1024; ++m) {
    Assignment a;
    for (VarId x = 1; x <= 10; ++x) a.set(x, (m >> (x - 1)) & 1);
    if (h.d.evaluate(a) != hwb_value(a) || h.dbar.evaluate(a) == hwb_value(a))
      return {false, "hwb(10) disagrees with the reference at row " + std::to_string(m)};
  }

  std::vector<VarId> universe = h.vtree.variables().to_vector();
  Assignment empty;
  for (const Circuit* c : {&h.d, &h.dbar}) {
    if (c->kind(c->root()) != GateKind::or_gate) return {false, "hwb(10) root is not an or"};
    std::vector<Row> tables = node_tables(*c, universe, empty);
    Row merged(tables[0].size(), 0);
    std::uint64_t ones = 0;
    for (NodeRef term : c->children(c->root())) {
      ones += popcount_row(tables[term]);
      for (std::size_t j = 0; j < merged.size(); ++j) merged[j] |= tables[term][j];
    }
    if (ones != popcount_row(merged))
      return {false, "hwb(10) terms overlap"};
  }

  double secs = seconds_since(t0);
  if (secs >= kHwbBudgetSec)
    return {false, "hwb(10) checks took " + fmt(secs) + "s (budget " +
                       fmt(kHwbBudgetSec) + "s)"};
  return {true, "hwb(10): validators, exhaustive agreement, disjoint terms (" +
                    fmt(secs) + "s, budget " + fmt(kHwbBudgetSec) + "s)"};
}

Outcome check_hwb_separation() {
  std::vector<SeparationRow> rows = separation_experiment({10, 20, 30});
  std::map<std::size_t, SeparationRow> by_n;
  for (const SeparationRow& r : rows) by_n[r.n] = r;

  if (by_n[10].subfunctions < 2 || by_n[10].bound != 2)
    return {false, "n=10 subfunction count " + std::to_string(by_n[10].subfunctions) +
                       " under bound 2"};
  if (by_n[20].subfunctions < 8 || by_n[20].bound != 8)
    return {false, "n=20 subfunction count " + std::to_string(by_n[20].subfunctions) +
                       " under bound 8"};

  double max_slope = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double dn = std::log(double(rows[i].n) / double(rows[i - 1].n));
    for (auto pick : {&SeparationRow::size_d, &SeparationRow::size_dbar}) {
      double slope = std::log(double(rows[i].*pick) / double(rows[i - 1].*pick)) / dn;
      max_slope = std::max(max_slope, slope);
    }
  }
  if (max_slope > kMaxLogLogSlope)
    return {false, "size growth slope " + fmt(max_slope) + " > " + fmt(kMaxLogLogSlope)};
  return {true, "subfunctions " + std::to_string(by_n[10].subfunctions) + " at n=10, " +
                    std::to_string(by_n[20].subfunctions) +
                    " at n=20 (bounds 2, 8); max size slope " + fmt(max_slope) +
                    " <= " + fmt(kMaxLogLogSlope)};
}

// ---------------------------------------------------------------------------
// Determinism of the shipped binary: the same seeded pipeline twice, then a
// byte compare of every artifact.

int run_command(const std::string& cmd) { return std::system(cmd.c_str()); }

Outcome check_pipeline_determinism(const std::string& cli, const std::string& work) {
  namespace fs = std::filesystem;
  auto run_pipeline = [&](const std::string& dir) -> bool {
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string pre = dir + "/hwb";
    std::string log = " >> \"" + dir + "/stdout.txt\" 2>> \"" + dir + "/stderr.txt\"";
    if (run_command("\"" + cli + "\" gen-hwb --n 10 --out-prefix \"" + pre + "\"" + log) != 0)
      return false;
    if (run_command("\"" + cli + "\" simulate --circuit \"" + pre + ".d.nnf\"" +
                    " --circuit2 \"" + pre + ".dbar.nnf\" --vtree \"" + pre + ".vtree\"" +
                    " --out \"" + dir + "/out.sdd.nnf\" --seed 7" + log) != 0)
      return false;
    if (run_command("\"" + cli + "\" separation --n 10,20 --csv \"" + dir + "/sep.csv\"" +
                    log) != 0)
      return false;
    return true;
  };

  std::string a = work + "/det_a", b = work + "/det_b";
  if (!run_pipeline(a) || !run_pipeline(b)) return {false, "a pipeline run failed"};

  const char* files[] = {"hwb.d.nnf",     "hwb.dbar.nnf",      "hwb.vtree", "out.sdd.nnf",
                         "out.sdd.vtree", "out.sdd.trace.json", "sep.csv"};
  for (const char* f : files) {
    if (read_file(a + "/" + f) != read_file(b + "/" + f))
      return {false, std::string(f) + " differs across same-seed runs"};
  }
  return {true, "7/7 artifacts byte-identical across same-seed pipeline runs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <strux-cli> <work-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string work = argv[2];
  std::filesystem::create_directories(work);

  std::vector<InstanceSpec> plan = corpus_plan();
  CorpusStats st;
  std::string corpus_error;
  try {
    for (const InstanceSpec& spec : plan) process_instance(make_instance(spec), st);
  } catch (const std::exception& e) {
    corpus_error = e.what();
  }

  std::vector<Outcome> lines(9);
  std::string n = std::to_string(st.instances);

  if (!corpus_error.empty()) {
    for (int i : {0, 1, 2, 3, 7})
      lines[i] = {false, "corpus aborted after " + n + " instances: " + corpus_error};
  } else {
    bool c1 = st.instances >= kMinCorpusSize && st.end_to_end_failures == 0 &&
              st.end_to_end_seconds < kCorpusBudgetSec;
    lines[0] = {c1, c1 ? n + " instances compiled to valid sdds, equivalent modulo aux (" +
                             fmt(st.end_to_end_seconds) + "s, budget " +
                             fmt(kCorpusBudgetSec) + "s)"
                       : st.end_to_end_failures
                             ? std::to_string(st.end_to_end_failures) + "/" + n +
                                   " failures; first: " + st.end_to_end_first_failure
                             : st.instances < kMinCorpusSize
                                   ? "corpus too small: " + n
                                   : "over time budget: " + fmt(st.end_to_end_seconds) + "s"};

    bool c2 = st.quadratic_violations == 0 && st.bookkeeping_violations == 0;
    lines[1] = {c2, c2 ? "max size(S)/(|d|+|dbar|)^2 = " + fmt(st.max_size_ratio) +
                             " <= " + fmt(kQuadraticConstant) +
                             "; node-pair bookkeeping bound held on " + n + "/" + n
                       : "size bound broken; first: " + st.size_first_failure};

    bool c3 = st.restriction_failures == 0 && st.restriction_records > 0;
    lines[2] = {c3, c3 ? std::to_string(st.restriction_records) +
                             " shell restrictions replayed exhaustively: R disjoint, "
                             "R-plus union an exact cover"
                       : std::to_string(st.restriction_failures) + "/" +
                             std::to_string(st.restriction_records) +
                             " failures; first: " + st.restriction_first_failure};

    bool c4 = st.certificate_failures == 0;
    lines[3] = {c4, c4 ? "false-free certificates biject with satisfying assignments on " +
                             std::to_string(st.certificate_circuits) + "/" +
                             std::to_string(st.certificate_circuits) +
                             " circuits, counts match model counts"
                       : std::to_string(st.certificate_failures) +
                             " circuits failed; first: " + st.certificate_first_failure};

    bool c8 = st.transform_failures == 0;
    lines[7] = {c8, c8 ? "simplify/smooth preserve function and properties, idempotent on " +
                             std::to_string(st.transform_circuits) + "/" +
                             std::to_string(st.transform_circuits) + " circuits"
                       : std::to_string(st.transform_failures) +
                             " circuits failed; first: " + st.transform_first_failure};
  }

  auto guarded = [](Outcome (*fn)()) -> Outcome {
    try {
      return fn();
    } catch (const std::exception& e) {
      return {false, std::string("threw: ") + e.what()};
    }
  };
  lines[4] = guarded(check_two_var_forms);
  lines[5] = guarded(check_hwb_instance);
  lines[6] = guarded(check_hwb_separation);
  try {
    lines[8] = check_pipeline_determinism(cli, work);
  } catch (const std::exception& e) {
    lines[8] = {false, std::string("threw: ") + e.what()};
  }

  static const char* kNames[] = {
      "end-to-end corpus",    "quadratic size",      "shell restrictions",
      "certificate bijection", "two-variable forms",  "hwb instance",
      "hwb separation",       "transform integrity", "pipeline determinism",
  };
  bool all = true;
  for (int i = 0; i < 9; ++i) {
    all = all && lines[i].pass;
    std::cout << (lines[i].pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << kNames[i]
              << ": " << lines[i].text << "\n";
  }
  std::cout << (all ? "acceptance: PASS\n" : "acceptance: FAIL\n");
  return all ? 0 : 1;
}
