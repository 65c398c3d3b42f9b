#include "strux/cli.hpp"

#include <charconv>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "strux/circuit.hpp"
#include "strux/errors.hpp"
#include "strux/hwb.hpp"
#include "strux/nnf_io.hpp"
#include "strux/oracle.hpp"
#include "strux/simulation.hpp"
#include "strux/transforms.hpp"
#include "strux/validators.hpp"
#include "strux/vtree.hpp"

namespace strux {

namespace {

using nlohmann::json;

std::uint64_t parse_num(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw input_error(what + ": expected a number, got '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    if (end == s.size()) break;
    start = end + 1;
  }
  return out;
}

// "3=1,7=0"
Assignment parse_assignment(const std::string& s) {
  Assignment a;
  for (const std::string& item : split_list(s)) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw input_error("--assign: expected var=bit, got '" + item + "'");
    std::uint64_t var = parse_num(item.substr(0, eq), "--assign");
    std::string bit = item.substr(eq + 1);
    if (var == 0 || (bit != "0" && bit != "1"))
      throw input_error("--assign: expected var=bit with bit 0 or 1, got '" + item + "'");
    a.set(VarId(var), bit == "1");
  }
  return a;
}

// "1,2,5-9"
std::vector<VarId> parse_var_list(const std::string& s, const std::string& flag) {
  std::vector<VarId> out;
  for (const std::string& item : split_list(s)) {
    std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      std::uint64_t v = parse_num(item, flag);
      if (v == 0) throw input_error(flag + ": variable ids start at 1");
      out.push_back(VarId(v));
    } else {
      std::uint64_t lo = parse_num(item.substr(0, dash), flag);
      std::uint64_t hi = parse_num(item.substr(dash + 1), flag);
      if (lo == 0 || hi < lo)
        throw input_error(flag + ": bad range '" + item + "'");
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(VarId(v));
    }
  }
  return out;
}

std::string with_extension(const std::string& path, const char* ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

Circuit load_circuit(const std::string& path) { return parse_circuit(read_file(path)); }
Vtree load_vtree(const std::string& path) { return parse_vtree(read_file(path)); }

struct Args {
  std::string circuit, circuit2, vtree, out, props, assign, fixed_set;
  std::string out_prefix, csv, n_list;
  std::size_t cap = 0;
  std::uint64_t seed = 1;
  std::uint64_t n = 0;
  bool json_mode = false;
  bool modulo_aux = false;
};

PropertyReport run_prop(const std::string& name, const Circuit& c,
                        const std::optional<Vtree>& t, std::size_t cap,
                        std::uint64_t seed) {
  if (name == "decomposable") return check_decomposable(c);
  if (name == "deterministic") return check_deterministic(c, cap, seed);
  if (name == "smooth") return check_smooth(c);
  if (name == "simple") return check_simple(c);
  if (name == "respects-vtree" || name == "sdd") {
    if (!t)
      throw input_error("property '" + name + "' needs --vtree");
    return name == "sdd" ? check_sdd(c, *t, cap, seed)
                         : check_respects_vtree(c, *t, RespectMode::ddnnf_unoriented);
  }
  throw input_error(
      "unknown property '" + name +
      "' (known: decomposable, deterministic, smooth, simple, respects-vtree, sdd)");
}

int run_validate(const Args& a, std::ostream& out) {
  Circuit c = load_circuit(a.circuit);
  std::optional<Vtree> t;
  if (!a.vtree.empty()) t = load_vtree(a.vtree);
  std::vector<std::string> names = split_list(a.props);
  if (names.empty()) {
    names = {"decomposable", "deterministic", "smooth", "simple"};
    if (t) names.push_back("respects-vtree");
  }
  bool all_ok = true;
  json props = json::array();
  for (const std::string& name : names) {
    PropertyReport r = run_prop(name, c, t, a.cap, a.seed);
    all_ok = all_ok && r.holds;
    if (a.json_mode) {
      json e{{"property", name}, {"holds", r.holds}, {"sampled", r.sampled}};
      if (!r.detail.empty()) e["detail"] = r.detail;
      if (!r.witness_gates.empty()) e["witness_gates"] = r.witness_gates;
      if (r.witness_assignment)
        e["witness_assignment"] = r.witness_assignment->to_string();
      props.push_back(std::move(e));
    } else {
      out << name << ": " << (r.holds ? "ok" : "FAIL");
      if (r.holds && r.sampled) out << " (sampled)";
      if (!r.holds && !r.detail.empty()) out << ": " << r.detail;
      if (!r.holds && r.witness_assignment)
        out << " at " << r.witness_assignment->to_string();
      out << "\n";
    }
  }
  if (a.json_mode)
    out << json{{"command", "validate"}, {"ok", all_ok}, {"properties", props}}.dump(2)
        << "\n";
  return all_ok ? 0 : 1;
}

int run_simplify(const Args& a, std::ostream& out) {
  Circuit c = load_circuit(a.circuit);
  Circuit s = make_simple(c);
  write_file_atomic(a.out, serialize_circuit(s));
  if (a.json_mode)
    out << json{{"command", "simplify"},
                {"ok", true},
                {"input_size", c.size()},
                {"output_size", s.size()},
                {"out", a.out}}
               .dump(2)
        << "\n";
  else
    out << "simplified: " << c.size() << " -> " << s.size() << " nodes, wrote "
        << a.out << "\n";
  return 0;
}

int run_smooth(const Args& a, std::ostream& out) {
  Circuit c = load_circuit(a.circuit);
  Vtree t = load_vtree(a.vtree);
  Circuit s = smooth(c, t);
  write_file_atomic(a.out, serialize_circuit(s));
  if (a.json_mode)
    out << json{{"command", "smooth"},
                {"ok", true},
                {"input_size", c.size()},
                {"output_size", s.size()},
                {"out", a.out}}
               .dump(2)
        << "\n";
  else
    out << "smoothed: " << c.size() << " -> " << s.size() << " nodes, wrote "
        << a.out << "\n";
  return 0;
}

int run_restrict(const Args& a, std::ostream& out) {
  Circuit c = load_circuit(a.circuit);
  Vtree t = load_vtree(a.vtree);
  Assignment p = parse_assignment(a.assign);
  RestrictResult r = restrict(c, t, p);
  std::string vtree_out = with_extension(a.out, ".vtree");
  write_file_atomic(a.out, serialize_circuit(r.circuit));
  write_file_atomic(vtree_out, serialize_vtree(r.pruned.tree));
  if (a.json_mode)
    out << json{{"command", "restrict"},
                {"ok", true},
                {"input_size", c.size()},
                {"output_size", r.circuit.size()},
                {"out", a.out},
                {"vtree_out", vtree_out}}
               .dump(2)
        << "\n";
  else
    out << "restricted: " << c.size() << " -> " << r.circuit.size()
        << " nodes, wrote " << a.out << " and " << vtree_out << "\n";
  return 0;
}

int run_simulate(const Args& a, std::ostream& out) {
  Circuit d = load_circuit(a.circuit);
  Circuit dbar = load_circuit(a.circuit2);
  Vtree t = load_vtree(a.vtree);
  SimulateOptions opt;
  opt.complement_cap = a.cap;
  opt.seed = a.seed;
  SimulationResult r = simulate(d, dbar, t, opt);
  std::string vtree_out = with_extension(a.out, ".vtree");
  std::string trace_out = with_extension(a.out, ".trace.json");
  write_file_atomic(a.out, serialize_circuit(r.s));
  write_file_atomic(vtree_out, serialize_vtree(r.t_prime()));
  write_file_atomic(trace_out, serialize_trace(r));
  if (a.json_mode)
    out << json{{"command", "simulate"},
                {"ok", true},
                {"input_sizes", {d.size(), dbar.size()}},
                {"output_size", r.s.size()},
                {"aux_count", r.modification.aux_vars.size()},
                {"keys", r.trace.records.size()},
                {"complement_sampled", r.complement_sampled},
                {"out", a.out},
                {"vtree_out", vtree_out},
                {"trace_out", trace_out}}
               .dump(2)
        << "\n";
  else
    out << "simulated: inputs " << d.size() << " + " << dbar.size()
        << " nodes -> " << r.s.size() << " nodes, "
        << r.modification.aux_vars.size() << " auxiliary variables, "
        << r.trace.records.size() << " keys; wrote " << a.out << ", "
        << vtree_out << ", " << trace_out << "\n";
  return 0;
}

int run_count(const Args& a, std::ostream& out) {
  Circuit c = load_circuit(a.circuit);
  std::uint64_t models = model_count(c, a.cap);
  std::size_t vars = c.universe().count();
  if (a.json_mode)
    out << json{{"command", "count"},
                {"ok", true},
                {"models", models},
                {"variables", vars}}
               .dump(2)
        << "\n";
  else
    out << "models: " << models << " of 2^" << vars << "\n";
  return 0;
}

int run_equiv(const Args& a, std::ostream& out) {
  Circuit c1 = load_circuit(a.circuit);
  Circuit c2 = load_circuit(a.circuit2);
  EquivOptions opt;
  opt.cap = a.cap;
  opt.seed = a.seed;
  if (a.modulo_aux) {
    if (!a.vtree.empty()) {
      opt.aux = load_vtree(a.vtree).aux_vars();
    } else {
      // Without a vtree to name them, the auxiliaries are the variables the
      // two universes do not share.
      opt.aux = (c1.universe() | c2.universe()) - (c1.universe() & c2.universe());
    }
  }
  EquivResult r = equivalent(c1, c2, opt);
  if (a.json_mode) {
    json e{{"command", "equiv"},
           {"ok", r.equivalent},
           {"equivalent", r.equivalent},
           {"sampled", r.sampled}};
    if (r.counterexample) e["counterexample"] = r.counterexample->to_string();
    out << e.dump(2) << "\n";
  } else {
    if (r.equivalent)
      out << "equivalent" << (r.sampled ? " (sampled)" : "") << "\n";
    else
      out << "NOT equivalent"
          << (r.counterexample ? ": differ at " + r.counterexample->to_string()
                               : std::string())
          << "\n";
  }
  return r.equivalent ? 0 : 1;
}

int run_subfuncs(const Args& a, std::ostream& out) {
  Circuit c = load_circuit(a.circuit);
  std::vector<VarId> fixed = parse_var_list(a.fixed_set, "--fixed-set");
  std::uint64_t n = count_subfunctions(c, fixed, a.cap);
  if (a.json_mode)
    out << json{{"command", "subfuncs"},
                {"ok", true},
                {"count", n},
                {"fixed", fixed}}
               .dump(2)
        << "\n";
  else
    out << "subfunctions: " << n << " (over " << fixed.size()
        << " fixed variables)\n";
  return 0;
}

int run_gen_hwb(const Args& a, std::ostream& out) {
  HwbInstance inst = build_hwb(a.n);
  std::string d_path = a.out_prefix + ".d.nnf";
  std::string dbar_path = a.out_prefix + ".dbar.nnf";
  std::string vtree_path = a.out_prefix + ".vtree";
  write_file_atomic(d_path, serialize_circuit(inst.d));
  write_file_atomic(dbar_path, serialize_circuit(inst.dbar));
  write_file_atomic(vtree_path, serialize_vtree(inst.vtree));
  if (a.json_mode)
    out << json{{"command", "gen-hwb"},
                {"ok", true},
                {"n", inst.n},
                {"size_d", inst.d.size()},
                {"size_dbar", inst.dbar.size()},
                {"terms", inst.terms.size()},
                {"dbar_terms", inst.dbar_terms.size()},
                {"files", {d_path, dbar_path, vtree_path}}}
               .dump(2)
        << "\n";
  else
    out << "hwb n=" << inst.n << ": d " << inst.d.size() << " nodes ("
        << inst.terms.size() << " terms), dbar " << inst.dbar.size()
        << " nodes (" << inst.dbar_terms.size() << " terms); wrote " << d_path
        << ", " << dbar_path << ", " << vtree_path << "\n";
  return 0;
}

int run_separation(const Args& a, std::ostream& out) {
  std::vector<std::size_t> ns;
  for (const std::string& item : split_list(a.n_list))
    ns.push_back(std::size_t(parse_num(item, "--n")));
  if (ns.empty()) throw input_error("--n: expected a comma-separated list");
  std::vector<SeparationRow> rows = separation_experiment(ns, a.cap);
  std::string csv = separation_csv(rows);
  if (!a.csv.empty()) write_file_atomic(a.csv, csv);
  if (a.json_mode) {
    json jrows = json::array();
    for (const SeparationRow& r : rows) {
      json e{{"n", r.n},
             {"size_d", r.size_d},
             {"size_dbar", r.size_dbar},
             {"bound", r.bound}};
      if (r.note.empty())
        e["subfunctions"] = r.subfunctions;
      else
        e["note"] = r.note;
      jrows.push_back(std::move(e));
    }
    json e{{"command", "separation"}, {"ok", true}, {"rows", jrows}};
    if (!a.csv.empty()) e["csv"] = a.csv;
    out << e.dump(2) << "\n";
  } else {
    out << csv;
    if (!a.csv.empty()) out << "wrote " << a.csv << "\n";
  }
  return 0;
}

int run_stats(const Args& a, std::ostream& out) {
  Circuit c = load_circuit(a.circuit);
  std::size_t n_and = 0, n_or = 0, n_lit = 0, n_const = 0;
  for (NodeRef n = 0; n < c.size(); ++n) {
    switch (c.kind(n)) {
      case GateKind::and_gate: ++n_and; break;
      case GateKind::or_gate: ++n_or; break;
      case GateKind::literal: ++n_lit; break;
      default: ++n_const; break;
    }
  }
  json vt;
  std::string vtext;
  if (!a.vtree.empty()) {
    Vtree t = load_vtree(a.vtree);
    vt = json{{"nodes", t.size()},
              {"variables", t.variables().count()},
              {"aux", t.aux_vars().count()},
              {"normalized", !t.has_stubs() && is_normalized(t)},
              {"stubs", t.has_stubs()}};
    vtext = "vtree: " + std::to_string(t.size()) + " nodes, " +
            std::to_string(t.variables().count()) + " variables, " +
            std::to_string(t.aux_vars().count()) + " aux" +
            (t.has_stubs() ? ", has stubs" : "") +
            (!t.has_stubs() && is_normalized(t) ? ", normalized" : "") + "\n";
  }
  if (a.json_mode) {
    json e{{"command", "stats"},
           {"ok", true},
           {"nodes", c.size()},
           {"edges", c.edge_count()},
           {"variables", c.universe().count()},
           {"and", n_and},
           {"or", n_or},
           {"literal", n_lit},
           {"constant", n_const}};
    if (!vt.is_null()) e["vtree"] = vt;
    out << e.dump(2) << "\n";
  } else {
    out << "nodes: " << c.size() << " (and " << n_and << ", or " << n_or
        << ", literal " << n_lit << ", constant " << n_const << "), edges: "
        << c.edge_count() << ", variables: " << c.universe().count() << "\n"
        << vtext;
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"structured d-DNNF and SDD toolkit"};
  app.name("strux");
  app.require_subcommand(1);
  Args a;

  std::vector<std::pair<CLI::App*, std::size_t>> cap_defaults;
  auto add_common = [&](CLI::App* cmd, std::size_t default_cap) {
    cmd->add_option("--cap", a.cap,
                    "exhaustive-check budget in variables (sampled beyond)");
    cmd->add_option("--seed", a.seed, "seed for sampled checks");
    cmd->add_flag("--json", a.json_mode, "machine-readable report");
    cap_defaults.emplace_back(cmd, default_cap);
  };

  CLI::App* validate = app.add_subcommand("validate", "check circuit properties");
  validate->add_option("--circuit", a.circuit, "circuit file")->required();
  validate->add_option("--vtree", a.vtree, "vtree file");
  validate->add_option("--props", a.props,
                       "comma list: decomposable,deterministic,smooth,simple,"
                       "respects-vtree,sdd");
  add_common(validate, 20);

  CLI::App* simplify = app.add_subcommand("simplify", "constant-eliminate into simple form");
  simplify->add_option("--circuit", a.circuit, "circuit file")->required();
  simplify->add_option("--out", a.out, "output circuit file")->required();
  add_common(simplify, 20);

  CLI::App* smoothc = app.add_subcommand("smooth", "smooth a structured circuit");
  smoothc->add_option("--circuit", a.circuit, "circuit file")->required();
  smoothc->add_option("--vtree", a.vtree, "vtree file")->required();
  smoothc->add_option("--out", a.out, "output circuit file")->required();
  add_common(smoothc, 20);

  CLI::App* restrictc = app.add_subcommand("restrict", "apply a partial assignment");
  restrictc->add_option("--circuit", a.circuit, "circuit file")->required();
  restrictc->add_option("--vtree", a.vtree, "vtree file")->required();
  restrictc->add_option("--assign", a.assign, "var=bit,... (partial assignment)")
      ->required();
  restrictc->add_option("--out", a.out, "output circuit file (.vtree written beside)")
      ->required();
  add_common(restrictc, 20);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "compile a complementary structured d-DNNF pair into an SDD");
  simulate->add_option("--circuit", a.circuit, "circuit for the function")->required();
  simulate->add_option("--circuit2", a.circuit2, "circuit for the complement")
      ->required();
  simulate->add_option("--vtree", a.vtree, "shared vtree file")->required();
  simulate->add_option("--out", a.out,
                       "output circuit file (.vtree and .trace.json beside)")
      ->required();
  add_common(simulate, 12);

  CLI::App* count = app.add_subcommand("count", "model count");
  count->add_option("--circuit", a.circuit, "circuit file")->required();
  add_common(count, 22);

  CLI::App* equiv = app.add_subcommand("equiv", "semantic equivalence of two circuits");
  equiv->add_option("--circuit", a.circuit, "first circuit")->required();
  equiv->add_option("--circuit2", a.circuit2, "second circuit")->required();
  equiv->add_option("--vtree", a.vtree, "vtree naming the aux variables");
  equiv->add_flag("--modulo-aux", a.modulo_aux,
                  "ignore auxiliary variables (from --vtree markers, else the "
                  "universe difference)");
  add_common(equiv, 20);

  CLI::App* subfuncs = app.add_subcommand("subfuncs", "count distinct subfunctions");
  subfuncs->add_option("--circuit", a.circuit, "circuit file")->required();
  subfuncs->add_option("--fixed-set", a.fixed_set, "variables to fix: 1,2,5-9")
      ->required();
  add_common(subfuncs, 22);

  CLI::App* gen_hwb = app.add_subcommand("gen-hwb", "emit the hidden-weighted-bit family");
  gen_hwb->add_option("--n", a.n, "instance size (positive multiple of 10)")
      ->required();
  gen_hwb->add_option("--out-prefix", a.out_prefix,
                      "writes <prefix>.d.nnf, <prefix>.dbar.nnf, <prefix>.vtree")
      ->required();
  add_common(gen_hwb, 20);

  CLI::App* separation = app.add_subcommand("separation", "size/subfunction table");
  separation->add_option("--n", a.n_list, "comma list of sizes, e.g. 10,20,30")
      ->required();
  separation->add_option("--csv", a.csv, "also write the table here");
  add_common(separation, 22);

  CLI::App* stats = app.add_subcommand("stats", "node and edge counts");
  stats->add_option("--circuit", a.circuit, "circuit file")->required();
  stats->add_option("--vtree", a.vtree, "vtree file");
  add_common(stats, 20);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  for (auto& [cmd, default_cap] : cap_defaults)
    if (cmd->parsed() && cmd->count("--cap") == 0) a.cap = default_cap;

  try {
    if (validate->parsed()) return run_validate(a, out);
    if (simplify->parsed()) return run_simplify(a, out);
    if (smoothc->parsed()) return run_smooth(a, out);
    if (restrictc->parsed()) return run_restrict(a, out);
    if (simulate->parsed()) return run_simulate(a, out);
    if (count->parsed()) return run_count(a, out);
    if (equiv->parsed()) return run_equiv(a, out);
    if (subfuncs->parsed()) return run_subfuncs(a, out);
    if (gen_hwb->parsed()) return run_gen_hwb(a, out);
    if (separation->parsed()) return run_separation(a, out);
    if (stats->parsed()) return run_stats(a, out);
  } catch (const property_violation& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace strux
