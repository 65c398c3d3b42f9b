#include "strux/nnf_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "strux/errors.hpp"

namespace strux {

namespace {

struct Token {
  std::string_view text;
  std::size_t col;  // 1-based
};

std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::uint64_t parse_unsigned(const Token& tok, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
  if (ec != std::errc{} || p != tok.text.data() + tok.text.size())
    throw parse_error("expected a non-negative integer, got '" +
                          std::string(tok.text) + "'",
                      line, tok.col);
  return v;
}

std::int64_t parse_signed(const Token& tok, std::size_t line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
  if (ec != std::errc{} || p != tok.text.data() + tok.text.size())
    throw parse_error("expected an integer, got '" + std::string(tok.text) + "'",
                      line, tok.col);
  return v;
}

// Yields (tokens, 1-based line number) for each non-blank line.
struct LineReader {
  std::vector<std::string_view> lines;
  std::size_t next = 0;

  bool get(std::vector<Token>& toks, std::size_t& lineno) {
    while (next < lines.size()) {
      ++next;
      toks = split_tokens(lines[next - 1]);
      if (!toks.empty()) {
        lineno = next;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

Circuit parse_circuit(const std::string& text) {
  LineReader in{split_lines(text), 0};
  std::vector<Token> toks;
  std::size_t lineno = 0;

  if (!in.get(toks, lineno)) throw parse_error("empty circuit file");
  if (toks[0].text != "nnf" || toks.size() != 4)
    throw parse_error("expected header 'nnf <nodes> <edges> <vars>'", lineno,
                      toks[0].col);
  const std::uint64_t node_count = parse_unsigned(toks[1], lineno);
  const std::uint64_t edge_count = parse_unsigned(toks[2], lineno);
  const std::uint64_t var_count = parse_unsigned(toks[3], lineno);
  if (node_count == 0) throw parse_error("a circuit needs at least one node", lineno);

  CircuitBuilder b(false);
  std::vector<NodeRef> ids;         // file id -> builder node
  std::vector<char> referenced;
  std::vector<std::size_t> defline;
  ids.reserve(node_count);
  std::uint64_t edges = 0;

  auto child = [&](const Token& tok, std::size_t ln) {
    std::uint64_t id = parse_unsigned(tok, ln);
    if (id >= ids.size())
      throw parse_error("node " + std::to_string(ids.size()) +
                            " refers to id " + std::to_string(id) +
                            ", which is not an earlier line",
                        ln, tok.col);
    referenced[id] = 1;
    ++edges;
    return ids[std::size_t(id)];
  };

  while (in.get(toks, lineno)) {
    if (ids.size() == node_count)
      throw parse_error("more node lines than the declared " +
                            std::to_string(node_count),
                        lineno, toks[0].col);
    NodeRef node = kNullNode;
    std::string_view tag = toks[0].text;
    if (tag == "L") {
      if (toks.size() != 2)
        throw parse_error("literal lines are 'L <signed-literal>'", lineno, toks[0].col);
      std::int64_t lit = parse_signed(toks[1], lineno);
      std::uint64_t var = std::uint64_t(lit < 0 ? -lit : lit);
      if (lit == 0 || var > var_count)
        throw parse_error("literal " + std::string(toks[1].text) +
                              " is outside 1..var-count",
                          lineno, toks[1].col);
      node = b.literal(VarId(var), lit > 0);
    } else if (tag == "T" || tag == "F") {
      if (toks.size() != 1)
        throw parse_error("constant lines carry no arguments", lineno, toks[1].col);
      node = b.constant(tag == "T");
    } else if (tag == "A" || tag == "O") {
      if (toks.size() < 2)
        throw parse_error("gate lines are '" + std::string(tag) + " <k> <id...>'",
                          lineno, toks[0].col);
      std::uint64_t k = parse_unsigned(toks[1], lineno);
      if (toks.size() != 2 + k)
        throw parse_error("gate declares " + std::to_string(k) + " inputs but lists " +
                              std::to_string(toks.size() - 2),
                          lineno, toks[1].col);
      if (tag == "A") {
        if (k < 2)
          throw parse_error("a conjunction needs at least two inputs", lineno, toks[1].col);
        node = child(toks[2], lineno);
        for (std::size_t i = 3; i < toks.size(); ++i)
          node = b.conjoin(node, child(toks[i], lineno));
      } else {
        if (k < 1)
          throw parse_error("a disjunction needs at least one input", lineno, toks[1].col);
        std::vector<NodeRef> kids;
        kids.reserve(k);
        for (std::size_t i = 2; i < toks.size(); ++i)
          kids.push_back(child(toks[i], lineno));
        node = b.disjoin(kids);
      }
    } else {
      throw parse_error("unknown node tag '" + std::string(tag) + "'", lineno,
                        toks[0].col);
    }
    ids.push_back(node);
    referenced.push_back(0);
    defline.push_back(lineno);
  }

  if (ids.size() != node_count)
    throw parse_error("header declares " + std::to_string(node_count) +
                      " nodes but the file has " + std::to_string(ids.size()));
  if (edges != edge_count)
    throw parse_error("header declares " + std::to_string(edge_count) +
                      " edges but the nodes list " + std::to_string(edges));
  for (std::size_t i = 0; i + 1 < ids.size(); ++i)
    if (!referenced[i])
      throw parse_error("node " + std::to_string(i) +
                            " is never referenced; only the last node is the root",
                        defline[i]);

  VarSet universe;
  for (std::uint64_t v = 1; v <= var_count; ++v) universe.insert(VarId(v));
  return b.build(ids.back(), universe);
}

std::string serialize_circuit(const Circuit& c) {
  std::string s = "nnf " + std::to_string(c.size()) + " " +
                  std::to_string(c.edge_count()) + " " +
                  std::to_string(c.universe().empty() ? 0 : c.universe().max()) +
                  "\n";
  for (NodeRef n = 0; n < c.size(); ++n) {
    switch (c.kind(n)) {
      case GateKind::const_true:
        s += "T";
        break;
      case GateKind::const_false:
        s += "F";
        break;
      case GateKind::literal:
        s += "L ";
        if (!c.positive(n)) s += "-";
        s += std::to_string(c.var(n));
        break;
      case GateKind::and_gate:
      case GateKind::or_gate: {
        auto ch = c.children(n);
        s += c.kind(n) == GateKind::and_gate ? "A " : "O ";
        s += std::to_string(ch.size());
        for (NodeRef k : ch) s += " " + std::to_string(k);
        break;
      }
    }
    s += "\n";
  }
  return s;
}

Vtree parse_vtree(const std::string& text) {
  LineReader in{split_lines(text), 0};
  std::vector<Token> toks;
  std::size_t lineno = 0;

  if (!in.get(toks, lineno)) throw parse_error("empty vtree file");
  if (toks[0].text != "vtree" || toks.size() != 2)
    throw parse_error("expected header 'vtree <nodes>'", lineno, toks[0].col);
  const std::uint64_t node_count = parse_unsigned(toks[1], lineno);
  if (node_count == 0) throw parse_error("a vtree needs at least one node", lineno);

  VtreeBuilder b;
  VarSet aux;
  std::uint64_t made = 0;

  auto own_id = [&](const Token& tok, std::size_t ln) {
    std::uint64_t id = parse_unsigned(tok, ln);
    if (id != made)
      throw parse_error("expected id " + std::to_string(made) +
                            " (ids are consecutive from 0)",
                        ln, tok.col);
  };
  auto child_id = [&](const Token& tok, std::size_t ln) {
    std::uint64_t id = parse_unsigned(tok, ln);
    if (id >= made)
      throw parse_error("child id " + std::to_string(id) +
                            " is not an earlier line",
                        ln, tok.col);
    return VtreeRef(id);
  };

  while (in.get(toks, lineno)) {
    if (made == node_count)
      throw parse_error("more node lines than the declared " +
                            std::to_string(node_count),
                        lineno, toks[0].col);
    std::string_view tag = toks[0].text;
    if (tag == "L") {
      if (toks.size() != 3 && !(toks.size() == 4 && toks[3].text == "aux"))
        throw parse_error("leaf lines are 'L <id> <var> [aux]'", lineno, toks[0].col);
      own_id(toks[1], lineno);
      std::uint64_t var = parse_unsigned(toks[2], lineno);
      if (var == 0)
        throw parse_error("variable ids start at 1", lineno, toks[2].col);
      if (toks.size() == 4) aux.insert(VarId(var));
      b.leaf(VarId(var));
    } else if (tag == "I") {
      if (toks.size() != 4)
        throw parse_error("internal lines are 'I <id> <left> <right>'", lineno,
                          toks[0].col);
      own_id(toks[1], lineno);
      VtreeRef l = child_id(toks[2], lineno);
      VtreeRef r = child_id(toks[3], lineno);
      b.internal(l, r);
    } else if (tag == "S") {
      if (toks.size() != 2)
        throw parse_error("stub lines are 'S <id>'", lineno, toks[0].col);
      own_id(toks[1], lineno);
      b.stub();
    } else {
      throw parse_error("unknown node tag '" + std::string(tag) + "'", lineno,
                        toks[0].col);
    }
    ++made;
  }
  if (made != node_count)
    throw parse_error("header declares " + std::to_string(node_count) +
                      " nodes but the file has " + std::to_string(made));
  try {
    return b.build(VtreeRef(node_count - 1), aux);
  } catch (const input_error& e) {
    throw parse_error(std::string("invalid vtree: ") + e.what());
  }
}

std::string serialize_vtree(const Vtree& t) {
  // Left-then-right postorder; ids are positions in that order, root last.
  std::vector<VtreeRef> order;
  order.reserve(t.size());
  std::vector<std::pair<VtreeRef, bool>> stack{{t.root(), false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (expanded || !t.is_internal(v)) {
      order.push_back(v);
      continue;
    }
    stack.push_back({v, true});
    stack.push_back({t.right(v), false});
    stack.push_back({t.left(v), false});
  }
  std::vector<std::uint64_t> id(t.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = i;

  std::string s = "vtree " + std::to_string(order.size()) + "\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    VtreeRef v = order[i];
    if (t.is_leaf(v)) {
      s += "L " + std::to_string(i) + " " + std::to_string(t.var(v));
      if (t.aux_vars().contains(t.var(v))) s += " aux";
    } else if (t.is_stub(v)) {
      s += "S " + std::to_string(i);
    } else {
      s += "I " + std::to_string(i) + " " + std::to_string(id[t.left(v)]) + " " +
           std::to_string(id[t.right(v)]);
    }
    s += "\n";
  }
  return s;
}

std::string serialize_trace(const SimulationResult& r) {
  nlohmann::json j;
  j["complement_sampled"] = r.complement_sampled;
  nlohmann::json aux = nlohmann::json::array();
  for (VarId a : r.modification.aux_vars) aux.push_back(a);
  j["aux_vars"] = std::move(aux);

  auto tag_of = [](SimOrigin o, NodeRef u) {
    return std::string(origin_name(o)) + ":" + std::to_string(u);
  };
  nlohmann::json records = nlohmann::json::object();
  for (const SimKeyRecord& rec : r.trace.records) {
    nlohmann::json e;
    switch (rec.kind) {
      case SimKeyRecord::Case::base: e["case"] = "base"; break;
      case SimKeyRecord::Case::or_case: e["case"] = "or"; break;
      case SimKeyRecord::Case::and_case: e["case"] = "and"; break;
    }
    e["s_node"] = rec.s_node;
    if (rec.v != kNullVtree) e["v"] = rec.v;
    if (rec.kind == SimKeyRecord::Case::base) {
      nlohmann::json fn;
      nlohmann::json vars = nlohmann::json::array();
      for (VarId x : rec.base_fn.vars)
        if (x != kNoVar) vars.push_back(x);
      fn["vars"] = std::move(vars);
      fn["bits"] = rec.base_fn.bits;
      e["base"] = std::move(fn);
    } else {
      nlohmann::json p = nlohmann::json::object();
      for (VarId x : rec.p.domain().to_vector())
        p[std::to_string(x)] = rec.p.value(x) ? 1 : 0;
      e["p"] = std::move(p);
      if (rec.kind == SimKeyRecord::Case::and_case) e["v_ell"] = rec.v_ell;
      e["own_r"] = rec.own_r;
      e["own_r_plus"] = rec.own_r_plus;
      if (rec.kind == SimKeyRecord::Case::and_case)
        e["own_r_plus_plus"] = rec.own_r_plus_plus;
      e["foreign_r_plus"] = rec.foreign_r_plus;
      nlohmann::json partners = nlohmann::json::array();
      for (auto& [o, u] : rec.partners) partners.push_back(tag_of(o, u));
      e["partners"] = std::move(partners);
      e["partner_sub_true"] = rec.partner_sub_true;
    }
    records[tag_of(rec.origin, rec.u)] = std::move(e);
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open file: " + path);
  std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return s;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw input_error("cannot open file for writing: " + tmp);
    f.write(content.data(), std::streamsize(content.size()));
    f.flush();
    if (!f) throw input_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw input_error("rename failed: " + tmp + " -> " + path + ": " + ec.message());
}

}  // namespace strux
