#pragma once

// External text formats. These are the artifact's on-disk contract and are
// documented bit-exactly in the README.
//
// Circuit files ("nnf"):
//   header   nnf <node-count> <edge-count> <var-count>
//   then one node per line, implicitly numbered 0, 1, ... in order:
//     L <signed-literal>     literal; variable ids are 1..var-count
//     T | F                  constant
//     A <k> <id...>          conjunction, k >= 2; k > 2 binarized on load
//                            into a left-associated chain
//     O <k> <id...>          disjunction, k >= 1
//   Children refer to earlier lines only. Every node but the last must be
//   referenced later; the last line is the root. <edge-count> counts the ids
//   on A/O lines as written. The circuit's universe is normalized to
//   {1..var-count}; serialization writes var-count = the largest universe
//   variable, so gapped universes do not round-trip (contiguous ones do).
//
// Vtree files:
//   header   vtree <node-count>
//   then one node per line with explicit consecutive ids 0, 1, ...:
//     L <id> <var> [aux]     leaf; "aux" marks an auxiliary variable
//     I <id> <left> <right>  internal node over two earlier ids
//     S <id>                 stub (a pruned subtree's placeholder)
//   The last id is the root. Serialization emits a left-then-right postorder,
//   so a second serialization of a parsed file is byte-identical.
//
// Parse errors carry 1-based line and column positions.

#include <string>

#include "strux/circuit.hpp"
#include "strux/simulation.hpp"
#include "strux/vtree.hpp"

namespace strux {

Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& c);

Vtree parse_vtree(const std::string& text);
std::string serialize_vtree(const Vtree& t);

// The per-key audit trail as JSON. Record keys are origin-tagged node ids
// ("d:<id>" / "dbar:<id>"), node ids are relative to the oriented source
// circuits, s_node to the output circuit. Deterministic for a fixed input.
std::string serialize_trace(const SimulationResult& r);

std::string read_file(const std::string& path);

// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace strux
