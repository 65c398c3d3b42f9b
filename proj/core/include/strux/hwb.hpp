#pragma once

// The hidden weighted bit family over a two-block right-linear vtree:
// polynomial structured d-DNNFs for the function and its complement, plus the
// subfunction-count separation experiment.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/varset.hpp"
#include "strux/vtree.hpp"

namespace strux {

// x_{‖x‖}, and 0 when ‖x‖ = 0. The assignment must be total over 1..n.
bool hwb_value(const Assignment& x);

struct HwbInstance {
  std::size_t n = 0;
  // Root splits the first 6n/10 variables (left) from the remaining 4n/10
  // (right); both subtrees right-linear. Deliberately not normalized at the
  // root; downstream consumers normalize.
  Vtree vtree;
  Circuit d;     // the function: an ∨ of (i, j) terms, one per root child
  Circuit dbar;  // the complement: the all-zero term plus (k, j) terms
  // Term labels, aligned with the root's children. A label (i, j) stands for
  // "‖x‖ = i with j ones on the left and the i-th variable pinned" — pinned
  // to 1 in d, to 0 in dbar. dbar's leading (0, 0) label is the all-zero term.
  std::vector<std::pair<std::size_t, std::size_t>> terms;
  std::vector<std::pair<std::size_t, std::size_t>> dbar_terms;
};

// Both circuits are smooth, simple, deterministic and respect the instance
// vtree; counting sublattices are shared between terms and across d and dbar
// through hash-consing. Unsatisfiable (i, j) index pairs are skipped.
// n must be a positive multiple of 10.
HwbInstance build_hwb(std::size_t n);

struct SeparationRow {
  std::size_t n = 0;
  std::size_t size_d = 0;
  std::size_t size_dbar = 0;
  std::uint64_t subfunctions = 0;  // 0 when skipped, see note
  std::uint64_t bound = 0;         // 2^(n/5 - 1)
  std::string note;
};

// One row per n: circuit sizes, the number of distinct subfunctions of the
// function under all assignments to the left block, and the reference bound
// the count must reach. Counting is skipped with a note when n exceeds cap.
std::vector<SeparationRow> separation_experiment(
    const std::vector<std::size_t>& n_values, std::size_t cap = 22);

// Header "n,size_d,size_dbar,subfunctions,bound,note"; the subfunctions cell
// is empty in skipped rows.
std::string separation_csv(const std::vector<SeparationRow>& rows);

}  // namespace strux
