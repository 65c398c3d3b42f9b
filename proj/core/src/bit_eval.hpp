#pragma once

// 64-assignment-wide circuit evaluation. Enumeration variables are mapped to
// bit positions of the assignment index: position k < 6 varies within a lane
// word, position k >= 6 selects by block number. Variables outside the
// enumeration order take fixed values.

#include <cstdint>
#include <random>
#include <vector>

#include "strux/circuit.hpp"
#include "strux/varset.hpp"

namespace strux::detail {

inline constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

class BitEval {
 public:
  // Evaluates the subcircuit rooted at `node` (default: circuit root) on all
  // assignments over `order`; other mentioned variables must be given via
  // `fixed` at eval time.
  BitEval(const Circuit& c, std::vector<VarId> order, NodeRef node = kNullNode)
      : c_(c), order_(std::move(order)), top_(node == kNullNode ? c.root() : node) {
    VarId mx = 0;
    for (VarId v : order_) mx = std::max(mx, v);
    pos_.assign(static_cast<std::size_t>(mx) + 1, -1);
    for (std::size_t k = 0; k < order_.size(); ++k) pos_[order_[k]] = static_cast<int>(k);
    mark_.assign(static_cast<std::size_t>(top_) + 1, 0);
    mark_[top_] = 1;
    for (NodeRef i = top_ + 1; i-- > 0;) {
      if (!mark_[i]) continue;
      for (NodeRef ch : c.children(i)) mark_[ch] = 1;
    }
  }

  std::size_t width() const { return order_.size(); }
  NodeRef top() const { return top_; }
  std::uint64_t block_count() const {
    return order_.size() <= 6 ? 1 : (std::uint64_t{1} << (order_.size() - 6));
  }
  // Lanes of the last (or only) block that correspond to real assignments.
  std::uint64_t valid_mask() const {
    return order_.size() >= 6 ? ~0ull : (order_.size() == 0 ? 1ull : (1ull << (1u << order_.size())) - 1);
  }

  // vals is resized to top()+1; vals[n] holds node n's value on the block's
  // 64 assignments. Assignment index = block*64 + lane.
  void eval_block(std::uint64_t block, const Assignment& fixed,
                  std::vector<std::uint64_t>& vals) const {
    vals.assign(static_cast<std::size_t>(top_) + 1, 0);
    eval_with(vals, [&](VarId v) -> std::uint64_t {
      int k = v < pos_.size() ? pos_[v] : -1;
      if (k < 0) return fixed.value(v) ? ~0ull : 0ull;
      if (k < 6) return kLanePattern[k];
      return (block >> (k - 6)) & 1 ? ~0ull : 0ull;
    });
  }

  // Evaluation on 64 assignments given explicitly: var_words[k] holds the 64
  // values of order[k]. Lets two circuits see identical random assignments.
  void eval_block_with_words(const std::vector<std::uint64_t>& var_words,
                             const Assignment& fixed,
                             std::vector<std::uint64_t>& vals) const {
    vals.assign(static_cast<std::size_t>(top_) + 1, 0);
    eval_with(vals, [&](VarId v) -> std::uint64_t {
      int k = v < pos_.size() ? pos_[v] : -1;
      if (k < 0) return fixed.value(v) ? ~0ull : 0ull;
      return var_words[static_cast<std::size_t>(k)];
    });
  }

  // 64 independent uniformly random assignments over `order`; fixed as above.
  void eval_random_block(std::mt19937_64& rng, const Assignment& fixed,
                         std::vector<std::uint64_t>& vals,
                         std::vector<std::uint64_t>& var_words) const {
    var_words.assign(order_.size(), 0);
    for (auto& w : var_words) w = rng();
    eval_block_with_words(var_words, fixed, vals);
  }

  // Decodes one lane of a block into an assignment over `order`.
  Assignment decode(std::uint64_t block, unsigned lane) const {
    Assignment a;
    std::uint64_t idx = block * 64 + lane;
    for (std::size_t k = 0; k < order_.size(); ++k) a.set(order_[k], (idx >> k) & 1);
    return a;
  }
  Assignment decode_random(const std::vector<std::uint64_t>& var_words, unsigned lane) const {
    Assignment a;
    for (std::size_t k = 0; k < order_.size(); ++k) a.set(order_[k], (var_words[k] >> lane) & 1);
    return a;
  }

 private:
  template <typename VarMask>
  void eval_with(std::vector<std::uint64_t>& vals, VarMask&& mask) const {
    for (NodeRef i = 0; i <= top_; ++i) {
      if (!mark_[i]) continue;
      switch (c_.kind(i)) {
        case GateKind::const_false:
          vals[i] = 0;
          break;
        case GateKind::const_true:
          vals[i] = ~0ull;
          break;
        case GateKind::literal: {
          std::uint64_t m = mask(c_.var(i));
          vals[i] = c_.positive(i) ? m : ~m;
          break;
        }
        case GateKind::and_gate: {
          std::uint64_t r = ~0ull;
          for (NodeRef ch : c_.children(i)) r &= vals[ch];
          vals[i] = r;
          break;
        }
        case GateKind::or_gate: {
          std::uint64_t r = 0;
          for (NodeRef ch : c_.children(i)) r |= vals[ch];
          vals[i] = r;
          break;
        }
      }
    }
  }

  const Circuit& c_;
  std::vector<VarId> order_;
  NodeRef top_;
  std::vector<int> pos_;
  std::vector<std::uint8_t> mark_;
};

}  // namespace strux::detail
