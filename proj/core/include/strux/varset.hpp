#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "strux/errors.hpp"

namespace strux {

// Variables are 1-based. 0 is reserved as "no variable".
using VarId = std::uint32_t;
inline constexpr VarId kNoVar = 0;

// Set of variable ids, stored as a bitset over 64-bit words.
// Word 0 holds variables 1..64 (variable v maps to bit (v-1)).
class VarSet {
 public:
  VarSet() = default;

  static VarSet single(VarId v) {
    VarSet s;
    s.insert(v);
    return s;
  }

  static VarSet range(VarId lo, VarId hi) {  // inclusive; empty if lo > hi
    VarSet s;
    for (VarId v = lo; v <= hi; ++v) s.insert(v);
    return s;
  }

  bool contains(VarId v) const {
    if (v == kNoVar) return false;
    std::size_t w = word_of(v);
    if (w >= words_.size()) return false;
    return (words_[w] >> bit_of(v)) & 1u;
  }

  void insert(VarId v) {
    if (v == kNoVar) throw input_error("VarSet: variable id 0 is reserved");
    std::size_t w = word_of(v);
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << bit_of(v);
  }

  void erase(VarId v) {
    std::size_t w = word_of(v);
    if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << bit_of(v));
  }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

  // Smallest member, or kNoVar if empty.
  VarId min() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return static_cast<VarId>(w * 64 + __builtin_ctzll(words_[w]) + 1);
    return kNoVar;
  }

  // Largest member, or kNoVar if empty.
  VarId max() const {
    for (std::size_t w = words_.size(); w-- > 0;)
      if (words_[w]) return static_cast<VarId>(w * 64 + 63 - __builtin_clzll(words_[w]) + 1);
    return kNoVar;
  }

  VarSet& operator|=(const VarSet& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  VarSet& operator&=(const VarSet& o) {
    if (words_.size() > o.words_.size()) words_.resize(o.words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  // Set difference: removes o's members.
  VarSet& operator-=(const VarSet& o) {
    std::size_t n = words_.size() < o.words_.size() ? words_.size() : o.words_.size();
    for (std::size_t i = 0; i < n; ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend VarSet operator|(VarSet a, const VarSet& b) { return a |= b; }
  friend VarSet operator&(VarSet a, const VarSet& b) { return a &= b; }
  friend VarSet operator-(VarSet a, const VarSet& b) { return a -= b; }

  bool operator==(const VarSet& o) const {
    std::size_t n = words_.size() > o.words_.size() ? words_.size() : o.words_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (word(i) != o.word(i)) return false;
    return true;
  }
  bool operator!=(const VarSet& o) const { return !(*this == o); }

  bool subset_of(const VarSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.word(i)) return false;
    return true;
  }

  bool intersects(const VarSet& o) const {
    std::size_t n = words_.size() < o.words_.size() ? words_.size() : o.words_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  // Members in ascending order.
  std::vector<VarId> to_vector() const {
    std::vector<VarId> out;
    out.reserve(count());
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
        out.push_back(static_cast<VarId>(w * 64 + b + 1));
        bits &= bits - 1;
      }
    }
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (VarId v : to_vector()) {
      if (!first) s += ",";
      s += std::to_string(v);
      first = false;
    }
    return s + "}";
  }

  std::size_t hash() const {
    std::size_t h = 0;
    std::size_t top = words_.size();
    while (top > 0 && words_[top - 1] == 0) --top;  // trailing zero words don't change the set
    for (std::size_t i = 0; i < top; ++i)
      h ^= std::hash<std::uint64_t>{}(words_[i]) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::uint64_t word(std::size_t i) const { return i < words_.size() ? words_[i] : 0; }
  static std::size_t word_of(VarId v) { return (v - 1) / 64; }
  static unsigned bit_of(VarId v) { return (v - 1) % 64; }

  std::vector<std::uint64_t> words_;
};

// Partial assignment: a domain plus a 0/1 value per domain member.
class Assignment {
 public:
  Assignment() = default;

  const VarSet& domain() const { return domain_; }
  bool defines(VarId v) const { return domain_.contains(v); }
  bool empty() const { return domain_.empty(); }
  std::size_t size() const { return domain_.count(); }

  void set(VarId v, bool value) {
    domain_.insert(v);
    if (v >= values_.size()) values_.resize(v + 1, 0);
    values_[v] = value ? 1 : 0;
  }

  void unset(VarId v) { domain_.erase(v); }

  bool value(VarId v) const {
    if (!defines(v)) throw input_error("Assignment: variable " + std::to_string(v) + " is undefined");
    return values_[v] != 0;
  }

  // True if both assignments agree on every shared variable.
  bool consistent_with(const Assignment& o) const {
    for (VarId v : (domain_ & o.domain_).to_vector())
      if (value(v) != o.value(v)) return false;
    return true;
  }

  // Restriction of this assignment to the given variables.
  Assignment project(const VarSet& vars) const {
    Assignment out;
    for (VarId v : (domain_ & vars).to_vector()) out.set(v, value(v));
    return out;
  }

  // Union of two assignments; throws on conflicting values.
  Assignment merged_with(const Assignment& o) const {
    if (!consistent_with(o)) throw input_error("Assignment: merge conflict");
    Assignment out = *this;
    for (VarId v : o.domain_.to_vector()) out.set(v, o.value(v));
    return out;
  }

  bool operator==(const Assignment& o) const {
    if (domain_ != o.domain_) return false;
    for (VarId v : domain_.to_vector())
      if (value(v) != o.value(v)) return false;
    return true;
  }
  bool operator!=(const Assignment& o) const { return !(*this == o); }

  // "3=1 7=0" in ascending variable order; "(empty)" for the empty assignment.
  std::string to_string() const {
    if (domain_.empty()) return "(empty)";
    std::string s;
    for (VarId v : domain_.to_vector()) {
      if (!s.empty()) s += " ";
      s += std::to_string(v) + "=" + (value(v) ? "1" : "0");
    }
    return s;
  }

  // Canonical byte key for hashing/memo tables.
  std::string key() const {
    std::string s;
    for (VarId v : domain_.to_vector()) {
      s += std::to_string(v);
      s += value(v) ? '+' : '-';
    }
    return s;
  }

 private:
  VarSet domain_;
  std::vector<std::uint8_t> values_;  // indexed by VarId, valid only where domain_ holds
};

}  // namespace strux
