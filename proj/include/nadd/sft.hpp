#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "nadd/common.hpp"

namespace nadd {

// One-sided subshift of finite type over a finite alphabet with nearest
// neighbour constraints: a word is admissible iff every adjacent pair of
// symbols is an allowed transition. Construction requires the transition
// matrix to be primitive, so the Perron machinery downstream never
// degenerates. Copies are cheap (shared immutable state).
class Sft {
 public:
  Sft(int alphabet_size, const std::vector<std::vector<int>>& transitions);
  static Sft full_shift(int alphabet_size);
  // Two symbols, the word 11 forbidden.
  static Sft golden_mean();

  int alphabet_size() const { return d_->alphabet_size; }
  bool is_full_shift() const { return d_->full_shift; }
  bool admissible(Symbol a, Symbol b) const {
    return d_->transitions[static_cast<std::size_t>(a) * d_->alphabet_size + b] != 0;
  }
  bool word_admissible(WordView w) const;

  // Exact number of admissible words of length n, saturating at 2^63.
  std::uint64_t word_count(int n) const;

  bool operator==(const Sft& o) const;

 private:
  struct Data {
    int alphabet_size = 0;
    std::vector<std::uint8_t> transitions;  // row major |A| x |A|
    bool full_shift = false;
  };
  explicit Sft(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

// A periodic point of the shift, given by one period of its symbol stream.
// The wrap transition (last symbol -> first symbol) must be admissible.
struct PeriodicOrbit {
  Word cycle;

  int period() const { return static_cast<int>(cycle.size()); }
  Symbol symbol_at(std::uint64_t i) const { return cycle[i % cycle.size()]; }
};

// Lexicographically smallest rotation of the cycle word.
PeriodicOrbit canonical_rotation(const PeriodicOrbit& o);

// d(x, y) = 2^-i where i >= 1 indexes the first disagreeing symbol; 0 if equal.
double shift_metric(const PeriodicOrbit& x, const PeriodicOrbit& y);

// The admissible words of one fixed length in lexicographic order, with
// rank lookup. Rank order is the canonical indexing used by potentials,
// transfer matrices and word graphs.
class WordIndex {
 public:
  WordIndex() = default;
  WordIndex(const Sft& sft, int length, std::uint64_t cap = kDefaultWordCap);

  int length() const { return length_; }
  std::size_t size() const { return count_; }
  WordView word(std::size_t rank) const {
    return WordView(flat_.data() + rank * static_cast<std::size_t>(length_),
                    static_cast<std::size_t>(length_));
  }
  std::size_t rank(WordView w) const;  // throws DomainError when not admissible
  std::optional<std::size_t> find(WordView w) const;

 private:
  int length_ = 0;
  std::size_t count_ = 0;
  std::vector<Symbol> flat_;
};

// De Bruijn style word graph: nodes are admissible k-words, an edge w -> w'
// exists when w' drops the first symbol of w and appends one more. Edges are
// in bijection with admissible (k+1)-words and inherit their lexicographic
// order.
struct WordGraph {
  int depth = 1;
  WordIndex nodes;
  std::vector<std::uint32_t> succ_flat;
  std::vector<std::uint32_t> succ_offset;  // size nodes.size() + 1

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return succ_flat.size(); }
  std::span<const std::uint32_t> successors(std::size_t u) const {
    return {succ_flat.data() + succ_offset[u], succ_flat.data() + succ_offset[u + 1]};
  }
  std::size_t edge_id(std::size_t u, std::size_t slot) const { return succ_offset[u] + slot; }
};

WordGraph word_graph(const Sft& sft, int depth, std::uint64_t cap = kDefaultWordCap);

std::vector<Word> enumerate_words(const Sft& sft, int n, std::uint64_t cap = kDefaultWordCap);

// All simple cycles of the depth-`depth` word graph with period <= max_period,
// reported once up to rotation, sorted by (period, cycle word).
std::vector<PeriodicOrbit> periodic_orbits(const Sft& sft, int max_period, int depth = 1,
                                           std::uint64_t cap = kDefaultWordCap);

// Depth-first sweep over all admissible words of the given length in
// lexicographic order. on_push(depth, symbol) is called when a symbol is
// appended (depth is the new prefix length, 1-based), on_pop() when it is
// removed, at_leaf(word) at full length. Checks the cap up front.
void walk_words(const Sft& sft, int length, std::uint64_t cap,
                const std::function<void(int, Symbol)>& on_push,
                const std::function<void()>& on_pop,
                const std::function<void(WordView)>& at_leaf);

}  // namespace nadd
