#include "nadd/sft.hpp"

#include <algorithm>
#include <numeric>

namespace nadd {

namespace {

// Boolean matrix square with rows packed into 64-bit blocks.
using BitRows = std::vector<std::uint64_t>;

BitRows bit_square(const BitRows& m, int n, int blocks) {
  BitRows r(static_cast<std::size_t>(n) * blocks, 0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (m[static_cast<std::size_t>(i) * blocks + k / 64] >> (k % 64) & 1) {
        for (int b = 0; b < blocks; ++b)
          r[static_cast<std::size_t>(i) * blocks + b] |= m[static_cast<std::size_t>(k) * blocks + b];
      }
    }
  }
  return r;
}

bool all_ones(const BitRows& m, int n, int blocks) {
  for (int i = 0; i < n; ++i) {
    int left = n;
    for (int b = 0; b < blocks; ++b) {
      const int width = std::min(left, 64);
      const std::uint64_t mask = width == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
      if ((m[static_cast<std::size_t>(i) * blocks + b] & mask) != mask) return false;
      left -= width;
    }
  }
  return true;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t kSat = std::uint64_t{1} << 63;
  if (a >= kSat || b >= kSat || a + b >= kSat) return kSat;
  return a + b;
}

}  // namespace

Sft::Sft(int alphabet_size, const std::vector<std::vector<int>>& transitions) {
  if (alphabet_size < 1 || alphabet_size > 256)
    throw ConfigError("Sft: alphabet size must be in [1, 256]");
  if (transitions.size() != static_cast<std::size_t>(alphabet_size))
    throw ConfigError("Sft: transition matrix must be square of alphabet size");
  auto d = std::make_shared<Data>();
  d->alphabet_size = alphabet_size;
  d->transitions.assign(static_cast<std::size_t>(alphabet_size) * alphabet_size, 0);
  bool full = true;
  for (int i = 0; i < alphabet_size; ++i) {
    if (transitions[i].size() != static_cast<std::size_t>(alphabet_size))
      throw ConfigError("Sft: transition matrix must be square of alphabet size");
    for (int j = 0; j < alphabet_size; ++j) {
      d->transitions[static_cast<std::size_t>(i) * alphabet_size + j] = transitions[i][j] ? 1 : 0;
      if (!transitions[i][j]) full = false;
    }
  }
  d->full_shift = full;

  // Every symbol needs an outgoing and an incoming transition, and the
  // matrix must be primitive (some power strictly positive).
  const int n = alphabet_size;
  for (int i = 0; i < n; ++i) {
    bool out = false, in = false;
    for (int j = 0; j < n; ++j) {
      out = out || d->transitions[static_cast<std::size_t>(i) * n + j];
      in = in || d->transitions[static_cast<std::size_t>(j) * n + i];
    }
    if (!out)
      throw ConfigError("Sft: symbol " + std::to_string(i) + " has no outgoing transition");
    if (!in) throw ConfigError("Sft: symbol " + std::to_string(i) + " has no incoming transition");
  }
  const int blocks = (n + 63) / 64;
  BitRows pow(static_cast<std::size_t>(n) * blocks, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d->transitions[static_cast<std::size_t>(i) * n + j])
        pow[static_cast<std::size_t>(i) * blocks + j / 64] |= std::uint64_t{1} << (j % 64);
  // Wielandt bound: a primitive matrix has A^m > 0 for some m <= (n-1)^2 + 1.
  // Squaring past that exponent is a complete test because positivity is
  // preserved once reached (no zero rows or columns).
  const std::uint64_t wielandt = static_cast<std::uint64_t>(n - 1) * (n - 1) + 1;
  std::uint64_t e = 1;
  bool primitive = all_ones(pow, n, blocks);
  while (!primitive && e < 2 * wielandt) {
    pow = bit_square(pow, n, blocks);
    e *= 2;
    primitive = all_ones(pow, n, blocks);
  }
  if (!primitive)
    throw ConfigError("Sft: transition matrix is not primitive (no power is strictly positive)");
  d_ = std::move(d);
}

Sft Sft::full_shift(int alphabet_size) {
  std::vector<std::vector<int>> t(static_cast<std::size_t>(alphabet_size),
                                  std::vector<int>(static_cast<std::size_t>(alphabet_size), 1));
  return Sft(alphabet_size, t);
}

Sft Sft::golden_mean() { return Sft(2, {{1, 1}, {1, 0}}); }

bool Sft::word_admissible(WordView w) const {
  if (w.empty()) return true;
  for (Symbol a : w)
    if (a >= alphabet_size()) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!admissible(w[i], w[i + 1])) return false;
  return true;
}

std::uint64_t Sft::word_count(int n) const {
  if (n < 0) throw DomainError("word_count: negative length");
  if (n == 0) return 1;
  const int A = alphabet_size();
  std::vector<std::uint64_t> c(static_cast<std::size_t>(A), 1);
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(A), 0);
    for (int a = 0; a < A; ++a) {
      if (c[a] == 0) continue;
      for (int b = 0; b < A; ++b)
        if (admissible(static_cast<Symbol>(a), static_cast<Symbol>(b)))
          next[b] = sat_add(next[b], c[a]);
    }
    c = std::move(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t v : c) total = sat_add(total, v);
  return total;
}

bool Sft::operator==(const Sft& o) const {
  return d_->alphabet_size == o.d_->alphabet_size && d_->transitions == o.d_->transitions;
}

PeriodicOrbit canonical_rotation(const PeriodicOrbit& o) {
  const int p = o.period();
  Word best = o.cycle;
  Word rot = o.cycle;
  for (int r = 1; r < p; ++r) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (compare_words(rot, best) < 0) best = rot;
  }
  return PeriodicOrbit{best};
}

double shift_metric(const PeriodicOrbit& x, const PeriodicOrbit& y) {
  const std::uint64_t p = x.cycle.size(), q = y.cycle.size();
  if (p == 0 || q == 0) throw DomainError("shift_metric: empty orbit");
  const std::uint64_t horizon = std::lcm(p, q);
  for (std::uint64_t i = 0; i < horizon; ++i) {
    if (x.symbol_at(i) != y.symbol_at(i)) return std::ldexp(1.0, -static_cast<int>(i + 1));
  }
  return 0.0;
}

WordIndex::WordIndex(const Sft& sft, int length, std::uint64_t cap) : length_(length) {
  if (length < 0) throw DomainError("WordIndex: negative length");
  if (length == 0) {
    count_ = 1;
    return;
  }
  const std::uint64_t n = sft.word_count(length);
  if (n > cap) throw CapExceededError("word enumeration at length " + std::to_string(length), n, cap);
  flat_.reserve(static_cast<std::size_t>(n) * length);
  Word prefix;
  prefix.reserve(length);
  // Iterative lexicographic DFS.
  std::vector<int> next(static_cast<std::size_t>(length) + 1, 0);
  const int A = sft.alphabet_size();
  while (true) {
    const int d = static_cast<int>(prefix.size());
    if (d == length) {
      flat_.insert(flat_.end(), prefix.begin(), prefix.end());
      ++count_;
      prefix.pop_back();
      continue;
    }
    int a = next[d];
    bool advanced = false;
    for (; a < A; ++a) {
      if (d == 0 || sft.admissible(prefix.back(), static_cast<Symbol>(a))) {
        next[d] = a + 1;
        prefix.push_back(static_cast<Symbol>(a));
        next[d + 1] = 0;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      if (d == 0) break;
      prefix.pop_back();
    }
  }
}

std::optional<std::size_t> WordIndex::find(WordView w) const {
  if (static_cast<int>(w.size()) != length_) return std::nullopt;
  if (length_ == 0) return 0;
  std::size_t lo = 0, hi = count_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const int c = compare_words(word(mid), w);
    if (c == 0) return mid;
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return std::nullopt;
}

std::size_t WordIndex::rank(WordView w) const {
  auto r = find(w);
  if (!r)
    throw DomainError("word " + word_to_string(w) + " is not an admissible word of length " +
                      std::to_string(length_));
  return *r;
}

WordGraph word_graph(const Sft& sft, int depth, std::uint64_t cap) {
  if (depth < 1) throw DomainError("word_graph: depth must be >= 1");
  WordGraph g;
  g.depth = depth;
  g.nodes = WordIndex(sft, depth, cap);
  const std::size_t V = g.nodes.size();
  g.succ_offset.assign(V + 1, 0);
  Word buf(static_cast<std::size_t>(depth));
  for (std::size_t u = 0; u < V; ++u) {
    WordView w = g.nodes.word(u);
    std::copy(w.begin() + 1, w.end(), buf.begin());
    for (int a = 0; a < sft.alphabet_size(); ++a) {
      if (!sft.admissible(w.back(), static_cast<Symbol>(a))) continue;
      buf.back() = static_cast<Symbol>(a);
      auto v = g.nodes.find(buf);
      if (v) g.succ_flat.push_back(static_cast<std::uint32_t>(*v));
    }
    g.succ_offset[u + 1] = static_cast<std::uint32_t>(g.succ_flat.size());
  }
  return g;
}

std::vector<Word> enumerate_words(const Sft& sft, int n, std::uint64_t cap) {
  if (n < 1) throw DomainError("enumerate_words: length must be >= 1");
  WordIndex ix(sft, n, cap);
  std::vector<Word> out;
  out.reserve(ix.size());
  for (std::size_t r = 0; r < ix.size(); ++r) out.push_back(to_word(ix.word(r)));
  return out;
}

std::vector<PeriodicOrbit> periodic_orbits(const Sft& sft, int max_period, int depth,
                                           std::uint64_t cap) {
  if (max_period < 1) throw DomainError("periodic_orbits: max_period must be >= 1");
  const WordGraph g = word_graph(sft, depth, cap);
  const std::size_t V = g.node_count();
  const int limit = std::min<std::size_t>(max_period, V);

  std::vector<PeriodicOrbit> out;
  std::vector<std::uint8_t> on_path(V, 0);
  std::vector<std::uint32_t> path;

  // Simple cycles whose minimal node is the start; that enumerates each
  // cycle exactly once up to rotation.
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t start, std::size_t u) {
    for (std::uint32_t v : g.successors(u)) {
      if (v == start) {
        Word symbols;
        symbols.reserve(path.size());
        for (std::uint32_t node : path) symbols.push_back(g.nodes.word(node).front());
        out.push_back(canonical_rotation(PeriodicOrbit{std::move(symbols)}));
        if (out.size() > cap)
          throw CapExceededError("periodic orbit enumeration", out.size(), cap);
        continue;
      }
      if (v < start || on_path[v]) continue;
      if (static_cast<int>(path.size()) >= limit) continue;
      on_path[v] = 1;
      path.push_back(v);
      dfs(start, v);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  for (std::size_t s = 0; s < V; ++s) {
    on_path[s] = 1;
    path.assign(1, static_cast<std::uint32_t>(s));
    dfs(s, s);
    on_path[s] = 0;
  }
  std::sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    if (a.period() != b.period()) return a.period() < b.period();
    return compare_words(a.cycle, b.cycle) < 0;
  });
  return out;
}

void walk_words(const Sft& sft, int length, std::uint64_t cap,
                const std::function<void(int, Symbol)>& on_push,
                const std::function<void()>& on_pop,
                const std::function<void(WordView)>& at_leaf) {
  if (length < 1) throw DomainError("walk_words: length must be >= 1");
  const std::uint64_t n = sft.word_count(length);
  if (n > cap) throw CapExceededError("cylinder scan at length " + std::to_string(length), n, cap);
  const int A = sft.alphabet_size();
  Word prefix;
  prefix.reserve(length);
  std::vector<int> next(static_cast<std::size_t>(length) + 1, 0);
  while (true) {
    const int d = static_cast<int>(prefix.size());
    if (d == length) {
      at_leaf(prefix);
      prefix.pop_back();
      on_pop();
      continue;
    }
    int a = next[d];
    bool advanced = false;
    for (; a < A; ++a) {
      if (d == 0 || sft.admissible(prefix.back(), static_cast<Symbol>(a))) {
        next[d] = a + 1;
        prefix.push_back(static_cast<Symbol>(a));
        next[d + 1] = 0;
        on_push(d + 1, static_cast<Symbol>(a));
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      if (d == 0) break;
      prefix.pop_back();
      on_pop();
    }
  }
}

}  // namespace nadd
