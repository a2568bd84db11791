#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nadd/potential.hpp"
#include "nadd/sft.hpp"

namespace nadd::testing {

// Deterministic RNG so frozen expectations stay frozen across platforms.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline LocallyConstantPotential random_potential(const Sft& sft, int depth, SplitMix64& rng,
                                                 double lo = -2.0, double hi = 2.0) {
  WordIndex ix(sft, depth);
  std::vector<double> v(ix.size());
  for (double& x : v) x = rng.uniform(lo, hi);
  return LocallyConstantPotential(sft, depth, std::move(v));
}

// Oracle: every simple cycle of the graph by depth-first search, reported as
// (total edge weight, length). Independent of the Karp implementation.
inline void for_each_simple_cycle(const WordGraph& g, std::span<const double> edge_weights,
                                  const std::function<void(double, int)>& visit) {
  const std::size_t V = g.node_count();
  std::vector<std::uint8_t> on_path(V, 0);
  std::vector<std::size_t> path;
  std::function<void(std::size_t, std::size_t, double)> dfs = [&](std::size_t start, std::size_t u,
                                                                  double weight) {
    const auto succ = g.successors(u);
    for (std::size_t s = 0; s < succ.size(); ++s) {
      const std::uint32_t v = succ[s];
      const double w = weight + edge_weights[g.edge_id(u, s)];
      if (v == start) {
        visit(w, static_cast<int>(path.size()));
        continue;
      }
      if (v < start || on_path[v]) continue;
      on_path[v] = 1;
      path.push_back(v);
      dfs(start, v, w);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  for (std::size_t s = 0; s < V; ++s) {
    on_path[s] = 1;
    path.assign(1, s);
    dfs(s, s, 0.0);
    on_path[s] = 0;
  }
}

// Oracle value for the maximum cycle mean by exhaustive enumeration.
inline double brute_force_max_cycle_mean(const WordGraph& g, std::span<const double> edge_weights) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_simple_cycle(g, edge_weights, [&](double w, int len) {
    best = std::max(best, w / len);
  });
  return best;
}

inline double brute_force_min_cycle_mean(const WordGraph& g, std::span<const double> edge_weights) {
  double best = std::numeric_limits<double>::infinity();
  for_each_simple_cycle(g, edge_weights, [&](double w, int len) {
    best = std::min(best, w / len);
  });
  return best;
}

// Oracle: extrema of S_n f by enumerating every admissible (n+k-1)-word.
inline std::pair<double, double> brute_force_birkhoff_extrema(const LocallyConstantPotential& f,
                                                              int n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Word& w : enumerate_words(f.sft(), n + f.depth() - 1)) {
    const double s = f.birkhoff_sum(w, n);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

}  // namespace nadd::testing
