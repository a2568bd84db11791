#include "nadd/potential.hpp"

#include <algorithm>

namespace nadd {

LocallyConstantPotential::LocallyConstantPotential(Sft sft, int depth,
                                                   std::vector<double> values_by_rank,
                                                   std::uint64_t cap)
    : sft_(std::move(sft)), depth_(depth), index_(sft_, depth, cap), values_(std::move(values_by_rank)) {
  if (depth < 1) throw DomainError("potential depth must be >= 1");
  if (values_.size() != index_.size())
    throw ConfigError("potential needs one value per admissible depth-" + std::to_string(depth) +
                      " word (" + std::to_string(index_.size()) + " expected, " +
                      std::to_string(values_.size()) + " given)");
  for (double v : values_)
    if (!std::isfinite(v)) throw ConfigError("potential values must be finite");
}

LocallyConstantPotential LocallyConstantPotential::constant(const Sft& sft, double c) {
  return LocallyConstantPotential(sft, 1,
                                  std::vector<double>(static_cast<std::size_t>(sft.alphabet_size()), c));
}

double LocallyConstantPotential::value(WordView w) const {
  if (static_cast<int>(w.size()) < depth_)
    throw DomainError("potential of depth " + std::to_string(depth_) +
                      " evaluated on a shorter word");
  return values_[index_.rank(w.subspan(0, static_cast<std::size_t>(depth_)))];
}

double LocallyConstantPotential::birkhoff_sum(WordView w, int n) const {
  if (static_cast<int>(w.size()) < n + depth_ - 1)
    throw DomainError("birkhoff_sum: word too short for S_" + std::to_string(n));
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += values_[index_.rank(w.subspan(static_cast<std::size_t>(i), static_cast<std::size_t>(depth_)))];
  return s;
}

double LocallyConstantPotential::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

LocallyConstantPotential LocallyConstantPotential::lifted(int new_depth, std::uint64_t cap) const {
  if (new_depth < depth_) throw DomainError("lifted: new depth must not be shallower");
  if (new_depth == depth_) return *this;
  WordIndex ix(sft_, new_depth, cap);
  std::vector<double> v(ix.size());
  for (std::size_t r = 0; r < ix.size(); ++r) v[r] = value(ix.word(r));
  return LocallyConstantPotential(sft_, new_depth, std::move(v), cap);
}

LocallyConstantPotential LocallyConstantPotential::operator*(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= c;
  return LocallyConstantPotential(sft_, depth_, std::move(v));
}

LocallyConstantPotential LocallyConstantPotential::operator+(const LocallyConstantPotential& o) const {
  if (!(sft_ == o.sft_)) throw DomainError("potential arithmetic requires a common shift space");
  const int d = std::max(depth_, o.depth_);
  LocallyConstantPotential a = lifted(d), b = o.lifted(d);
  std::vector<double> v(a.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
  return LocallyConstantPotential(sft_, d, std::move(v));
}

LocallyConstantPotential LocallyConstantPotential::operator-(const LocallyConstantPotential& o) const {
  return *this + (o * -1.0);
}

LocallyConstantPotential coboundary(const LocallyConstantPotential& h) {
  const Sft& sft = h.sft();
  const int k = h.depth();
  WordIndex ix(sft, k + 1);
  std::vector<double> v(ix.size());
  for (std::size_t r = 0; r < ix.size(); ++r) {
    WordView w = ix.word(r);
    v[r] = h.value(w.subspan(0, static_cast<std::size_t>(k))) -
           h.value(w.subspan(1, static_cast<std::size_t>(k)));
  }
  return LocallyConstantPotential(sft, k + 1, std::move(v));
}

namespace {

// One max-plus (or min-plus) sweep; value[v] after t rounds is the extremal
// weight of a t-edge-progression ending at v, vertex weights on sources.
struct VertexDp {
  std::vector<double> cur, next;
  std::vector<std::uint32_t> parent;  // per round, flattened

  void run(const WordGraph& g, const std::vector<double>& node_weight, int rounds, bool maximize,
           bool keep_parents) {
    const std::size_t V = g.node_count();
    cur.assign(V, 0.0);
    for (std::size_t u = 0; u < V; ++u) cur[u] = node_weight[u];
    if (keep_parents) parent.assign(static_cast<std::size_t>(rounds) * V, 0);
    const double bad = maximize ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
    for (int t = 1; t < rounds; ++t) {
      next.assign(V, bad);
      for (std::size_t u = 0; u < V; ++u) {
        const double base = cur[u];
        for (std::uint32_t v : g.successors(u)) {
          const double cand = base + node_weight[v];
          const bool better = maximize ? cand > next[v] : cand < next[v];
          if (better) {
            next[v] = cand;
            if (keep_parents) parent[static_cast<std::size_t>(t) * V + v] = static_cast<std::uint32_t>(u);
          }
        }
      }
      cur.swap(next);
    }
  }
};

}  // namespace

BirkhoffExtrema birkhoff_extrema(const LocallyConstantPotential& f, int n, std::uint64_t cap) {
  if (n < 1) throw DomainError("birkhoff_extrema: horizon must be >= 1");
  const WordGraph g = word_graph(f.sft(), f.depth(), cap);
  const std::size_t V = g.node_count();
  std::vector<double> w(V);
  for (std::size_t u = 0; u < V; ++u) w[u] = f.value_by_rank(u);

  VertexDp hi, lo;
  hi.run(g, w, n, true, true);
  lo.run(g, w, n, false, true);

  BirkhoffExtrema out;
  out.n = n;
  auto reconstruct = [&](const VertexDp& dp, bool maximize, double& value, Word& word) {
    std::size_t best = 0;
    for (std::size_t v = 1; v < V; ++v) {
      if (maximize ? dp.cur[v] > dp.cur[best] : dp.cur[v] < dp.cur[best]) best = v;
    }
    value = dp.cur[best];
    std::vector<std::uint32_t> nodes(static_cast<std::size_t>(n));
    nodes[static_cast<std::size_t>(n) - 1] = static_cast<std::uint32_t>(best);
    for (int t = n - 1; t >= 1; --t)
      nodes[static_cast<std::size_t>(t) - 1] =
          dp.parent[static_cast<std::size_t>(t) * V + nodes[static_cast<std::size_t>(t)]];
    word = to_word(g.nodes.word(nodes[0]));
    for (int t = 1; t < n; ++t) word.push_back(g.nodes.word(nodes[static_cast<std::size_t>(t)]).back());
  };
  reconstruct(hi, true, out.max_value, out.argmax_word);
  reconstruct(lo, false, out.min_value, out.argmin_word);
  return out;
}

std::vector<double> birkhoff_norm_trace(const LocallyConstantPotential& f, int n_max,
                                        std::uint64_t cap) {
  if (n_max < 1) throw DomainError("birkhoff_norm_trace: horizon must be >= 1");
  const WordGraph g = word_graph(f.sft(), f.depth(), cap);
  const std::size_t V = g.node_count();
  std::vector<double> w(V);
  for (std::size_t u = 0; u < V; ++u) w[u] = f.value_by_rank(u);

  std::vector<double> hi = w, lo = w, nhi, nlo;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(n_max));
  auto record = [&](int n) {
    double mx = hi[0], mn = lo[0];
    for (std::size_t v = 1; v < V; ++v) {
      mx = std::max(mx, hi[v]);
      mn = std::min(mn, lo[v]);
    }
    trace.push_back(std::max(std::abs(mx), std::abs(mn)) / n);
  };
  record(1);
  for (int n = 2; n <= n_max; ++n) {
    nhi.assign(V, -std::numeric_limits<double>::infinity());
    nlo.assign(V, std::numeric_limits<double>::infinity());
    for (std::size_t u = 0; u < V; ++u) {
      for (std::uint32_t v : g.successors(u)) {
        nhi[v] = std::max(nhi[v], hi[u] + w[v]);
        nlo[v] = std::min(nlo[v], lo[u] + w[v]);
      }
    }
    hi.swap(nhi);
    lo.swap(nlo);
    record(n);
  }
  return trace;
}

namespace {

// Node budget for Karp's O(V^2) table.
constexpr std::size_t kKarpNodeCap = 4096;

MeanCycle karp_max(const WordGraph& g, std::span<const double> edge_weights) {
  const std::size_t V = g.node_count();
  if (V == 0) throw DomainError("max_mean_cycle: empty graph");
  if (V > kKarpNodeCap)
    throw CapExceededError("Karp mean-cycle table", V, kKarpNodeCap);
  if (edge_weights.size() != g.edge_count())
    throw DomainError("max_mean_cycle: one weight per edge required");

  // D[m][v]: maximal weight of an m-edge walk ending at v, from any start.
  const std::size_t rows = V + 1;
  std::vector<double> D(rows * V, -std::numeric_limits<double>::infinity());
  std::vector<std::uint32_t> parent(rows * V, 0);
  for (std::size_t v = 0; v < V; ++v) D[v] = 0.0;
  for (std::size_t m = 1; m <= V; ++m) {
    const double* prev = &D[(m - 1) * V];
    double* curr = &D[m * V];
    std::uint32_t* par = &parent[m * V];
    for (std::size_t u = 0; u < V; ++u) {
      const auto succ = g.successors(u);
      for (std::size_t s = 0; s < succ.size(); ++s) {
        const std::uint32_t v = succ[s];
        const double cand = prev[u] + edge_weights[g.edge_id(u, s)];
        if (cand > curr[v]) {
          curr[v] = cand;
          par[v] = static_cast<std::uint32_t>(u);
        }
      }
    }
  }

  // mu* = max_v min_m (D_V(v) - D_m(v)) / (V - m).
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_v = 0;
  for (std::size_t v = 0; v < V; ++v) {
    double inner = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < V; ++m) {
      const double ratio = (D[V * V + v] - D[m * V + v]) / static_cast<double>(V - m);
      inner = std::min(inner, ratio);
    }
    if (inner > best) {
      best = inner;
      best_v = v;
    }
  }

  // Any cycle on the optimal V-edge walk into best_v has mean mu*.
  std::vector<std::uint32_t> walk(V + 1);
  walk[V] = static_cast<std::uint32_t>(best_v);
  for (std::size_t m = V; m >= 1; --m) walk[m - 1] = parent[m * V + walk[m]];
  std::vector<std::int64_t> last_seen(V, -1);
  std::size_t cyc_from = 0, cyc_to = 0;
  for (std::size_t i = V + 1; i-- > 0;) {
    if (last_seen[walk[i]] >= 0) {
      cyc_from = i;
      cyc_to = static_cast<std::size_t>(last_seen[walk[i]]);
      break;
    }
    last_seen[walk[i]] = static_cast<std::int64_t>(i);
  }

  MeanCycle out;
  Word symbols;
  double cycle_weight = 0.0;
  for (std::size_t i = cyc_from; i < cyc_to; ++i) {
    const std::size_t u = walk[i], v = walk[i + 1];
    symbols.push_back(g.nodes.word(u).front());
    const auto succ = g.successors(u);
    for (std::size_t s = 0; s < succ.size(); ++s) {
      if (succ[s] == v) {
        cycle_weight += edge_weights[g.edge_id(u, s)];
        break;
      }
    }
  }
  out.cycle = canonical_rotation(PeriodicOrbit{std::move(symbols)});
  out.mean = cycle_weight / static_cast<double>(cyc_to - cyc_from);
  return out;
}

}  // namespace

MeanCycle max_mean_cycle(const WordGraph& g, std::span<const double> edge_weights) {
  return karp_max(g, edge_weights);
}

MeanCycle min_mean_cycle(const WordGraph& g, std::span<const double> edge_weights) {
  std::vector<double> neg(edge_weights.begin(), edge_weights.end());
  for (double& w : neg) w = -w;
  MeanCycle m = karp_max(g, neg);
  m.mean = -m.mean;
  return m;
}

std::vector<double> edge_weights_from_potential(const WordGraph& g,
                                                const LocallyConstantPotential& f) {
  std::vector<double> w(g.edge_count());
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const double fu = f.value(g.nodes.word(u));
    const auto succ = g.successors(u);
    for (std::size_t s = 0; s < succ.size(); ++s) w[g.edge_id(u, s)] = fu;
  }
  return w;
}

SeminormReport quotient_seminorm(const LocallyConstantPotential& f, std::uint64_t cap) {
  const WordGraph g = word_graph(f.sft(), f.depth(), cap);
  const std::vector<double> w = edge_weights_from_potential(g, f);
  MeanCycle hi = max_mean_cycle(g, w);
  MeanCycle lo = min_mean_cycle(g, w);
  SeminormReport r;
  r.max_mean = hi.mean;
  r.min_mean = lo.mean;
  r.value = std::max(hi.mean, -lo.mean);
  r.max_witness = std::move(hi.cycle);
  r.min_witness = std::move(lo.cycle);
  return r;
}

double quotient_distance(const LocallyConstantPotential& f, const LocallyConstantPotential& g,
                         std::uint64_t cap) {
  return quotient_seminorm(f - g, cap).value;
}

SeminormReport seminorm_convergence_trace(const LocallyConstantPotential& f, int n_max,
                                          std::uint64_t cap) {
  SeminormReport r = quotient_seminorm(f, cap);
  const std::vector<double> trace = birkhoff_norm_trace(f, n_max, cap);
  r.birkhoff_trace.reserve(trace.size());
  for (int n = 1; n <= n_max; ++n)
    r.birkhoff_trace.emplace_back(n, trace[static_cast<std::size_t>(n) - 1]);
  r.final_gap = trace.back() - r.value;
  return r;
}

std::pair<double, double> invariant_average_range(const LocallyConstantPotential& f,
                                                  std::uint64_t cap) {
  const WordGraph g = word_graph(f.sft(), f.depth(), cap);
  const std::vector<double> w = edge_weights_from_potential(g, f);
  return {min_mean_cycle(g, w).mean, max_mean_cycle(g, w).mean};
}

}  // namespace nadd
