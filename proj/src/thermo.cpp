#include "nadd/thermo.hpp"

#include <algorithm>

namespace nadd {

std::string to_string(GibbsVerdict v) {
  switch (v) {
    case GibbsVerdict::gibbs_evidence: return "gibbs_evidence";
    case GibbsVerdict::weak_gibbs_evidence: return "weak_gibbs_evidence";
    case GibbsVerdict::fails: return "fails";
  }
  return "?";
}

std::string to_string(CouplingVerdict v) {
  switch (v) {
    case CouplingVerdict::quasi_bernoulli_evidence: return "quasi_bernoulli_evidence";
    case CouplingVerdict::weakly_coupled_evidence: return "weakly_coupled_evidence";
    case CouplingVerdict::fails: return "fails";
  }
  return "?";
}

MarkovMeasure::MarkovMeasure(Sft sft, int order, std::vector<std::vector<double>> kernel,
                             std::vector<double> stationary)
    : sft_(std::move(sft)), order_(order), states_(sft_, order), kernel_(std::move(kernel)),
      pi_(std::move(stationary)) {
  if (order < 0) throw ConfigError("Markov measure order must be >= 0");
  if (order == 0 && !sft_.is_full_shift())
    throw ConfigError("order-0 (Bernoulli) measures require a full shift");
  const std::size_t S = states_.size();
  const int A = sft_.alphabet_size();
  if (kernel_.size() != S || pi_.size() != S)
    throw ConfigError("Markov measure needs a kernel row and a stationary weight per state");

  double pi_total = 0.0;
  for (double x : pi_) {
    if (x < -1e-15) throw ConfigError("stationary distribution must be nonnegative");
    pi_total += x;
  }
  if (std::abs(pi_total - 1.0) > 1e-10)
    throw ConfigError("stationary distribution must sum to 1");

  std::vector<double> flow(S, 0.0);
  for (std::size_t u = 0; u < S; ++u) {
    if (kernel_[u].size() != static_cast<std::size_t>(A))
      throw ConfigError("kernel rows must have one entry per symbol");
    double row = 0.0;
    for (int a = 0; a < A; ++a) {
      const double p = kernel_[u][static_cast<std::size_t>(a)];
      if (p < 0.0) throw ConfigError("kernel entries must be nonnegative");
      if (p > 0.0 && order > 0) {
        WordView u_word = states_.word(u);
        if (!sft_.admissible(u_word.back(), static_cast<Symbol>(a)))
          throw ConfigError("kernel places mass on an inadmissible transition");
      }
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-12)
      throw ConfigError("kernel row " + std::to_string(u) + " sums to " + std::to_string(row));
    // Accumulate the pushforward for the stationarity check.
    if (order > 0) {
      WordView u_word = states_.word(u);
      Word next(u_word.begin() + 1, u_word.end());
      next.push_back(0);
      for (int a = 0; a < A; ++a) {
        const double p = kernel_[u][static_cast<std::size_t>(a)];
        if (p == 0.0) continue;
        next.back() = static_cast<Symbol>(a);
        flow[states_.rank(next)] += pi_[u] * p;
      }
    }
  }
  if (order_ > 0) {
    for (std::size_t u = 0; u < S; ++u)
      if (std::abs(flow[u] - pi_[u]) > 1e-10)
        throw ConfigError("stationary distribution is not invariant under the kernel");
  }
}

MarkovMeasure MarkovMeasure::bernoulli(const Sft& sft, std::vector<double> probabilities) {
  if (static_cast<int>(probabilities.size()) != sft.alphabet_size())
    throw ConfigError("Bernoulli measure needs one probability per symbol");
  return MarkovMeasure(sft, 0, {probabilities}, {1.0});
}

double MarkovMeasure::word_probability(WordView w) const {
  if (!sft_.word_admissible(w)) return 0.0;
  const int m = order_;
  if (static_cast<int>(w.size()) <= m) {
    // Prefix marginal of the stationary law; states are sorted, so the
    // matching block is contiguous.
    double total = 0.0;
    for (std::size_t u = 0; u < states_.size(); ++u) {
      WordView s = states_.word(u);
      if (std::equal(w.begin(), w.end(), s.begin())) total += pi_[u];
    }
    return total;
  }
  double p = m == 0 ? 1.0 : pi_[states_.rank(w.subspan(0, static_cast<std::size_t>(m)))];
  Word state(w.begin(), w.begin() + m);
  for (std::size_t i = static_cast<std::size_t>(m); i < w.size(); ++i) {
    const std::size_t u = m == 0 ? 0 : states_.rank(state);
    p *= kernel_[u][w[i]];
    if (p == 0.0) return 0.0;
    if (m > 0) {
      state.erase(state.begin());
      state.push_back(w[i]);
    }
  }
  return p;
}

CylinderMeasure MarkovMeasure::to_cylinder_measure() const {
  const std::size_t S = states_.size();
  const int A = sft_.alphabet_size();
  std::vector<Matrix> em(static_cast<std::size_t>(A), Matrix(static_cast<int>(S), static_cast<int>(S)));
  for (std::size_t u = 0; u < S; ++u) {
    for (int a = 0; a < A; ++a) {
      const double p = kernel_[u][static_cast<std::size_t>(a)];
      if (p == 0.0) continue;
      std::size_t v = 0;
      if (order_ > 0) {
        WordView u_word = states_.word(u);
        Word next(u_word.begin() + 1, u_word.end());
        next.push_back(static_cast<Symbol>(a));
        v = states_.rank(next);
      }
      em[static_cast<std::size_t>(a)].at(static_cast<int>(u), static_cast<int>(v)) = p;
    }
  }
  return CylinderMeasure(std::move(em), pi_);
}

double entropy(const MarkovMeasure& mu) {
  double h = 0.0;
  for (std::size_t u = 0; u < mu.states().size(); ++u) {
    const double pu = mu.stationary()[u];
    if (pu == 0.0) continue;
    for (double p : mu.kernel()[u]) {
      if (p > 0.0) h -= pu * p * std::log(p);
    }
  }
  return h;
}

double integrate(const LocallyConstantPotential& f, const MarkovMeasure& mu) {
  if (!(f.sft() == mu.sft()))
    throw DomainError("integrate: potential and measure live on different shift spaces");
  double total = 0.0;
  for (std::size_t r = 0; r < f.index().size(); ++r)
    total += mu.word_probability(f.index().word(r)) * f.value_by_rank(r);
  return total;
}

namespace {

struct PerronResult {
  double lambda = 0.0;
  std::vector<double> vec;
};

// Collatz-Wielandt power iteration for the source-weighted edge operator.
// forward: (Mv)_u = weight_u * sum_{v in succ(u)} v_v
// transposed: (M^T v)_v = sum_{u: v in succ(u)} weight_u * v_u
PerronResult perron_vector(const WordGraph& g, const std::vector<double>& weight, bool transposed) {
  const std::size_t V = g.node_count();
  std::vector<double> v(V, 1.0 / static_cast<double>(V)), mv(V);
  double lambda = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    std::fill(mv.begin(), mv.end(), 0.0);
    if (!transposed) {
      for (std::size_t u = 0; u < V; ++u) {
        double s = 0.0;
        for (std::uint32_t t : g.successors(u)) s += v[t];
        mv[u] = weight[u] * s;
      }
    } else {
      for (std::size_t u = 0; u < V; ++u) {
        const double wu = weight[u] * v[u];
        for (std::uint32_t t : g.successors(u)) mv[t] += wu;
      }
    }
    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity(), norm = 0.0;
    for (std::size_t u = 0; u < V; ++u) {
      if (v[u] > 0.0) {
        const double r = mv[u] / v[u];
        rmax = std::max(rmax, r);
        rmin = std::min(rmin, r);
      }
      norm += mv[u];
    }
    lambda = 0.5 * (rmax + rmin);
    for (std::size_t u = 0; u < V; ++u) v[u] = mv[u] / norm;
    if (rmax - rmin <= 1e-13 * std::max(1.0, lambda)) break;
  }
  double top = *std::max_element(v.begin(), v.end());
  for (double& x : v) x /= top;
  return {lambda, std::move(v)};
}

}  // namespace

TransferMatrix transfer_matrix(const LocallyConstantPotential& f, std::uint64_t cap) {
  TransferMatrix t;
  t.depth = f.depth();
  t.graph = word_graph(f.sft(), t.depth, cap);
  const std::size_t V = t.graph.node_count();
  t.node_weight.resize(V);
  for (std::size_t u = 0; u < V; ++u) t.node_weight[u] = std::exp(f.value_by_rank(u));
  PerronResult right = perron_vector(t.graph, t.node_weight, false);
  PerronResult left = perron_vector(t.graph, t.node_weight, true);
  t.lambda = right.lambda;
  t.right = std::move(right.vec);
  t.left = std::move(left.vec);
  double res = 0.0;
  for (std::size_t u = 0; u < V; ++u) {
    double s = 0.0;
    for (std::uint32_t v : t.graph.successors(u)) s += t.right[v];
    res = std::max(res, std::abs(t.node_weight[u] * s - t.lambda * t.right[u]));
  }
  t.residual = res;
  if (res > 1e-10)
    throw Error("transfer matrix power iteration did not converge (residual " +
                std::to_string(res) + ")");
  return t;
}

double pressure_additive(const LocallyConstantPotential& f, std::uint64_t cap) {
  return std::log(transfer_matrix(f, cap).lambda);
}

MarkovMeasure equilibrium_state(const LocallyConstantPotential& f, std::uint64_t cap) {
  const TransferMatrix t = transfer_matrix(f, cap);
  const int k = t.depth;
  const Sft& sft = f.sft();
  const int A = sft.alphabet_size();
  const std::size_t V = t.graph.node_count();

  // Stationary law of the k-word chain P(w, w') = v_{w'} / sum_succ v.
  std::vector<double> pi_k(V);
  double z = 0.0;
  for (std::size_t u = 0; u < V; ++u) {
    pi_k[u] = t.left[u] * t.right[u];
    z += pi_k[u];
  }
  for (double& x : pi_k) x /= z;

  if (k == 1) {
    std::vector<std::vector<double>> kernel(V, std::vector<double>(static_cast<std::size_t>(A), 0.0));
    for (std::size_t u = 0; u < V; ++u) {
      double s = 0.0;
      for (std::uint32_t v : t.graph.successors(u)) s += t.right[v];
      for (std::uint32_t v : t.graph.successors(u))
        kernel[u][t.graph.nodes.word(v).front()] = t.right[v] / s;
    }
    return MarkovMeasure(sft, 1, std::move(kernel), std::move(pi_k));
  }

  // The chain depends on w only through its (k-1)-suffix, so the measure is
  // Markov of order k-1: states are (k-1)-words, the kernel reads off the
  // right Perron vector.
  WordIndex states(sft, k - 1, cap);
  const std::size_t S = states.size();
  std::vector<std::vector<double>> kernel(S, std::vector<double>(static_cast<std::size_t>(A), 0.0));
  Word buf(static_cast<std::size_t>(k));
  for (std::size_t s = 0; s < S; ++s) {
    WordView u = states.word(s);
    std::copy(u.begin(), u.end(), buf.begin());
    double total = 0.0;
    std::vector<std::pair<int, double>> entries;
    for (int a = 0; a < A; ++a) {
      if (!sft.admissible(u.back(), static_cast<Symbol>(a))) continue;
      buf.back() = static_cast<Symbol>(a);
      auto r = t.graph.nodes.find(buf);
      if (!r) continue;
      entries.emplace_back(a, t.right[*r]);
      total += t.right[*r];
    }
    for (auto [a, w] : entries) kernel[s][static_cast<std::size_t>(a)] = w / total;
  }
  // Prefix-marginalize the k-word stationary law onto (k-1)-word states.
  std::vector<double> pi(S, 0.0);
  for (std::size_t u = 0; u < V; ++u) {
    WordView w = t.graph.nodes.word(u);
    pi[states.rank(w.subspan(0, static_cast<std::size_t>(k - 1)))] += pi_k[u];
  }
  return MarkovMeasure(sft, k - 1, std::move(kernel), std::move(pi));
}

double variational_check(const LocallyConstantPotential& f, std::uint64_t cap) {
  const MarkovMeasure mu = equilibrium_state(f, cap);
  return std::abs(pressure_additive(f, cap) - (entropy(mu) + integrate(f, mu)));
}

PressureEstimate pressure_sequence(const PotentialSequence& seq, int n_max,
                                   std::optional<double> almost_additivity_C, std::uint64_t cap) {
  if (n_max < 1) throw DomainError("pressure_sequence: horizon must be >= 1");
  PressureEstimate est;
  for (int n = 1; n <= n_max; ++n) {
    // log Z_n by streaming log-sum-exp over cylinder sups.
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> tops;
    auto cur = seq.cursor();
    walk_words(
        seq.sft(), n, cap, [&](int, Symbol a) { cur->push(a); }, [&] { cur->pop(); },
        [&](WordView) {
          const double hi = cur->bounds(n).hi;
          tops.push_back(hi);
          peak = std::max(peak, hi);
        });
    double sum = 0.0;
    for (double x : tops) sum += std::exp(x - peak);
    const double logZ = peak + std::log(sum);
    est.ns.push_back(n);
    est.finite_n.push_back(logZ / n);
  }
  est.point = est.finite_n.back();
  if (almost_additivity_C) {
    const double C = *almost_additivity_C;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
      const double logZ = est.finite_n[static_cast<std::size_t>(n) - 1] * n;
      lo = std::max(lo, (logZ - C) / n);
      hi = std::min(hi, (logZ + C) / n);
    }
    est.lower = lo;
    est.upper = hi;
  }
  return est;
}

LyapunovTrace lyapunov_exponent(const PotentialSequence& seq, const MarkovMeasure& mu, int n_max,
                                std::uint64_t cap) {
  if (n_max < 1) throw DomainError("lyapunov_exponent: horizon must be >= 1");
  if (!(seq.sft() == mu.sft()))
    throw DomainError("lyapunov_exponent: sequence and measure live on different shift spaces");
  LyapunovTrace out;
  for (int n = 1; n <= n_max; ++n) {
    const int L = seq.window(n);
    double acc = 0.0;
    auto cur = seq.cursor();
    walk_words(
        seq.sft(), L, cap, [&](int, Symbol a) { cur->push(a); }, [&] { cur->pop(); },
        [&](WordView w) {
          const double p = mu.word_probability(w);
          if (p == 0.0) return;
          acc += p * cur->bounds(n).mid();
        });
    out.trace.emplace_back(n, acc / n);
  }
  out.value = seq.kind() == SequenceKind::additive ? integrate(*seq.generator(), mu)
                                                   : out.trace.back().second;
  return out;
}

namespace {

GibbsVerdict finite_horizon_verdict(const std::vector<double>& log_Kn,
                                    const GibbsThresholds& th) {
  const std::size_t n_max = log_Kn.size();
  if (n_max < 4) return GibbsVerdict::fails;
  double max_half = 0.0, max_all = 0.0;
  const std::size_t half = n_max / 2;
  for (std::size_t i = 0; i < n_max; ++i) {
    max_all = std::max(max_all, log_Kn[i]);
    if (i < half) max_half = std::max(max_half, log_Kn[i]);
  }
  // Gibbs evidence: the constants have essentially stopped growing.
  const double growth = std::exp(max_all) / std::exp(max_half) - 1.0;
  if (growth < th.gibbs_growth) return GibbsVerdict::gibbs_evidence;
  // Weak Gibbs evidence: (1/n) log K_n decays by at least the factor.
  const double at_half = log_Kn[half - 1] / static_cast<double>(half);
  const double at_end = log_Kn[n_max - 1] / static_cast<double>(n_max);
  if (at_end < th.weak_decay * at_half) return GibbsVerdict::weak_gibbs_evidence;
  return GibbsVerdict::fails;
}

}  // namespace

GibbsReport gibbs_constants(const CylinderMeasure& mu, const PotentialSequence& seq,
                            double p_target, int n_max, std::uint64_t cap,
                            GibbsThresholds thresholds) {
  if (n_max < 1) throw DomainError("gibbs_constants: horizon must be >= 1");
  if (mu.symbol_count() != seq.sft().alphabet_size())
    throw DomainError("gibbs_constants: measure and sequence alphabets differ");
  GibbsReport rep;
  rep.p_target = p_target;
  rep.thresholds = thresholds;
  for (int n = 1; n <= n_max && !rep.witness; ++n) {
    const int L = seq.window(n);
    double worst = 0.0;
    std::optional<Word> witness;
    auto cur = seq.cursor();
    std::vector<std::vector<double>> rows;
    rows.push_back(mu.stationary());
    int depth = 0;
    walk_words(
        seq.sft(), L, cap,
        [&](int, Symbol a) {
          ++depth;
          cur->push(a);
          if (depth <= n) rows.push_back(vec_mat(rows.back(), mu.emission(a)));
        },
        [&] {
          if (depth <= n) rows.pop_back();
          --depth;
          cur->pop();
        },
        [&](WordView w) {
          if (witness) return;
          double m = 0.0;
          for (double x : rows.back()) m += x;
          if (!(m > 0.0)) {
            witness = to_word(w.subspan(0, static_cast<std::size_t>(n)));
            return;
          }
          const Interval fn = cur->bounds(n);
          const double lo = std::log(m) - (fn.hi - n * p_target);
          const double hi = std::log(m) - (fn.lo - n * p_target);
          worst = std::max(worst, std::max(std::abs(lo), std::abs(hi)));
        });
    if (witness) {
      rep.witness = std::move(witness);
      rep.verdict = GibbsVerdict::fails;
      break;
    }
    rep.ns.push_back(n);
    rep.log_Kn.push_back(worst);
    rep.trend.push_back(worst / n);
  }
  if (!rep.witness) rep.verdict = finite_horizon_verdict(rep.log_Kn, thresholds);
  return rep;
}

GibbsReport gibbs_constants(const CylinderMeasure& mu, const LocallyConstantPotential& f,
                            double p_target, int n_max, std::uint64_t cap,
                            GibbsThresholds thresholds) {
  return gibbs_constants(mu, PotentialSequence::additive(f), p_target, n_max, cap, thresholds);
}

QuasiBernoulliReport quasi_bernoulli_constants(const CylinderMeasure& mu, int N, std::uint64_t cap,
                                               GibbsThresholds thresholds) {
  if (N < 2) throw DomainError("quasi_bernoulli_constants: horizon must be >= 2");
  const int A = mu.symbol_count();
  QuasiBernoulliReport rep;
  rep.thresholds = thresholds;

  // Weak coupling requires positive symbol marginals.
  for (int a = 0; a < A; ++a) {
    if (!(mu.measure(Word{static_cast<Symbol>(a)}) > 0.0)) {
      rep.witness = Word{static_cast<Symbol>(a)};
      rep.verdict = CouplingVerdict::fails;
      return rep;
    }
  }

  // Dense mu tables per length over the full alphabet tree.
  std::uint64_t need = 0, power = 1;
  for (int l = 1; l <= N; ++l) {
    power *= static_cast<std::uint64_t>(A);
    need += power;
  }
  if (need > cap) throw CapExceededError("quasi-Bernoulli table", need, cap);
  std::vector<std::vector<double>> table(static_cast<std::size_t>(N) + 1);
  {
    std::vector<std::vector<double>> rows;
    rows.push_back(mu.stationary());
    std::uint64_t sz = 1;
    for (int l = 1; l <= N; ++l) {
      sz *= static_cast<std::uint64_t>(A);
      table[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(sz), 0.0);
    }
    std::function<void(int, std::uint64_t)> rec = [&](int depth, std::uint64_t code) {
      if (depth > 0) {
        double m = 0.0;
        for (double x : rows.back()) m += x;
        table[static_cast<std::size_t>(depth)][code] = m;
      }
      if (depth == N) return;
      for (int a = 0; a < A; ++a) {
        rows.push_back(vec_mat(rows.back(), mu.emission(static_cast<Symbol>(a))));
        rec(depth + 1, code * A + static_cast<std::uint64_t>(a));
        rows.pop_back();
      }
    };
    rec(0, 0);
  }

  rep.ns.assign(static_cast<std::size_t>(N) - 1, 0);
  rep.log_Dn.assign(static_cast<std::size_t>(N) - 1, 0.0);
  for (int n = 1; n < N; ++n) {
    rep.ns[static_cast<std::size_t>(n) - 1] = n;
    double worst = 1.0;
    for (int m = 1; n + m <= N; ++m) {
      std::uint64_t um = 1;
      for (int i = 0; i < m; ++i) um *= static_cast<std::uint64_t>(A);
      const auto& whole = table[static_cast<std::size_t>(n + m)];
      const auto& head = table[static_cast<std::size_t>(n)];
      const auto& tail = table[static_cast<std::size_t>(m)];
      for (std::uint64_t cu = 0; cu < head.size(); ++cu) {
        for (std::uint64_t cv = 0; cv < um; ++cv) {
          const double denom = head[cu] * tail[cv];
          const double numer = whole[cu * um + cv];
          if (denom == 0.0) continue;  // vacuous split
          if (!(numer > 0.0)) {
            // Decode the witness word.
            Word w(static_cast<std::size_t>(n + m));
            std::uint64_t c = cu * um + cv;
            for (int i = n + m - 1; i >= 0; --i) {
              w[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % A);
              c /= static_cast<std::uint64_t>(A);
            }
            rep.witness = std::move(w);
            rep.verdict = CouplingVerdict::fails;
            return rep;
          }
          const double r = numer / denom;
          worst = std::max(worst, std::max(r, 1.0 / r));
        }
      }
    }
    rep.log_Dn[static_cast<std::size_t>(n) - 1] = std::log(worst);
  }

  const GibbsVerdict g = finite_horizon_verdict(rep.log_Dn, thresholds);
  rep.verdict = g == GibbsVerdict::gibbs_evidence  ? CouplingVerdict::quasi_bernoulli_evidence
                : g == GibbsVerdict::weak_gibbs_evidence ? CouplingVerdict::weakly_coupled_evidence
                                                         : CouplingVerdict::fails;
  return rep;
}

}  // namespace nadd
