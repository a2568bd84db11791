#pragma once

#include <optional>

#include "nadd/equivalence.hpp"

namespace nadd {

// Markov measure of order m on the shift: stationary distribution over
// admissible m-words plus a next-symbol kernel. Order 0 (a Bernoulli measure)
// is allowed on full shifts only. Immutable once validated.
class MarkovMeasure {
 public:
  MarkovMeasure(Sft sft, int order, std::vector<std::vector<double>> kernel,
                std::vector<double> stationary);
  static MarkovMeasure bernoulli(const Sft& sft, std::vector<double> probabilities);

  const Sft& sft() const { return sft_; }
  int order() const { return order_; }
  const WordIndex& states() const { return states_; }
  // kernel()[state][symbol]; zero on inadmissible successors.
  const std::vector<std::vector<double>>& kernel() const { return kernel_; }
  const std::vector<double>& stationary() const { return pi_; }

  // P(x_1 .. x_|w| = w); marginalizes the stationary law for short words and
  // extends by the kernel for long ones.
  double word_probability(WordView w) const;

  // Hidden-Markov encoding with the same cylinder weights.
  CylinderMeasure to_cylinder_measure() const;

 private:
  Sft sft_;
  int order_;
  WordIndex states_;
  std::vector<std::vector<double>> kernel_;
  std::vector<double> pi_;
};

// Kolmogorov-Sinai entropy of a Markov measure; 0 log 0 = 0.
double entropy(const MarkovMeasure& mu);

// Exact ∫ f dmu from the stationary law and the kernel.
double integrate(const LocallyConstantPotential& f, const MarkovMeasure& mu);

// Nonnegative transfer matrix on depth-k words: entry e^{f(w)} on each
// admissible edge w -> w'. Perron data by power iteration with
// Collatz-Wielandt brackets (stop at 1e-13, cap 1e5 iterations).
struct TransferMatrix {
  int depth = 1;
  WordGraph graph;
  std::vector<double> node_weight;  // e^{f(w)}, source convention
  double lambda = 0.0;
  std::vector<double> right;  // max-entry normalized
  std::vector<double> left;
  double residual = 0.0;  // ||Mv - lambda v||_inf, must be <= 1e-10
};

TransferMatrix transfer_matrix(const LocallyConstantPotential& f,
                               std::uint64_t cap = kDefaultWordCap);

// Topological pressure of an additive potential: log of the Perron root.
double pressure_additive(const LocallyConstantPotential& f, std::uint64_t cap = kDefaultWordCap);

// Equilibrium state of f via the Ruelle-Perron-Frobenius construction: a
// Markov measure of order max(depth - 1, 1) built from the Perron vectors.
MarkovMeasure equilibrium_state(const LocallyConstantPotential& f,
                                std::uint64_t cap = kDefaultWordCap);

// |P(f) - (h(mu*) + ∫ f dmu*)| with mu* the RPF equilibrium state.
double variational_check(const LocallyConstantPotential& f, std::uint64_t cap = kDefaultWordCap);

struct PressureEstimate {
  std::vector<int> ns;
  std::vector<double> finite_n;  // (1/n) log Z_n with Z_n = sum of cylinder sups of e^{f_n}
  double point = 0.0;            // last finite-n value
  std::optional<double> lower;   // Fekete enclosure when an almost-additivity
  std::optional<double> upper;   // constant is supplied
};

// Cylinder-sum pressure of a sequence. The enclosure uses sub/super-
// additivity of log Z_n -+ C; the gluing step behind the lower bound is
// exact on full shifts and heuristic on proper subshifts.
PressureEstimate pressure_sequence(const PotentialSequence& seq, int n_max,
                                   std::optional<double> almost_additivity_C = std::nullopt,
                                   std::uint64_t cap = kDefaultWordCap);

struct LyapunovTrace {
  std::vector<std::pair<int, double>> trace;  // (n, (1/n) ∫ f_n dmu)
  double value = 0.0;
};

// Average Lyapunov exponent of the sequence under an invariant Markov
// measure; exact closed form for additive sequences.
LyapunovTrace lyapunov_exponent(const PotentialSequence& seq, const MarkovMeasure& mu, int n_max,
                                std::uint64_t cap = kDefaultWordCap);

enum class GibbsVerdict { gibbs_evidence, weak_gibbs_evidence, fails };
std::string to_string(GibbsVerdict v);

struct GibbsThresholds {
  double gibbs_growth = 0.01;  // max K_n growth over the last half horizon
  // (1/n) log K_n at n_max vs at n_max/2. Bounded corrections drive the
  // measured ratio to 0.5 from above, so the default sits slightly higher.
  double weak_decay = 0.55;
};

struct GibbsReport {
  std::vector<int> ns;
  std::vector<double> log_Kn;  // smallest constant for the two-sided bound
  std::vector<double> trend;   // (1/n) log K_n
  GibbsVerdict verdict = GibbsVerdict::fails;
  std::optional<Word> witness;  // zero-probability admissible cylinder
  double p_target = 0.0;
  GibbsThresholds thresholds;
};

// Smallest K_n with K_n^{-1} <= mu_n(w) / e^{f_n(w) - n p_target} <= K_n over
// all admissible n-cylinders, per n <= n_max, plus a finite-horizon verdict.
GibbsReport gibbs_constants(const CylinderMeasure& mu, const PotentialSequence& seq,
                            double p_target, int n_max, std::uint64_t cap = kDefaultWordCap,
                            GibbsThresholds thresholds = {});
GibbsReport gibbs_constants(const CylinderMeasure& mu, const LocallyConstantPotential& f,
                            double p_target, int n_max, std::uint64_t cap = kDefaultWordCap,
                            GibbsThresholds thresholds = {});

enum class CouplingVerdict { quasi_bernoulli_evidence, weakly_coupled_evidence, fails };
std::string to_string(CouplingVerdict v);

struct QuasiBernoulliReport {
  std::vector<int> ns;          // split positions
  std::vector<double> log_Dn;   // smallest coupling constant at the split
  CouplingVerdict verdict = CouplingVerdict::fails;
  std::optional<Word> witness;  // word with a vanishing coupling ratio
  GibbsThresholds thresholds;   // same plateau/decay knobs
};

// Coupling constants D_n of the measure on the full shift over its alphabet:
// max over m with n+m <= N and all words of the two-sided ratio
// mu_{n+m}(uv) / (mu_n(u) mu_m(v)).
QuasiBernoulliReport quasi_bernoulli_constants(const CylinderMeasure& mu, int N,
                                               std::uint64_t cap = kDefaultWordCap,
                                               GibbsThresholds thresholds = {});

}  // namespace nadd
