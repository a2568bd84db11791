#pragma once

#include <functional>
#include <memory>

#include "nadd/potential.hpp"

namespace nadd {

enum class SequenceKind { additive, cocycle, measure_log, custom };
enum class CocycleNorm { entry_sum, operator_two };

std::string to_string(SequenceKind k);
std::string to_string(CocycleNorm k);

// One strictly positive d x d matrix per symbol; f_n(x) = log h(M_{x_1}...M_{x_n})
// with h the entry sum (default) or the operator 2-norm. Strict positivity is
// required: it makes the sequence almost additive.
class MatrixCocycle {
 public:
  MatrixCocycle(std::vector<Matrix> per_symbol, CocycleNorm norm = CocycleNorm::entry_sum);

  int dimension() const { return per_symbol_.empty() ? 0 : per_symbol_[0].rows; }
  int symbol_count() const { return static_cast<int>(per_symbol_.size()); }
  const Matrix& matrix(Symbol a) const { return per_symbol_[a]; }
  CocycleNorm norm_kind() const { return norm_; }
  double log_norm(const Matrix& product) const;

 private:
  std::vector<Matrix> per_symbol_;
  CocycleNorm norm_;
};

// Hidden-Markov cylinder weights mu_n(a_1..a_n) = p * N_{a_1} ... N_{a_n} * 1
// with nonnegative N_a summing to a stochastic matrix Q and p stationary for
// Q; this yields a shift-invariant measure with exactly computable cylinder
// probabilities. Bernoulli measures are the 1-state case.
class CylinderMeasure {
 public:
  // Pass an empty `stationary` to have it computed from Q.
  CylinderMeasure(std::vector<Matrix> emissions, std::vector<double> stationary = {});
  static CylinderMeasure bernoulli(std::vector<double> probabilities);

  int symbol_count() const { return static_cast<int>(emissions_.size()); }
  int state_dim() const { return emissions_.empty() ? 0 : emissions_[0].rows; }
  const Matrix& emission(Symbol a) const { return emissions_[a]; }
  const std::vector<double>& stationary() const { return p_; }
  bool strictly_positive() const;

  double measure(WordView w) const;  // mu_n of the cylinder, n = |w|

 private:
  std::vector<Matrix> emissions_;
  std::vector<double> p_;
};

// Incremental evaluator used by exhaustive cylinder scans: push/pop symbols
// along a depth-first walk, read off bounds of f_n from the current prefix.
class SequenceCursor {
 public:
  virtual ~SequenceCursor() = default;
  virtual void push(Symbol a) = 0;
  virtual void pop() = 0;
  virtual int depth() const = 0;
  // Exact bounds of f_n on the cylinder of the current prefix. Requires
  // depth() >= n; the result is a point when the prefix is at least the
  // window of n symbols wide (always, for cylinder-constant kinds).
  virtual Interval bounds(int n) const = 0;
};

// The sequence F = (f_n). Values are exposed per cylinder: bounds(n, w) gives
// the exact inf/sup of f_n over [w]. Additive, cocycle and measure-log kinds
// produce point values once the word is window(n) symbols long.
class PotentialSequence {
 public:
  using CustomFn = std::function<Interval(int n, WordView prefix_of_length_n)>;

  static PotentialSequence additive(LocallyConstantPotential generator);
  static PotentialSequence cocycle(Sft sft, MatrixCocycle cocycle);
  static PotentialSequence measure_log(Sft sft, CylinderMeasure measure);
  static PotentialSequence custom(Sft sft, CustomFn fn, bool cylinder_constant);

  SequenceKind kind() const { return kind_; }
  const Sft& sft() const { return sft_; }
  bool cylinder_constant() const { return cylinder_constant_; }
  const LocallyConstantPotential* generator() const { return generator_.get(); }
  const MatrixCocycle* cocycle_data() const { return cocycle_.get(); }
  const CylinderMeasure* measure_data() const { return measure_.get(); }

  // Number of leading symbols that pin f_n down to a single value.
  int window(int n) const { return n + slack_; }
  int slack() const { return slack_; }

  Interval bounds(int n, WordView w) const;
  // Point value of f_n; requires |w| >= window(n).
  double value(int n, WordView w) const;
  // Convenience evaluation on a word: n = |w| - slack, i.e. f_|w| for
  // cylinder-constant kinds and the path sum along w for additive ones.
  double evaluate(WordView w) const;

  std::unique_ptr<SequenceCursor> cursor() const;

 private:
  PotentialSequence() = default;
  friend PotentialSequence scale_and_add(const std::vector<std::pair<double, PotentialSequence>>&);

  SequenceKind kind_ = SequenceKind::custom;
  Sft sft_ = Sft::full_shift(1);
  bool cylinder_constant_ = false;
  int slack_ = 0;
  std::shared_ptr<const LocallyConstantPotential> generator_;
  std::shared_ptr<const MatrixCocycle> cocycle_;
  std::shared_ptr<const CylinderMeasure> measure_;
  CustomFn custom_;
  // scale_and_add combination terms (empty unless built by it)
  std::vector<std::pair<double, std::shared_ptr<const PotentialSequence>>> combo_;
};

// Sum_i c_i F_i as a sequence on the common shift space. All-additive input
// collapses to an additive sequence with the combined generator; otherwise a
// custom cylinder-constant-preserving combination is returned.
PotentialSequence scale_and_add(const std::vector<std::pair<double, PotentialSequence>>& terms);

enum class AdditivityClass { additive, almost_additive_evidence, inconclusive };
std::string to_string(AdditivityClass c);

struct AdditivityReport {
  int horizon = 0;
  double c_estimate = 0.0;  // max over n+m <= horizon of ||f_{n+m} - f_n - f_m o T^n||
  std::vector<std::tuple<int, int, double>> table;  // (n, m, defect)
  std::vector<double> c_by_total;                   // running max by n+m
  AdditivityClass classification = AdditivityClass::inconclusive;
  double tolerance = kDefaultTolerance;
};

// Exhaustive almost-additivity defect over all admissible words and splits
// with n + m <= N. Exact for cylinder-constant kinds and for additive
// sequences; an outer bound for interval-valued custom sequences.
AdditivityReport almost_additivity_constant(const PotentialSequence& seq, int N,
                                            std::uint64_t cap = kDefaultWordCap,
                                            double tol = kDefaultTolerance);

struct DefectPoint {
  int n = 0;
  double delta = 0.0;  // (1/n) ||f_n - S_n f||_inf
};

struct DefectTrace {
  std::vector<DefectPoint> points;
  std::vector<double> tail_max;  // tail_max[i] = max of delta over points i..end
};

// Exact sup-norm defects (1/n)||f_n - S_n f||_inf of the sequence against a
// candidate additive potential, per requested n.
DefectTrace asymptotic_defect(const PotentialSequence& seq, const LocallyConstantPotential& f,
                              std::span<const int> n_list, std::uint64_t cap = kDefaultWordCap);

struct VariationReport {
  int horizon = 0;
  std::vector<double> var_n;           // sup over pairs agreeing on n symbols
  bool bounded_flag = false;           // plateau heuristic over the horizon
  std::vector<double> moderate_trend;  // var_n / n
};

// Bounded/moderate variation diagnostics: var_n is zero for cylinder-constant
// kinds (no enumeration needed) and the boundary oscillation of S_n f for
// additive kinds.
VariationReport variation_profile(const PotentialSequence& seq, int N,
                                  std::uint64_t cap = kDefaultWordCap);

namespace detail {
// Exact extrema (u_min, u_max) of u_n = f_n - S_n f over X.
std::pair<double, double> correction_extrema(const PotentialSequence& seq,
                                             const LocallyConstantPotential& f, int n,
                                             std::uint64_t cap = kDefaultWordCap);
}  // namespace detail

}  // namespace nadd
