#pragma once

#include "nadd/sft.hpp"

namespace nadd {

// Continuous potential depending on the first `depth` symbols only: one real
// value per admissible depth-word. These are the computable dense subclass of
// C(X); all operations below are exact on them.
class LocallyConstantPotential {
 public:
  LocallyConstantPotential(Sft sft, int depth, std::vector<double> values_by_rank,
                           std::uint64_t cap = kDefaultWordCap);
  static LocallyConstantPotential constant(const Sft& sft, double c);

  const Sft& sft() const { return sft_; }
  int depth() const { return depth_; }
  const WordIndex& index() const { return index_; }
  const std::vector<double>& values() const { return values_; }

  double value_by_rank(std::size_t r) const { return values_[r]; }
  // Value on the cylinder of w; uses the first `depth` symbols.
  double value(WordView w) const;
  // S_n f on the cylinder of w; requires |w| >= n + depth - 1.
  double birkhoff_sum(WordView w, int n) const;
  double sup_norm() const;

  // Same function expressed at a deeper depth; values on cylinders unchanged.
  LocallyConstantPotential lifted(int new_depth, std::uint64_t cap = kDefaultWordCap) const;

  LocallyConstantPotential operator*(double c) const;
  LocallyConstantPotential operator+(const LocallyConstantPotential& o) const;
  LocallyConstantPotential operator-(const LocallyConstantPotential& o) const;

 private:
  Sft sft_;
  int depth_;
  WordIndex index_;
  std::vector<double> values_;
};

// f = h - h∘T, one depth deeper than h. S_n f telescopes to h - h∘T^n.
LocallyConstantPotential coboundary(const LocallyConstantPotential& h);

struct BirkhoffExtrema {
  int n = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  Word argmin_word;  // length n + depth - 1
  Word argmax_word;

  double sup_norm() const { return std::max(std::abs(min_value), std::abs(max_value)); }
};

// Exact extrema of S_n f over X by max-plus / min-plus dynamic programming on
// the depth-k word graph; O(n * edges), never enumerates |A|^n words.
BirkhoffExtrema birkhoff_extrema(const LocallyConstantPotential& f, int n,
                                 std::uint64_t cap = kDefaultWordCap);

// (1/n) ||S_n f||_inf for n = 1..n_max in one sweep (no witnesses).
std::vector<double> birkhoff_norm_trace(const LocallyConstantPotential& f, int n_max,
                                        std::uint64_t cap = kDefaultWordCap);

struct MeanCycle {
  double mean = 0.0;
  PeriodicOrbit cycle;
};

// Karp's length-indexed dynamic programming, run from a multi-source so no
// -inf bookkeeping is needed (every node of a primitive word graph has a
// predecessor). Ties are broken toward the smallest predecessor and the
// witness is reported in its lexicographically smallest rotation, so results
// are deterministic. The witness extraction is sound: at the optimal node
// every cycle on the optimal length-V walk attains the maximum mean.
MeanCycle max_mean_cycle(const WordGraph& g, std::span<const double> edge_weights);
MeanCycle min_mean_cycle(const WordGraph& g, std::span<const double> edge_weights);

// Weight of edge (w -> w') is f(w), so S_n f is a path sum of length n.
std::vector<double> edge_weights_from_potential(const WordGraph& g,
                                                const LocallyConstantPotential& f);

struct SeminormReport {
  double value = 0.0;     // the quotient seminorm, max(max_mean, -min_mean)
  double max_mean = 0.0;  // largest cycle mean of f
  double min_mean = 0.0;  // smallest cycle mean of f
  PeriodicOrbit max_witness;
  PeriodicOrbit min_witness;
  std::vector<std::pair<int, double>> birkhoff_trace;  // (n, (1/n)||S_n f||_inf)
  double final_gap = 0.0;                              // last trace entry minus value
};

// ||f~||_* computed exactly on the depth-k word graph via maximum mean
// cycles; equals lim (1/n)||S_n f||_inf and the extremal invariant average.
SeminormReport quotient_seminorm(const LocallyConstantPotential& f,
                                 std::uint64_t cap = kDefaultWordCap);

// ||(f-g)~||_*, with depths reconciled by lifting. A pseudometric: it
// vanishes exactly on physically equivalent potentials.
double quotient_distance(const LocallyConstantPotential& f, const LocallyConstantPotential& g,
                         std::uint64_t cap = kDefaultWordCap);

// Seminorm report extended with the finite-n trace (1/n)||S_n f||_inf,
// n = 1..n_max; every entry is >= value and the last gap is reported.
SeminormReport seminorm_convergence_trace(const LocallyConstantPotential& f, int n_max,
                                          std::uint64_t cap = kDefaultWordCap);

// Exact range of ∫f dμ over invariant μ: (smallest, largest cycle mean).
std::pair<double, double> invariant_average_range(const LocallyConstantPotential& f,
                                                  std::uint64_t cap = kDefaultWordCap);

}  // namespace nadd
