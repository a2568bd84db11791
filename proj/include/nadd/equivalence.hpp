#pragma once

#include "nadd/sequence.hpp"

namespace nadd {

// The scale-k approximant f_k / k, expressed as a locally constant potential
// of depth window(k). For interval-valued custom sequences the cylinder
// midpoint is used (a locally constant regularization); all built-in kinds
// yield exact values.
LocallyConstantPotential approximant(const PotentialSequence& seq, int k,
                                     std::uint64_t cap = kDefaultWordCap);

struct CauchyTable {
  std::vector<int> k_grid;
  std::vector<std::vector<double>> dist;  // dist[i][j] = ||(f_ki/ki - f_kj/kj)~||_*
};

// Pairwise quotient distances between approximants over a k-grid, computed
// exactly by Karp mean cycles at the deeper of the two depths.
CauchyTable cauchy_table(const PotentialSequence& seq, std::vector<int> k_grid,
                         std::uint64_t cap = kDefaultWordCap);

struct EquivalenceCertificate {
  LocallyConstantPotential representative;  // = approximant at k_star
  int k_star = 0;
  CauchyTable cauchy;
  DefectTrace defect_trace;  // defects of the sequence against the representative
  double tail_bound = 0.0;   // max distance from k_star to larger grid points
                             // plus the last measured defect; an empirical
                             // bound for the limsup, not a proof
  double tolerance = 0.0;
  bool tolerance_met = false;
};

// Constructive form of the equivalence theorem: approximants along the grid
// form a Cauchy family in the quotient seminorm, and the certificate names
// one representative of the limiting class together with its measured
// defects. k_star is the smallest grid point whose empirical tail bound
// meets the tolerance (the largest grid point when none does).
EquivalenceCertificate construct_equivalent(const PotentialSequence& seq,
                                            std::vector<int> k_grid, int defect_horizon,
                                            double tol, std::uint64_t cap = kDefaultWordCap);

struct CorrectionTerm {
  int n = 0;
  double u_min = 0.0;
  double u_max = 0.0;

  double sup_norm() const { return std::max(std::abs(u_min), std::abs(u_max)); }
};

// Exact extrema of the corrections u_n = f_n - S_n f over X.
std::vector<CorrectionTerm> correction_terms(const PotentialSequence& seq,
                                             const LocallyConstantPotential& f,
                                             std::span<const int> n_list,
                                             std::uint64_t cap = kDefaultWordCap);

}  // namespace nadd
