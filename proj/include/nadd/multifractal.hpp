#pragma once

#include "nadd/thermo.hpp"

namespace nadd {

struct PressureCurve {
  std::vector<double> q;
  std::vector<double> P;   // pressure of q*f
  std::vector<double> dP;  // ∫ f dmu_q at the equilibrium state of q*f
};

PressureCurve pressure_curve(const LocallyConstantPotential& f, std::span<const double> q_grid,
                             std::uint64_t cap = kDefaultWordCap);

struct SpectrumResult {
  std::vector<double> alpha;
  std::vector<double> E;  // -inf sentinel outside [alpha_min, alpha_max]
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double band = 0.0;       // additive uncertainty inherited from a certificate
  bool degenerate = false; // f is class-equal to a constant
};

// Level-set entropy spectrum as the Legendre transform of the pressure
// curve, E(alpha) = min_q P(q) - q alpha, evaluated on adaptively refined
// and outward-expanded q grids. Outside the invariant average range the
// level set is empty and E carries the -inf sentinel.
SpectrumResult entropy_spectrum(const LocallyConstantPotential& f,
                                std::span<const double> alpha_grid, double band = 0.0,
                                std::uint64_t cap = kDefaultWordCap);

struct RateFunction {
  std::vector<double> x;
  std::vector<double> I;
  double minimizer = 0.0;           // ∫ f dmu_G
  double value_at_minimizer = 0.0;  // I at the minimizer (~0)
};

// Large-deviation rate function I(x) = sup_alpha (alpha x - P(g + alpha f)
// + P(g)) on adaptive alpha grids.
RateFunction rate_function(const LocallyConstantPotential& f_rep,
                           const LocallyConstantPotential& g_rep, std::span<const double> x_grid,
                           std::uint64_t cap = kDefaultWordCap);

struct DerivativeCheck {
  double analytic = 0.0;  // ∫ f dmu_q
  double numeric = 0.0;   // central difference of the pressure curve
  double gap = 0.0;
};

DerivativeCheck derivative_check(const LocallyConstantPotential& f, double q, double h,
                                 std::uint64_t cap = kDefaultWordCap);

}  // namespace nadd
