#include "nadd/multifractal.hpp"

#include <algorithm>

namespace nadd {

namespace {

// Pressure evaluations along a pencil q -> P(base + q * dir) with the word
// graph built once. The Perron iteration warm-starts from the previous
// vector, which keeps adaptive Legendre scans cheap.
class PressurePencil {
 public:
  PressurePencil(const LocallyConstantPotential& dir,
                 const LocallyConstantPotential* base, std::uint64_t cap) {
    LocallyConstantPotential d = dir;
    if (base) {
      const int depth = std::max(dir.depth(), base->depth());
      d = dir.lifted(depth, cap);
      base_values_ = base->lifted(depth, cap).values();
    }
    graph_ = word_graph(d.sft(), d.depth(), cap);
    dir_values_ = d.values();
    if (!base) base_values_.assign(dir_values_.size(), 0.0);
    v_.assign(graph_.node_count(), 1.0 / static_cast<double>(graph_.node_count()));
  }

  double operator()(double q) {
    const std::size_t V = graph_.node_count();
    std::vector<double> weight(V), mv(V);
    for (std::size_t u = 0; u < V; ++u)
      weight[u] = std::exp(base_values_[u] + q * dir_values_[u]);
    double lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
      double rmax = 0.0, rmin = std::numeric_limits<double>::infinity(), norm = 0.0;
      for (std::size_t u = 0; u < V; ++u) {
        double s = 0.0;
        for (std::uint32_t t : graph_.successors(u)) s += v_[t];
        mv[u] = weight[u] * s;
        if (v_[u] > 0.0) {
          const double r = mv[u] / v_[u];
          rmax = std::max(rmax, r);
          rmin = std::min(rmin, r);
        }
        norm += mv[u];
      }
      lambda = 0.5 * (rmax + rmin);
      for (std::size_t u = 0; u < V; ++u) v_[u] = mv[u] / norm;
      if (rmax - rmin <= 1e-13 * std::max(1.0, lambda)) break;
    }
    return std::log(lambda);
  }

 private:
  WordGraph graph_;
  std::vector<double> dir_values_;
  std::vector<double> base_values_;
  std::vector<double> v_;
};

constexpr int kLegendrePoints = 33;
constexpr double kLegendreTol = 1e-8;
constexpr double kLegendreSpan = 8.0;
constexpr double kLegendreCap = 64.0;

// Deterministic minimization of a smooth convex function on an adaptively
// refined grid; the window expands outward when the minimizer sits on its
// edge, up to |q| <= kLegendreCap.
double adaptive_convex_min(const std::function<double(double)>& phi) {
  double lo = -kLegendreSpan, hi = kLegendreSpan;
  double best = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 200; ++round) {
    int arg = 0;
    double round_best = std::numeric_limits<double>::infinity();
    const double step = (hi - lo) / (kLegendrePoints - 1);
    for (int i = 0; i < kLegendrePoints; ++i) {
      const double q = lo + step * i;
      const double val = phi(q);
      if (val < round_best) {
        round_best = val;
        arg = i;
      }
    }
    const double improvement = best - round_best;
    best = std::min(best, round_best);
    if (arg == 0 && lo > -kLegendreCap) {
      const double width = hi - lo;
      lo = std::max(-kLegendreCap, lo - width);
      continue;
    }
    if (arg == kLegendrePoints - 1 && hi < kLegendreCap) {
      const double width = hi - lo;
      hi = std::min(kLegendreCap, hi + width);
      continue;
    }
    const double nlo = lo + step * std::max(0, arg - 1);
    const double nhi = lo + step * std::min(kLegendrePoints - 1, arg + 1);
    if (round > 0 && improvement < kLegendreTol) break;
    if (nhi - nlo < 1e-12) break;
    lo = nlo;
    hi = nhi;
  }
  return best;
}

}  // namespace

PressureCurve pressure_curve(const LocallyConstantPotential& f, std::span<const double> q_grid,
                             std::uint64_t cap) {
  if (q_grid.empty()) throw DomainError("pressure_curve: empty grid");
  if (!std::is_sorted(q_grid.begin(), q_grid.end()))
    throw DomainError("pressure_curve: grid must be sorted ascending");
  PressureCurve curve;
  PressurePencil pencil(f, nullptr, cap);
  for (double q : q_grid) {
    curve.q.push_back(q);
    curve.P.push_back(pencil(q));
    const MarkovMeasure mu_q = equilibrium_state(f * q, cap);
    curve.dP.push_back(integrate(f, mu_q));
  }
  return curve;
}

SpectrumResult entropy_spectrum(const LocallyConstantPotential& f,
                                std::span<const double> alpha_grid, double band,
                                std::uint64_t cap) {
  SpectrumResult out;
  out.band = band;
  auto [lo, hi] = invariant_average_range(f, cap);
  out.alpha_min = lo;
  out.alpha_max = hi;
  const double top = pressure_curve(f, std::vector<double>{0.0}, cap).P[0];
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) {
    // f is class-equal to a constant: the spectrum is the single point
    // (alpha = c, E = P(0)).
    out.degenerate = true;
    out.alpha.push_back(lo);
    out.E.push_back(top);
    return out;
  }
  PressurePencil pencil(f, nullptr, cap);
  for (double a : alpha_grid) {
    out.alpha.push_back(a);
    if (a < lo - kDefaultTolerance || a > hi + kDefaultTolerance) {
      out.E.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    out.E.push_back(adaptive_convex_min([&](double q) { return pencil(q) - q * a; }));
  }
  return out;
}

RateFunction rate_function(const LocallyConstantPotential& f_rep,
                           const LocallyConstantPotential& g_rep, std::span<const double> x_grid,
                           std::uint64_t cap) {
  if (!(f_rep.sft() == g_rep.sft()))
    throw DomainError("rate_function: potentials live on different shift spaces");
  RateFunction out;
  PressurePencil pencil(f_rep, &g_rep, cap);
  const double p_g = pencil(0.0);
  auto rate_at = [&](double x) {
    // I(x) = sup_alpha (alpha x - P(g + alpha f) + P(g)), a concave program.
    return -adaptive_convex_min([&](double a) { return pencil(a) - p_g - a * x; });
  };
  for (double x : x_grid) {
    out.x.push_back(x);
    out.I.push_back(rate_at(x));
  }
  const MarkovMeasure mu_g = equilibrium_state(g_rep, cap);
  out.minimizer = integrate(f_rep, mu_g);
  out.value_at_minimizer = rate_at(out.minimizer);
  return out;
}

DerivativeCheck derivative_check(const LocallyConstantPotential& f, double q, double h,
                                 std::uint64_t cap) {
  if (!(h > 0.0)) throw DomainError("derivative_check: step must be positive");
  DerivativeCheck out;
  const MarkovMeasure mu_q = equilibrium_state(f * q, cap);
  out.analytic = integrate(f, mu_q);
  PressurePencil pencil(f, nullptr, cap);
  out.numeric = (pencil(q + h) - pencil(q - h)) / (2.0 * h);
  out.gap = std::abs(out.analytic - out.numeric);
  return out;
}

}  // namespace nadd
