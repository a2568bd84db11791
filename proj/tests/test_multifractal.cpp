#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "nadd/multifractal.hpp"

using namespace nadd;
using nadd::testing::SplitMix64;
using nadd::testing::random_potential;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

LocallyConstantPotential pm_one() {
  return LocallyConstantPotential(Sft::full_shift(2), 1, {1.0, -1.0});
}

}  // namespace

TEST_CASE("pressure curve closed forms") {
  {
    auto c = pressure_curve(pm_one(), linspace(-3, 3, 25));
    for (std::size_t i = 0; i < c.q.size(); ++i) {
      CHECK(c.P[i] == doctest::Approx(std::log(std::exp(c.q[i]) + std::exp(-c.q[i])))
                          .epsilon(1e-10));
      CHECK(c.dP[i] == doctest::Approx(std::tanh(c.q[i])).epsilon(1e-8));
    }
  }
  {
    auto f = LocallyConstantPotential::constant(Sft::full_shift(2), 0.7);
    auto c = pressure_curve(f, linspace(-2, 2, 9));
    for (std::size_t i = 0; i < c.q.size(); ++i) {
      CHECK(c.P[i] == doctest::Approx(std::log(2.0) + 0.7 * c.q[i]).epsilon(1e-10));
      CHECK(c.dP[i] == doctest::Approx(0.7).epsilon(1e-10));
    }
  }
  {
    auto f = LocallyConstantPotential::constant(Sft::golden_mean(), 0.0);
    auto c = pressure_curve(f, linspace(-4, 4, 9));
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    for (double p : c.P) CHECK(p == doctest::Approx(std::log(phi)).epsilon(1e-10));
  }
}

TEST_CASE("pressure curve convexity on random potentials") {
  SplitMix64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Sft sft = rep % 2 ? Sft::full_shift(2) : Sft::golden_mean();
    auto f = random_potential(sft, rng.uniform_int(1, 2), rng);
    auto c = pressure_curve(f, linspace(-3, 3, 21));
    for (std::size_t i = 1; i + 1 < c.q.size(); ++i) {
      CHECK(c.P[i + 1] - 2 * c.P[i] + c.P[i - 1] >= -1e-8);
      CHECK(c.dP[i + 1] >= c.dP[i] - 1e-8);
    }
  }
}

TEST_CASE("entropy spectrum of the two-valued potential") {
  auto sp = entropy_spectrum(pm_one(), linspace(-1, 1, 21));
  CHECK(sp.alpha_min == doctest::Approx(-1.0));
  CHECK(sp.alpha_max == doctest::Approx(1.0));
  CHECK_FALSE(sp.degenerate);
  // E(0) = log 2, E(+-1) ~ 0.
  CHECK(sp.E[10] == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(sp.E.front() <= 1e-6);
  CHECK(sp.E.front() >= 0.0);
  CHECK(sp.E.back() <= 1e-6);
  // Concavity over the interior grid.
  for (std::size_t i = 1; i + 1 < sp.E.size(); ++i)
    CHECK(sp.E[i + 1] - 2 * sp.E[i] + sp.E[i - 1] <= 1e-8);
  // Symmetric potential, symmetric spectrum.
  for (std::size_t i = 0; i < sp.E.size(); ++i)
    CHECK(sp.E[i] == doctest::Approx(sp.E[sp.E.size() - 1 - i]).epsilon(1e-7));
}

TEST_CASE("spectrum sentinel outside the invariant range") {
  auto f = LocallyConstantPotential(Sft::golden_mean(), 1, {0.0, 1.0});
  auto sp = entropy_spectrum(f, std::vector<double>{-0.25, 0.25, 0.75});
  // Range is [0, 1/2]: outside values carry the sentinel.
  CHECK(std::isinf(sp.E[0]));
  CHECK(sp.E[0] < 0);
  CHECK(std::isfinite(sp.E[1]));
  CHECK(std::isinf(sp.E[2]));
}

TEST_CASE("degenerate spectrum collapses to a single point") {
  auto f = LocallyConstantPotential::constant(Sft::full_shift(2), 0.4);
  auto sp = entropy_spectrum(f, linspace(-1, 1, 5));
  CHECK(sp.degenerate);
  REQUIRE(sp.alpha.size() == 1);
  CHECK(sp.alpha[0] == doctest::Approx(0.4));
  CHECK(sp.E[0] == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("spectrum peak sits at the entropy of the maximal measure") {
  SplitMix64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const Sft sft = rep % 2 ? Sft::full_shift(2) : Sft::golden_mean();
    auto f = random_potential(sft, 1, rng);
    auto [lo, hi] = invariant_average_range(f);
    if (hi - lo < 0.1) continue;
    const int n = 41;
    auto grid = linspace(lo, hi, n);
    auto sp = entropy_spectrum(f, grid);
    auto c0 = pressure_curve(f, std::vector<double>{0.0});
    double best = -1e300;
    for (double e : sp.E) best = std::max(best, e);
    const double spacing = (hi - lo) / (n - 1);
    const double scale = std::max(1.0, f.sup_norm());
    CHECK(best <= c0.P[0] + 1e-8);
    CHECK(best >= c0.P[0] - 2.0 * spacing * scale);
    // The argmax alpha lies near dP(0).
    std::size_t arg = 0;
    for (std::size_t i = 0; i < sp.E.size(); ++i)
      if (sp.E[i] > sp.E[arg]) arg = i;
    CHECK(std::abs(grid[arg] - c0.dP[0]) <= 2.0 * spacing + 1e-9);
  }
}

TEST_CASE("rate function for the symmetric binary potential") {
  const Sft full2 = Sft::full_shift(2);
  auto g = LocallyConstantPotential::constant(full2, std::log(0.5));
  auto f = pm_one();
  auto r = rate_function(f, g, std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(r.minimizer == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.value_at_minimizer <= 1e-8);
  CHECK(r.I[1] <= 1e-8);
  CHECK(r.I[0] == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(r.I[2] == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  // Binomial rate oracle at interior points: I(x) for the uniform Bernoulli
  // equals the relative entropy of ((1+x)/2, (1-x)/2) vs (1/2, 1/2).
  auto r2 = rate_function(f, g, linspace(-0.8, 0.8, 9));
  for (std::size_t i = 0; i < r2.x.size(); ++i) {
    const double p = (1.0 + r2.x[i]) / 2.0;
    const double oracle = p * std::log(2.0 * p) + (1.0 - p) * std::log(2.0 * (1.0 - p));
    CHECK(r2.I[i] == doctest::Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("rate function convexity and nonnegativity") {
  SplitMix64 rng(11);
  auto f = random_potential(Sft::full_shift(2), 1, rng);
  auto g = random_potential(Sft::full_shift(2), 1, rng);
  auto [lo, hi] = invariant_average_range(f);
  auto r = rate_function(f, g, linspace(lo, hi, 17));
  for (double v : r.I) CHECK(v >= -1e-10);
  for (std::size_t i = 1; i + 1 < r.I.size(); ++i)
    CHECK(r.I[i + 1] - 2 * r.I[i] + r.I[i - 1] >= -1e-8);
  CHECK(r.value_at_minimizer <= 1e-8);
}

TEST_CASE("rate function with F = G keeps its minimizer at the equilibrium mean") {
  SplitMix64 rng(13);
  auto g = random_potential(Sft::full_shift(2), 1, rng);
  auto r = rate_function(g, g, std::vector<double>{0.0});
  auto mu_g = equilibrium_state(g);
  CHECK(r.minimizer == doctest::Approx(integrate(g, mu_g)).epsilon(1e-10));
  CHECK(r.value_at_minimizer <= 1e-8);
}

TEST_CASE("derivative check") {
  const Sft full2 = Sft::full_shift(2);
  {
    auto f = LocallyConstantPotential::constant(full2, 1.3);
    auto d = derivative_check(f, 0.7, 1e-4);
    CHECK(d.analytic == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(d.numeric == doctest::Approx(1.3).epsilon(1e-9));
  }
  {
    auto d = derivative_check(pm_one(), 0.0, 1e-4);
    CHECK(std::abs(d.analytic) <= 1e-10);
    CHECK(std::abs(d.numeric) <= 1e-8);
  }
  {
    auto f = LocallyConstantPotential(Sft::golden_mean(), 1, {0.0, 1.0});
    auto d = derivative_check(f, 1.0, 1e-4);
    CHECK(d.gap <= 1e-6);
  }
  SplitMix64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const Sft sft = rep % 2 ? Sft::full_shift(2) : Sft::golden_mean();
    auto f = random_potential(sft, rng.uniform_int(1, 2), rng);
    auto d = derivative_check(f, rng.uniform(-2.0, 2.0), 1e-4);
    CHECK(d.gap <= 1e-6);
  }
}

TEST_CASE("discrete Legendre duality recovers the pressure curve") {
  auto f = pm_one();
  double prev_err = std::numeric_limits<double>::infinity();
  for (int density : {17, 33, 65}) {
    auto qs = linspace(-2, 2, density);
    auto c = pressure_curve(f, qs);
    auto alphas = linspace(-0.96, 0.96, 4 * density);
    // E_d = discrete transform of P; P_back = transform of E_d.
    std::vector<double> Ed(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      double m = 1e300;
      for (std::size_t j = 0; j < qs.size(); ++j)
        m = std::min(m, c.P[j] - qs[j] * alphas[i]);
      Ed[i] = m;
    }
    double err = 0.0;
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (std::abs(qs[j]) > 1.6) continue;  // stay away from grid-boundary tangents
      double back = -1e300;
      for (std::size_t i = 0; i < alphas.size(); ++i)
        back = std::max(back, Ed[i] + qs[j] * alphas[i]);
      err = std::max(err, std::abs(back - c.P[j]));
    }
    // First-order convergence or better as the density doubles.
    CHECK(err <= 0.75 * prev_err + 1e-9);
    prev_err = err;
  }
}
