#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "nadd/sequence.hpp"

using namespace nadd;
using nadd::testing::SplitMix64;
using nadd::testing::random_potential;

namespace {

Matrix make2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

MatrixCocycle positive_cocycle() {
  return MatrixCocycle({make2(2, 1, 1, 1), make2(1, 1, 1, 2)});
}

Matrix make1(double v) {
  Matrix m(1, 1);
  m.at(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("evaluate, frozen examples") {
  const Sft full2 = Sft::full_shift(2);
  {
    SplitMix64 rng(3);
    auto f = random_potential(full2, 1, rng);
    auto seq = PotentialSequence::additive(f);
    for (const Word& w : enumerate_words(full2, 5)) {
      CHECK(seq.evaluate(w) == doctest::Approx(f.birkhoff_sum(w, 5)));
    }
  }
  {
    auto seq = PotentialSequence::cocycle(full2, MatrixCocycle({make1(2), make1(3)}));
    CHECK(seq.evaluate(word_from_string("01")) == doctest::Approx(std::log(6.0)));
  }
  {
    // M_0 * M_1 = [[3,4],[2,3]], entry sum 12.
    auto seq = PotentialSequence::cocycle(full2, positive_cocycle());
    CHECK(seq.evaluate(word_from_string("01")) == doctest::Approx(std::log(12.0)));
  }
}

TEST_CASE("cocycle evaluation matches direct matrix products") {
  const Sft full2 = Sft::full_shift(2);
  auto seq = PotentialSequence::cocycle(full2, positive_cocycle());
  const MatrixCocycle& c = *seq.cocycle_data();
  for (const Word& w : enumerate_words(full2, 6)) {
    Matrix p = Matrix::identity(2);
    for (Symbol a : w) p = p * c.matrix(a);
    CHECK(seq.evaluate(w) == doctest::Approx(std::log(p.entry_sum())));
  }
}

TEST_CASE("operator norm cocycle") {
  const Sft full2 = Sft::full_shift(2);
  auto cc = MatrixCocycle({make2(2, 1, 1, 1), make2(1, 1, 1, 2)}, CocycleNorm::operator_two);
  auto seq = PotentialSequence::cocycle(full2, cc);
  // sigma_max of [[3,4],[2,3]]: sqrt of the larger eigenvalue of A^T A.
  // A^T A = [[13,18],[18,25]], eigenvalues (38 +- sqrt(38^2 - 4*det))/2.
  const double tr = 38.0, det = 13 * 25 - 18 * 18;
  const double lam = (tr + std::sqrt(tr * tr - 4 * det)) / 2.0;
  CHECK(seq.evaluate(word_from_string("01")) == doctest::Approx(0.5 * std::log(lam)));
}

TEST_CASE("measure-log evaluation is log of cylinder probability") {
  const Sft full2 = Sft::full_shift(2);
  auto mu = CylinderMeasure::bernoulli({1.0 / 3.0, 2.0 / 3.0});
  auto seq = PotentialSequence::measure_log(full2, mu);
  CHECK(seq.evaluate(word_from_string("011")) ==
        doctest::Approx(std::log(1.0 / 3.0 * 2.0 / 3.0 * 2.0 / 3.0)));
  // Consistency: sum over admissible n-words of mu_n is 1.
  for (int n = 1; n <= 6; ++n) {
    double total = 0.0;
    for (const Word& w : enumerate_words(full2, n)) total += mu.measure(w);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Refinement consistency mu_n(w) = sum_a mu_{n+1}(wa).
  for (const Word& w : enumerate_words(full2, 3)) {
    double ext = 0.0;
    for (Symbol a : {Symbol{0}, Symbol{1}}) {
      Word wa = w;
      wa.push_back(a);
      ext += mu.measure(wa);
    }
    CHECK(mu.measure(w) == doctest::Approx(ext).epsilon(1e-12));
  }
}

TEST_CASE("hidden-Markov cylinder measure is shift invariant") {
  // N_0, N_1 strictly positive, N_0 + N_1 row stochastic.
  std::vector<Matrix> em = {make2(0.4, 0.1, 0.2, 0.2), make2(0.2, 0.3, 0.3, 0.3)};
  CylinderMeasure mu(em);
  const Sft full2 = Sft::full_shift(2);
  for (const Word& w : enumerate_words(full2, 4)) {
    double ext = 0.0;
    for (Symbol a : {Symbol{0}, Symbol{1}}) {
      Word aw;
      aw.push_back(a);
      aw.insert(aw.end(), w.begin(), w.end());
      ext += mu.measure(aw);
    }
    CHECK(mu.measure(w) == doctest::Approx(ext).epsilon(1e-12));
  }
}

TEST_CASE("almost additivity constants") {
  const Sft full2 = Sft::full_shift(2);
  {
    SplitMix64 rng(13);
    auto seq = PotentialSequence::additive(random_potential(full2, 2, rng));
    auto rep = almost_additivity_constant(seq, 8);
    CHECK(rep.c_estimate <= 1e-9);
    CHECK(rep.classification == AdditivityClass::additive);
  }
  {
    auto seq = PotentialSequence::cocycle(full2, MatrixCocycle({make1(2), make1(5)}));
    auto rep = almost_additivity_constant(seq, 8);
    CHECK(rep.c_estimate <= 1e-9);
    CHECK(rep.classification == AdditivityClass::additive);
  }
  {
    auto seq = PotentialSequence::cocycle(full2, positive_cocycle());
    auto rep = almost_additivity_constant(seq, 12);
    CHECK(rep.c_estimate > 0.0);
    CHECK(rep.classification == AdditivityClass::almost_additive_evidence);
    // The constant plateaus: the running max at half horizon already equals it.
    CHECK(rep.c_by_total[6] == doctest::Approx(rep.c_estimate).epsilon(0.05));
    // Oracle spot check at (n, m) = (2, 2): exhaustive defect over 4-words.
    const MatrixCocycle& c = *seq.cocycle_data();
    double worst = 0.0;
    for (const Word& w : enumerate_words(full2, 4)) {
      Matrix whole = Matrix::identity(2), head = Matrix::identity(2), tail = Matrix::identity(2);
      for (int i = 0; i < 4; ++i) whole = whole * c.matrix(w[static_cast<std::size_t>(i)]);
      for (int i = 0; i < 2; ++i) head = head * c.matrix(w[static_cast<std::size_t>(i)]);
      for (int i = 2; i < 4; ++i) tail = tail * c.matrix(w[static_cast<std::size_t>(i)]);
      worst = std::max(worst, std::abs(std::log(whole.entry_sum()) - std::log(head.entry_sum()) -
                                       std::log(tail.entry_sum())));
    }
    for (auto [n, m, v] : rep.table) {
      if (n == 2 && m == 2) CHECK(v == doctest::Approx(worst).epsilon(1e-12));
    }
  }
}

TEST_CASE("measure-log additivity defect stays bounded for positive emissions") {
  std::vector<Matrix> em = {make2(0.4, 0.1, 0.2, 0.2), make2(0.2, 0.3, 0.3, 0.3)};
  CylinderMeasure mu(em);
  auto seq = PotentialSequence::measure_log(Sft::full_shift(2), mu);
  auto rep = almost_additivity_constant(seq, 12);
  // Strict positivity gives a uniform quasi-Bernoulli constant, so the
  // exhaustive defect plateaus.
  CHECK(rep.c_estimate > 0.0);
  CHECK(rep.classification == AdditivityClass::almost_additive_evidence);
}

TEST_CASE("asymptotic defect traces") {
  const Sft full2 = Sft::full_shift(2);
  SplitMix64 rng(29);
  auto f = random_potential(full2, 1, rng);
  auto g = random_potential(full2, 1, rng);
  const std::vector<int> ns = {1, 2, 4, 8, 16, 32};
  {
    auto trace = asymptotic_defect(PotentialSequence::additive(f), f, ns);
    for (const auto& p : trace.points) CHECK(p.delta <= 1e-12);
  }
  {
    // delta_n against g converges to the quotient distance between f and g.
    auto trace = asymptotic_defect(PotentialSequence::additive(g), f, ns);
    const double d = quotient_distance(g, f);
    CHECK(trace.points.back().delta == doctest::Approx(d).epsilon(0.25));
    // One-sided: the sup-norm defect dominates the class distance.
    for (const auto& p : trace.points) CHECK(p.delta >= d - 1e-9);
  }
}

TEST_CASE("variation profiles") {
  const Sft full2 = Sft::full_shift(2);
  {
    auto seq = PotentialSequence::cocycle(full2, positive_cocycle());
    auto rep = variation_profile(seq, 10);
    for (double v : rep.var_n) CHECK(v == 0.0);
    CHECK(rep.bounded_flag);
  }
  {
    auto mu = CylinderMeasure::bernoulli({0.5, 0.5});
    auto rep = variation_profile(PotentialSequence::measure_log(full2, mu), 8);
    for (double v : rep.var_n) CHECK(v == 0.0);
  }
  {
    // Additive with depth 2: variation = boundary oscillation, bounded in n.
    SplitMix64 rng(37);
    auto f = random_potential(full2, 2, rng);
    auto seq = PotentialSequence::additive(f);
    auto rep = variation_profile(seq, 10);
    double osc = 0.0;
    for (double a : f.values())
      for (double b : f.values()) osc = std::max(osc, std::abs(a - b));
    for (int n = 2; n <= 10; ++n) {
      const double v = rep.var_n[static_cast<std::size_t>(n) - 1];
      CHECK(v <= 2.0 * osc + 1e-12);
      // Brute-force oracle: oscillation of S_n f over n-cylinders.
      double worst = 0.0;
      WordIndex full(full2, n + 1);
      WordIndex prefixes(full2, n);
      std::vector<double> lo(prefixes.size(), 1e300), hi(prefixes.size(), -1e300);
      for (std::size_t r = 0; r < full.size(); ++r) {
        WordView w = full.word(r);
        const double s = f.birkhoff_sum(w, n);
        const std::size_t p = prefixes.rank(w.subspan(0, static_cast<std::size_t>(n)));
        lo[p] = std::min(lo[p], s);
        hi[p] = std::max(hi[p], s);
      }
      for (std::size_t p = 0; p < prefixes.size(); ++p) worst = std::max(worst, hi[p] - lo[p]);
      CHECK(v == doctest::Approx(worst).epsilon(1e-12));
    }
    CHECK(rep.bounded_flag);
  }
}

TEST_CASE("scale and add") {
  const Sft full2 = Sft::full_shift(2);
  SplitMix64 rng(43);
  auto f = random_potential(full2, 1, rng);
  auto F = PotentialSequence::additive(f);
  auto G = PotentialSequence::cocycle(full2, positive_cocycle());
  {
    auto sum = scale_and_add({{1.0, F}, {0.0, G}});
    for (const Word& w : enumerate_words(full2, 5))
      CHECK(sum.evaluate(w) == doctest::Approx(F.evaluate(w)));
  }
  {
    auto doubled = scale_and_add({{2.0, F}});
    CHECK(doubled.kind() == SequenceKind::additive);
    for (int n = 1; n <= 8; ++n)
      for (const Word& w : enumerate_words(full2, n))
        CHECK(doubled.evaluate(w) == doctest::Approx(2.0 * F.evaluate(w)));
  }
  {
    auto H = PotentialSequence::cocycle(full2, MatrixCocycle({make1(2), make1(3)}));
    auto sum = scale_and_add({{1.0, G}, {1.0, H}});
    CHECK(sum.cylinder_constant());
    for (int n = 1; n <= 6; ++n)
      for (const Word& w : enumerate_words(full2, n))
        CHECK(sum.evaluate(w) == doctest::Approx(G.evaluate(w) + H.evaluate(w)));
  }
  {
    auto mixed_sft =
        PotentialSequence::additive(LocallyConstantPotential::constant(Sft::golden_mean(), 1.0));
    CHECK_THROWS_AS(scale_and_add({{1.0, F}, {1.0, mixed_sft}}), DomainError);
  }
}

TEST_CASE("additive evaluate equals Birkhoff path sums across depths") {
  SplitMix64 rng(53);
  const Sft gm = Sft::golden_mean();
  auto f = random_potential(gm, 2, rng);
  auto seq = PotentialSequence::additive(f);
  for (const Word& w : enumerate_words(gm, 7)) {
    // |w| = 7, depth 2 -> n = 6 path-sum terms.
    CHECK(seq.evaluate(w) == doctest::Approx(f.birkhoff_sum(w, 6)));
    CHECK(seq.value(6, w) == doctest::Approx(f.birkhoff_sum(w, 6)));
  }
}

TEST_CASE("defect decay from approximants of positive cocycles") {
  // Almost additive implies asymptotically additive, quantitatively: the
  // windowed defect of f_k/k improves as k doubles.
  const Sft full2 = Sft::full_shift(2);
  auto seq = PotentialSequence::cocycle(full2, positive_cocycle());
  auto approx = [&](int k) {
    WordIndex ix(full2, k);
    std::vector<double> v(ix.size());
    for (std::size_t r = 0; r < ix.size(); ++r) v[r] = seq.value(k, ix.word(r)) / k;
    return LocallyConstantPotential(full2, k, std::move(v));
  };
  double prev = std::numeric_limits<double>::infinity();
  for (int k : {2, 4, 8}) {
    std::vector<int> ns;
    for (int n = k; n <= std::min(4 * k, 16); ++n) ns.push_back(n);
    auto trace = asymptotic_defect(seq, approx(k), ns);
    double worst = 0.0;
    for (const auto& p : trace.points) worst = std::max(worst, p.delta);
    CHECK(worst <= prev + 1e-12);
    prev = worst;
  }
}

TEST_CASE("custom sequences carry interval bounds") {
  const Sft full2 = Sft::full_shift(2);
  SplitMix64 rng(61);
  auto f = random_potential(full2, 2, rng);
  // Custom wrapper around S_n f exposing exact cylinder sup/inf.
  auto seq_add = PotentialSequence::additive(f);
  auto seq = PotentialSequence::custom(
      full2, [&](int n, WordView w) { return seq_add.bounds(n, w); }, false);
  auto rep = variation_profile(seq, 10);
  auto rep_add = variation_profile(seq_add, 10);
  for (std::size_t i = 0; i < rep.var_n.size(); ++i)
    CHECK(rep.var_n[i] == doctest::Approx(rep_add.var_n[i]));
}
