#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "test_support.hpp"

using namespace nadd;

namespace {

std::vector<std::string> as_strings(const std::vector<Word>& words) {
  std::vector<std::string> s;
  for (const Word& w : words) s.push_back(word_to_string(w));
  return s;
}

}  // namespace

TEST_CASE("full 2-shift word enumeration") {
  const Sft sft = Sft::full_shift(2);
  CHECK(as_strings(enumerate_words(sft, 2)) == std::vector<std::string>{"00", "01", "10", "11"});
  CHECK(as_strings(enumerate_words(sft, 1)) == std::vector<std::string>{"0", "1"});
}

TEST_CASE("golden-mean word enumeration") {
  const Sft sft = Sft::golden_mean();
  CHECK(as_strings(enumerate_words(sft, 3)) ==
        std::vector<std::string>{"000", "001", "010", "100", "101"});
  CHECK(as_strings(enumerate_words(sft, 1)) == std::vector<std::string>{"0", "1"});
}

TEST_CASE("word counts follow the transition recursion") {
  for (const Sft& sft : {Sft::full_shift(2), Sft::golden_mean(), Sft::full_shift(3)}) {
    // Independent count: brute-force filter of all |A|^n strings.
    for (int n = 1; n <= 12; ++n) {
      std::uint64_t total = 1;
      for (int i = 0; i < n; ++i) total *= sft.alphabet_size();
      if (total > (1u << 20)) break;
      std::uint64_t admissible = 0;
      for (std::uint64_t code = 0; code < total; ++code) {
        Word w(static_cast<std::size_t>(n));
        std::uint64_t c = code;
        for (int i = n - 1; i >= 0; --i) {
          w[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % sft.alphabet_size());
          c /= sft.alphabet_size();
        }
        if (sft.word_admissible(w)) ++admissible;
      }
      CHECK(sft.word_count(n) == admissible);
      CHECK(enumerate_words(sft, n).size() == admissible);
    }
  }
}

TEST_CASE("full shift counts are |A|^n exactly") {
  const Sft sft = Sft::full_shift(3);
  std::uint64_t expect = 1;
  for (int n = 1; n <= 12; ++n) {
    expect *= 3;
    CHECK(sft.word_count(n) == expect);
  }
}

TEST_CASE("word graph shapes") {
  {
    const WordGraph g = word_graph(Sft::full_shift(2), 1);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 4);
  }
  {
    const WordGraph g = word_graph(Sft::golden_mean(), 1);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 3);
  }
  {
    const WordGraph g = word_graph(Sft::golden_mean(), 2);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 5);
    CHECK(word_to_string(g.nodes.word(0)) == "00");
    CHECK(word_to_string(g.nodes.word(1)) == "01");
    CHECK(word_to_string(g.nodes.word(2)) == "10");
  }
}

TEST_CASE("word graph at depth k has |words(k+1)| edges") {
  for (const Sft& sft : {Sft::full_shift(2), Sft::golden_mean(), Sft::full_shift(3)}) {
    for (int k = 1; k <= 6; ++k) {
      const WordGraph g = word_graph(sft, k);
      CHECK(g.edge_count() == sft.word_count(k + 1));
      CHECK(g.node_count() == sft.word_count(k));
    }
  }
}

TEST_CASE("edges inherit the lexicographic order of (k+1)-words") {
  const Sft sft = Sft::golden_mean();
  const int k = 3;
  const WordGraph g = word_graph(sft, k);
  const auto longer = enumerate_words(sft, k + 1);
  std::size_t e = 0;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const auto succ = g.successors(u);
    for (std::size_t s = 0; s < succ.size(); ++s, ++e) {
      // Edge e corresponds to the (k+1)-word (source word, appended symbol).
      Word w = to_word(g.nodes.word(u));
      w.push_back(g.nodes.word(succ[s]).back());
      CHECK(w == longer[e]);
      CHECK(g.edge_id(u, s) == e);
    }
  }
  CHECK(e == longer.size());
}

TEST_CASE("periodic orbits, small periods") {
  {
    auto orbits = periodic_orbits(Sft::full_shift(2), 1);
    REQUIRE(orbits.size() == 2);
    CHECK(word_to_string(orbits[0].cycle) == "0");
    CHECK(word_to_string(orbits[1].cycle) == "1");
  }
  {
    auto orbits = periodic_orbits(Sft::full_shift(2), 2);
    REQUIRE(orbits.size() == 3);
    CHECK(word_to_string(orbits[0].cycle) == "0");
    CHECK(word_to_string(orbits[1].cycle) == "1");
    CHECK(word_to_string(orbits[2].cycle) == "01");
  }
  {
    auto orbits = periodic_orbits(Sft::golden_mean(), 2);
    REQUIRE(orbits.size() == 2);
    CHECK(word_to_string(orbits[0].cycle) == "0");
    CHECK(word_to_string(orbits[1].cycle) == "01");
  }
}

TEST_CASE("periodic orbits induce admissible repetitions") {
  for (const Sft& sft : {Sft::full_shift(2), Sft::golden_mean(), Sft::full_shift(3)}) {
    for (const PeriodicOrbit& o : periodic_orbits(sft, 5)) {
      // Check two full periods symbol by symbol, including the wrap.
      for (int i = 0; i < 2 * o.period(); ++i) {
        CHECK(sft.admissible(o.symbol_at(static_cast<std::uint64_t>(i)),
                             o.symbol_at(static_cast<std::uint64_t>(i) + 1)));
      }
    }
  }
}

TEST_CASE("shift metric examples") {
  const PeriodicOrbit zero{{0}}, one{{1}}, zo{{0, 1}};
  CHECK(shift_metric(zero, zero) == 0.0);
  CHECK(shift_metric(zero, one) == 0.5);
  CHECK(shift_metric(zo, zero) == 0.25);
}

TEST_CASE("shift metric symmetry and expansion bound") {
  testing::SplitMix64 rng(7);
  const Sft sft = Sft::full_shift(2);
  auto orbits = periodic_orbits(sft, 6);
  for (const PeriodicOrbit& x : orbits) {
    for (const PeriodicOrbit& y : orbits) {
      const double d = shift_metric(x, y);
      CHECK(d == shift_metric(y, x));
      if (d < 1.0 && d > 0.0) {
        PeriodicOrbit tx{x.cycle}, ty{y.cycle};
        std::rotate(tx.cycle.begin(), tx.cycle.begin() + 1, tx.cycle.end());
        std::rotate(ty.cycle.begin(), ty.cycle.begin() + 1, ty.cycle.end());
        CHECK(shift_metric(tx, ty) <= 2.0 * d + 1e-15);
      }
    }
  }
  (void)rng;
}

TEST_CASE("construction rejects bad transition structures") {
  // Non-primitive: period-2 permutation.
  CHECK_THROWS_AS(Sft(2, {{0, 1}, {1, 0}}), ConfigError);
  // Symbol 1 has no outgoing transition.
  CHECK_THROWS_AS(Sft(2, {{1, 1}, {0, 0}}), ConfigError);
  // Reducible.
  CHECK_THROWS_AS(Sft(2, {{1, 1}, {0, 1}}), ConfigError);
  // Primitive non-full example is fine.
  CHECK_NOTHROW(Sft(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}));
}

TEST_CASE("enumeration cap errors name the cap") {
  const Sft sft = Sft::full_shift(3);
  try {
    enumerate_words(sft, 20, 1000);
    FAIL("expected a cap error");
  } catch (const CapExceededError& e) {
    CHECK(e.cap() == 1000);
    CHECK(e.required() > 1000);
    CHECK(std::string(e.what()).find("1000") != std::string::npos);
  }
}

TEST_CASE("orbit count stays deduplicated up to rotation") {
  // Depth-1 graph on two symbols has three simple cycles.
  CHECK(periodic_orbits(Sft::full_shift(2), 4).size() == 3);
  // Period-p orbits have p distinct windows of length p-1, so a depth-3
  // graph carries every orbit of period <= 4 as a simple cycle.
  auto orbits = periodic_orbits(Sft::full_shift(2), 4, 3);
  std::set<std::string> names;
  for (const PeriodicOrbit& o : orbits) names.insert(word_to_string(canonical_rotation(o).cycle));
  CHECK(names.size() == orbits.size());
  // 2 fixed points, 1 two-cycle, 2 three-cycles, 3 four-cycles.
  CHECK(orbits.size() == 8);
}
