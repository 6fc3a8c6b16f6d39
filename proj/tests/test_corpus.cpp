#include <cmath>

#include "doctest.h"
#include "flw/corpus.hpp"

using namespace flw;

TEST_CASE("corpus ids and grids") {
  auto ids = corpus_ids();
  CHECK(ids.size() == 11);
  for (const auto& id : ids) {
    CorpusEntry e = corpus_entry(id);
    CHECK(e.id == id);
    CHECK(e.signal.grid.n == (e.signal.grid.d == 2 ? 128 : 256));
    CHECK_FALSE(e.oracle_fl.empty());
  }
  CHECK(corpus_entry("cusp-0.5", 64).signal.grid.n == 64);
  CHECK_THROWS_AS(corpus_entry("cusp-4"), Error);
  CHECK(standard_corpus().size() == 9);
}

TEST_CASE("impulse") {
  TorusGrid g = TorusGrid::make(2, 16);
  CorpusEntry e = make_delta(g, {3, 5});
  double total = 0;
  for (auto v : e.signal.values) total += std::abs(v);
  CHECK(total == 1);
  CHECK(e.signal.values[ravel(g, std::vector<int>{3, 5})] == cplx(1));
  CHECK(e.min_order(1) == -2);
  CHECK(e.min_order(kInf) == 0);
  CHECK(e.min_order(2) == -1);
  CHECK_THROWS_AS(make_delta(g, {3}), Error);
  CHECK_THROWS_AS(make_delta(g, {3, 16}), Error);
}

TEST_CASE("power cusps") {
  TorusGrid g = TorusGrid::make(1, 64);
  CorpusEntry e = make_power_cusp(g, 0.5, 10);
  CHECK(e.signal.values[10] == cplx(0));
  CHECK(e.signal.values[42].real() == doctest::Approx(std::sqrt(2)));
  CHECK(e.signal.values[12].real() == doctest::Approx(e.signal.values[8].real()));
  CHECK(e.min_order(1) == 0.5);
  CHECK(e.min_order(2) == 1);
  CHECK(e.oracle_wf[0].decay == 1.5);
  CHECK_THROWS_AS(make_power_cusp(g, 2, 10), Error);
  CHECK_THROWS_AS(make_power_cusp(g, -1, 10), Error);
  CHECK_THROWS_AS(make_power_cusp(TorusGrid::make(2, 8), 0.5, 1), Error);
}

TEST_CASE("edges") {
  TorusGrid g = TorusGrid::make(2, 32);
  CorpusEntry saw = make_edge(g, 1, 16);
  CHECK(saw.oracle_wf.size() == 1);
  CHECK(saw.oracle_wf[0].support.size() == 32);
  CHECK(saw.oracle_wf[0].directions == std::vector<std::vector<double>>{{0, 1}, {0, -1}});
  CHECK(saw.signal.values[ravel(g, std::vector<int>{5, 16})].real() == -0.5);
  CorpusEntry step = make_edge(g, 0, 8, EdgeProfile::step);
  CHECK(step.oracle_wf.size() == 2);
  CHECK(step.signal.values[ravel(g, std::vector<int>{8, 0})].real() == 1);
  CHECK(step.signal.values[ravel(g, std::vector<int>{7, 0})].real() == 0);
  CHECK(step.min_order(1) == 0);
  CHECK_THROWS_AS(make_edge(TorusGrid::make(1, 32), 0, 8), Error);
  CHECK_THROWS_AS(make_edge(g, 2, 8), Error);
}

TEST_CASE("smooth entries") {
  TorusGrid g = TorusGrid::make(1, 64);
  CorpusEntry a = make_smooth(g, 4, 3), b = make_smooth(g, 4, 3);
  CHECK(a.signal.values == b.signal.values);
  for (auto v : a.signal.values) CHECK(v.imag() == 0);
  CHECK(a.oracle_wf.empty());
  CHECK(std::isinf(a.min_order(1)));
  Spectrum F = forward_transform(a.signal);
  const FrequencyLattice& L = lattice(g);
  for (std::size_t i = 0; i < L.size(); ++i)
    if (std::abs(L.k(i)[0]) > 3) CHECK(std::abs(F.coeffs[i]) < 1e-12);
  CHECK_THROWS_AS(make_smooth(g, 1, 17), Error);
}

TEST_CASE("accumulating cusps") {
  TorusGrid g = TorusGrid::make(1, 256);
  for (double q : {1.0, 2.0, kInf}) {
    CorpusEntry e = make_example_2_10(g, 3, q);
    REQUIRE(e.oracle_wf.size() == 3);
    for (int j = 1; j <= 3; ++j) {
      const OracleComponent& c = e.oracle_wf[j - 1];
      CHECK(c.support[0][0] == 4 - j);
      CHECK(c.order(q) > j + 2);
      CHECK(c.order(q) <= j + 3);
    }
  }
  CorpusEntry e = make_example_2_10(g, 1, 1);
  CHECK(e.signal.values[1] == cplx(0));
  CHECK(e.signal.values[129].real() == doctest::Approx(1));
  CHECK_THROWS_AS(make_example_2_10(g, 5, 1), Error);
  CHECK_THROWS_AS(make_example_2_10(TorusGrid::make(2, 16), 1, 1), Error);
}

TEST_CASE("membership table follows the orders") {
  for (const auto& e : standard_corpus())
    for (const auto& row : e.oracle_fl) {
      double o = e.min_order(row.q);
      CHECK(row.in == (row.s < o || (std::isinf(row.q) && row.s <= o)));
    }
}

TEST_CASE("combined entries") {
  TorusGrid g = TorusGrid::make(1, 64);
  CorpusEntry a = make_delta(g, {5}), b = make_power_cusp(g, 0.5, 40);
  CorpusEntry c = combine("mix", a, b);
  CHECK(c.id == "mix");
  CHECK(c.oracle_wf.size() == 2);
  CHECK(c.min_order(1) == -1);
  CHECK(c.signal.values[5] == a.signal.values[5] + b.signal.values[5]);
  CHECK_THROWS_AS(combine("bad", a, make_delta(TorusGrid::make(1, 32), {1})), Error);
}
