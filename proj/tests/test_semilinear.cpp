#include <cmath>

#include "doctest.h"
#include "flw/corpus.hpp"
#include "flw/semilinear.hpp"
#include "flw/verify.hpp"

using namespace flw;

namespace {

Signal mode(const TorusGrid& g, int k) {
  Signal f = Signal::zeros(g);
  for (int j = 0; j < g.n; ++j) f.values[j] = std::exp(cplx(0, k * g.h() * j));
  return f;
}

}  // namespace

TEST_CASE("graded multi-indices") {
  using V = std::vector<std::vector<int>>;
  CHECK(graded_multi_indices(2, 2) == V{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  CHECK(graded_multi_indices(1, 3) == V{{0}, {1}, {2}, {3}});
  CHECK(graded_multi_indices(3, 1).size() == 4);
  CHECK_THROWS_AS(graded_multi_indices(0, 1), Error);
  CHECK_THROWS_AS(graded_multi_indices(1, -1), Error);
}

TEST_CASE("jets of a Fourier mode") {
  TorusGrid g = TorusGrid::make(1, 32);
  Signal f = mode(g, 3);
  Jet J = jet(f, 2);
  REQUIRE(J.size() == 3);
  cplx factor[3] = {1, cplx(0, 3), -9};
  for (int b = 0; b < 3; ++b)
    for (int j = 0; j < g.n; ++j) CHECK(std::abs(J.components[b].values[j] - factor[b] * f.values[j]) < 1e-11);
}

TEST_CASE("polynomial nonlinearities") {
  TorusGrid g = TorusGrid::make(1, 16);
  Signal f = mode(g, 1), u = mode(g, 2);
  PolynomialNonlinearity sq = PolynomialNonlinearity::monomial(1, 0, 2, 3);
  CHECK(sq.degree() == 2);
  Signal v = eval_nonlinearity(sq, {f});
  for (int j = 0; j < g.n; ++j) CHECK(std::abs(v.values[j] - 3.0 * u.values[j]) < 1e-12);

  PolynomialNonlinearity mixed;
  mixed.N = 2;
  mixed.terms.push_back({{1, 1}, 1, std::nullopt});
  mixed.terms.push_back({{0, 1}, 1, f});
  CHECK_NOTHROW(mixed.check());
  Signal w = eval_nonlinearity(mixed, {f, u});
  for (int j = 0; j < g.n; ++j) CHECK(std::abs(w.values[j] - 2.0 * f.values[j] * u.values[j]) < 1e-12);
  CHECK(mixed.to_json().at("terms").size() == 2);

  PolynomialNonlinearity bad = mixed;
  bad.terms.push_back({{0, 0}, 1, std::nullopt});
  CHECK_THROWS_AS(bad.check(), Error);
  bad = mixed;
  bad.terms.push_back({{1}, 1, std::nullopt});
  CHECK_THROWS_AS(bad.check(), Error);
  bad = mixed;
  bad.terms.push_back({{-1, 2}, 1, std::nullopt});
  CHECK_THROWS_AS(bad.check(), Error);
  CHECK_THROWS_AS(eval_nonlinearity(mixed, {f}), Error);
  CHECK_THROWS_AS(PolynomialNonlinearity::monomial(1, 1, 2), Error);
}

TEST_CASE("nonlinearity hypotheses") {
  CHECK_NOTHROW(nonlinearity_hypotheses(1, 1, 1, 1.5, 0.5));
  CHECK_THROWS_AS(nonlinearity_hypotheses(1, 2, 0.25, 0.25, 1), Error);
  CHECK_THROWS_AS(nonlinearity_hypotheses(1, 1, 1, 2.5, 0.5), Error);
  CHECK_THROWS_AS(nonlinearity_hypotheses(1, 1, 1, 0.5, 0.5), Error);
  CHECK_THROWS_AS(nonlinearity_hypotheses(1, 2, 1, 1, 0.25), Error);
  CHECK_THROWS_AS(nonlinearity_hypotheses(1, kInf, 1, 1, 1), Error);
}

TEST_CASE("wave front of a square") {
  CorpusEntry c = corpus_entry("cusp-2.5");
  InclusionReport r =
      wf_nonlinearity_check(PolynomialNonlinearity::monomial(1, 0, 2), {c.signal}, 1, 1, 2, 0.5);
  CHECK(r.ok());
}

TEST_CASE("bootstrap index calculus") {
  BootstrapLedger a = bootstrap_indices(1, 1, 1, 0, 2, 0, 2, 1);
  CHECK_FALSE(a.rejected);
  CHECK(a.final_index == 4);
  CHECK(a.cap == 2);
  CHECK(a.gain == 2);
  CHECK_FALSE(a.trace.empty());

  BootstrapLedger b = bootstrap_indices(2, 2, 2, 1, 3, 1, 5, 1);
  CHECK(b.final_index == 2 * 2 + 5 - 1);
  for (std::size_t i = 1; i < b.trace.size(); ++i) CHECK(b.trace[i].sigma >= b.trace[i - 1].sigma);

  BootstrapLedger v2m2 = bootstrap_indices(1, 2, 1.5, 1, 2, 0.7, 3, 2);
  BootstrapLedger v2m5 = bootstrap_indices(1, 2, 1.5, 1, 5, 0.7, 3, 2);
  CHECK(v2m2.final_index == v2m5.final_index);
  CHECK(v2m2.gain == v2m5.gain);

  BootstrapLedger r = bootstrap_indices(kInf, 1, 1, 0, 2, 0.5, 3, 1);
  CHECK(r.rejected);
  CHECK(r.rejection == "r >= d/q'");
  CHECK(bootstrap_indices(1, 1, 1, 2, 3, 1, 3, 1).rejection == "n > k + (m - 1)r");
  CHECK(bootstrap_table().ok);
}

TEST_CASE("demo solver") {
  TorusGrid g = TorusGrid::make(1, 32);
  Signal src = Signal::zeros(g);
  for (int j = 0; j < g.n; ++j) src.values[j] = std::cos(g.h() * j);
  PolynomialNonlinearity G = PolynomialNonlinearity::monomial(1, 0, 2, 0.1);
  DemoResult r = demo_solve(Symbol::laplace_plus_one(), G, 0, src);
  CHECK(r.residual <= 1e-10);
  CHECK(r.iterations > 0);
  CHECK(r.updates.size() == static_cast<std::size_t>(r.iterations));

  CHECK_THROWS_AS(demo_solve(Symbol::dx1(), G, 0, src), Error);
  CHECK_THROWS_AS(demo_solve(elliptic_test_symbol(), G, 0, src), Error);
  CHECK_THROWS_AS(demo_solve(Symbol::laplace_plus_one(), G, 1, src), Error);
  CHECK_THROWS_AS(demo_solve(Symbol::laplace_plus_one(), G, 0, Signal::zeros(g)), Error);
}
