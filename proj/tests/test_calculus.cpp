#include <cmath>
#include <random>

#include "doctest.h"
#include "flw/calculus.hpp"
#include "flw/corpus.hpp"
#include "flw/rng.hpp"

using namespace flw;

namespace {

Signal constant(const TorusGrid& g, cplx v) {
  Signal f = Signal::zeros(g);
  for (auto& x : f.values) x = v;
  return f;
}

Signal random_signal(const TorusGrid& g, std::uint64_t seed) {
  auto rng = trial_stream(seed, 1);
  std::normal_distribution<double> N;
  Signal f = Signal::zeros(g);
  for (auto& v : f.values) v = cplx(N(rng), N(rng));
  return f;
}

}  // namespace

TEST_CASE("moderation constants") {
  TorusGrid g = TorusGrid::make(1, 32);
  Weight one = Weight::power(0);
  CHECK(moderation_constant(g, one, one, one) == 1);
  double c = moderation_constant(g, Weight::power(1), Weight::power(1), Weight::power(1));
  CHECK(c >= 1);
  CHECK(c <= std::sqrt(2) + 1e-12);
}

TEST_CASE("constants attain the product and convolution bounds") {
  TorusGrid g = TorusGrid::make(1, 16);
  Signal c = constant(g, 1);
  Weight one = Weight::power(0);
  NormRatioReport p = product_norm_check(c, c, 1, 1, 1, one, one, one);
  CHECK(p.certified);
  CHECK(p.ratio == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-12));
  CHECK(p.bound == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-12));
  CHECK(p.ok());

  NormRatioReport v = convolve_norm_check(c, c, 1, 1, kInf, one, one, one);
  CHECK(v.ratio == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-12));
  CHECK(v.ok());

  CHECK_THROWS_AS(product_norm_check(c, c, 1, 2, 2, one, one, one), Error);
  CHECK_THROWS_AS(convolve_norm_check(c, c, 1, 2, 1, one, one, one), Error);
  CHECK_THROWS_AS(product_norm_check(c, constant(TorusGrid::make(1, 8), 1), 1, 1, 1, one, one, one),
                  Error);
}

TEST_CASE("product and convolution bounds on random signals") {
  for (int t = 0; t < 30; ++t) {
    TorusGrid g = TorusGrid::make(1 + t % 2, t % 2 ? 8 : 32);
    Signal a = random_signal(g, 2 * t), b = random_signal(g, 2 * t + 1);
    Weight w = Weight::power(0.5), w1 = Weight::power(0.5), w2 = Weight::power(0.5);
    CHECK(product_norm_check(a, b, 2, 1, 2, w, w1, w2).ok());
    CHECK(convolve_norm_check(a, b, 2, 2, kInf, w, w1, w2).ok());
  }
}

TEST_CASE("critical product exponents") {
  CHECK_NOTHROW(check_product_exponents(1, 1, 1, 1, 0, 0.5));
  CHECK_THROWS_AS(check_product_exponents(1, 1, 1, 1, 0.5, 0.5), Error);
  CHECK_THROWS_AS(check_product_exponents(1, 4, 1, 1, 0.2, 0.5), Error);
  CHECK_NOTHROW(check_product_exponents(1, 4, 1, 1, 0.6, 0.5));
  CHECK_THROWS_AS(check_product_exponents(1, 1, 1, 1, 0, 2), Error);

  TorusGrid g = TorusGrid::make(1, 32);
  NormRatioReport r = product_critical_norm_check(random_signal(g, 1), random_signal(g, 2), 1, 1, 1, 0, 0);
  CHECK(r.certified);
  CHECK(r.ok());

  StabilityReport s = critical_product_stability(2, 1, 0.5, 0, 0.5, 16, 20, 7);
  CHECK(std::isfinite(s.at_n));
  CHECK(std::isfinite(s.at_2n));
  CHECK(s.change() >= 0);
}

TEST_CASE("product modes") {
  for (auto m : {ProductMode::thm4_1_case1, ProductMode::thm4_1_case2, ProductMode::thm4_3})
    CHECK(parse_product_mode(product_mode_name(m)) == m);
  CHECK_THROWS_AS(parse_product_mode("case9"), Error);

  ProductWFParams p;
  p.q = 0.5;
  CHECK_THROWS_AS(product_hypotheses(1, ProductMode::thm4_1_case1, p), Error);
}

TEST_CASE("wave front of a product with a smooth factor") {
  CorpusEntry c = corpus_entry("cusp-2.5"), s = corpus_entry("smooth-1d");
  ProductWFParams p;
  p.s1 = 2;
  p.s2 = 2;
  p.order1 = c.min_order(1);
  p.order2 = s.min_order(1);
  InclusionReport r = wf_product_check(c.signal, s.signal, ProductMode::thm4_1_case1, p);
  CHECK(r.ok());
}

TEST_CASE("wave front of a convolution with an impulse") {
  CorpusEntry d = corpus_entry("delta-1d"), c = corpus_entry("cusp-0.5");
  double s = c.min_order(1) + 1.5;
  InclusionReport r = wf_convolution_check(d.signal, c.signal, 1, s);
  CHECK(r.ok());
  CHECK(r.lhs > 0);
  CHECK(r.notes.at("support_points") == 1);
  for (const auto& p : singular_points(fl_scan(cyclic_convolve(d.signal, c.signal), 1, s)))
    CHECK(std::min(p.x[0], 256 - p.x[0]) <= 32);
}

TEST_CASE("algebra bound") {
  TorusGrid g = TorusGrid::make(1, 16);
  Signal c = constant(g, 1);
  NormRatioReport r = algebra_check({c, c}, c, 1, 1, 0);
  CHECK(r.certified);
  CHECK(r.ratio == doctest::Approx(1 / (2 * kPi)).epsilon(1e-12));
  CHECK(r.ok());
  CHECK(algebra_check({random_signal(g, 4)}, random_signal(g, 5), 1, 1, 0).ok());
  CHECK_THROWS_AS(algebra_check({}, c, 1, 1, 0), Error);
  CHECK_THROWS_AS(algebra_check({c}, c, 1, 2, 0), Error);
  CHECK_THROWS_AS(algebra_check({c}, c, 1.5, 1, 0), Error);
}
