#include <cmath>
#include <random>

#include "doctest.h"
#include "flw/corpus.hpp"
#include "flw/norms.hpp"
#include "flw/rng.hpp"
#include "flw/window.hpp"

using namespace flw;

namespace {

Signal random_signal(const TorusGrid& g, std::uint64_t seed) {
  auto rng = trial_stream(seed, 1);
  std::normal_distribution<double> N;
  Signal f = Signal::zeros(g);
  for (auto& v : f.values) v = cplx(N(rng), N(rng));
  return f;
}

Signal mode(const TorusGrid& g, int k) {
  Signal f = Signal::zeros(g);
  for (int j = 0; j < g.n; ++j) f.values[j] = std::exp(cplx(0, k * g.h() * j));
  return f;
}

// Direct windowed DFT at lattice point k.
cplx direct_coeff(const Signal& f, const Signal& chi, std::span<const int> k) {
  const TorusGrid& g = f.grid;
  std::vector<int> x(g.d);
  cplx acc = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    unravel(g, j, x);
    double ph = 0;
    for (int a = 0; a < g.d; ++a) ph += k[a] * g.h() * x[a];
    acc += f.values[j] * chi.values[j] * std::exp(cplx(0, -ph));
  }
  return acc * g.cell() / std::pow(2 * kPi, 0.5 * g.d);
}

}  // namespace

TEST_CASE("fl norm examples") {
  TorusGrid g = TorusGrid::make(1, 8);
  CHECK(fl_norm(Signal::zeros(g), {1, Weight::power(3)}) == 0);
  CHECK(fl_norm(mode(g, 1), {1, Weight::power(2)}) == doctest::Approx(2 * std::sqrt(2 * kPi)));
  CHECK(fl_norm(mode(g, 1), {1, Weight::power(2)}) == doctest::Approx(5.01326).epsilon(1e-5));
  Signal r = random_signal(TorusGrid::make(2, 16), 4);
  CHECK(std::abs(fl_norm(r, {2, Weight::power(0)}) - lp_norm(r, 2)) <= 1e-10 * lp_norm(r, 2));
}

TEST_CASE("fl norm is monotone in q and s") {
  Signal r = random_signal(TorusGrid::make(1, 32), 8);
  double prev = kInf;
  for (double q : {1.0, 1.5, 2.0, 4.0, kInf}) {
    double v = fl_norm(r, {q, Weight::power(0)});
    CHECK(v <= prev * (1 + 1e-12));
    prev = v;
  }
  CHECK(fl_norm(r, {1, Weight::power(1)}) >= fl_norm(r, {1, Weight::power(0.5)}));
}

TEST_CASE("local fl norm") {
  TorusGrid g = TorusGrid::make(1, 32);
  Signal f = random_signal(g, 3);
  Signal one = Signal::zeros(g), zero = Signal::zeros(g);
  for (auto& v : one.values) v = 1;
  FLNormSpec spec{1.5, Weight::power(0.5)};
  CHECK(local_fl_norm(f, one, spec) == doctest::Approx(fl_norm(f, spec)));
  CHECK(local_fl_norm(f, zero, spec) == 0);

  Signal hann = make_window(g, std::vector<int>{8}, {WindowShape::hann, 16, 0});
  const FrequencyLattice& L = lattice(g);
  double acc = 0;
  for (std::size_t i = 0; i < L.size(); ++i)
    acc += std::pow(std::abs(direct_coeff(f, hann, L.k(i))) * std::sqrt(L.bracket[i]), 1.5);
  double oracle = std::pow(acc, 1 / 1.5);
  CHECK(std::abs(local_fl_norm(f, hann, spec) - oracle) <= 1e-12 * oracle);
}

TEST_CASE("cone seminorms") {
  TorusGrid g = TorusGrid::make(1, 16);
  Signal f = random_signal(g, 12);
  Spectrum F = forward_transform(f);
  FLNormSpec spec{1, Weight::power(0)};
  double no_origin = 0;
  const FrequencyLattice& L = lattice(g);
  for (std::size_t i = 0; i < L.size(); ++i)
    if (i != L.origin()) no_origin += std::abs(F.coeffs[i]);
  CHECK(cone_seminorm(f, Cone::full(1), spec) == doctest::Approx(no_origin));
  CHECK(cone_seminorm(mode(g, 1), Cone::make({-1.0}, kPi / 2), spec) < 1e-14);

  CorpusEntry e = corpus_entry("edge-2d", 32);
  Cone c = Cone::make({0.0, 1.0}, kPi / 8);
  Spectrum E = forward_transform(e.signal);
  const FrequencyLattice& L2 = lattice(e.signal.grid);
  double oracle = 0;
  for (std::size_t i = 0; i < L2.size(); ++i) {
    auto k = L2.k(i);
    if (k[0] == 0 && k[1] == 0) continue;
    double ang = std::acos(k[1] / L2.norm[i]);
    if (ang < kPi / 8) oracle += std::abs(E.coeffs[i]);
  }
  double v = cone_seminorm(e.signal, c, spec);
  CHECK(v > 0);
  CHECK(v == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("mixed norms") {
  TorusGrid g = TorusGrid::make(1, 8);
  KernelGrid F = KernelGrid::zeros(g);
  F.at(3, 5) = 5;
  for (double p : {1.0, 2.0, kInf})
    for (double q : {1.0, 3.0, kInf})
      for (int order : {1, 2}) CHECK(mixed_norm(F, p, q, order) == doctest::Approx(5));

  auto rng = trial_stream(77, 0);
  std::normal_distribution<double> N;
  std::vector<double> u(8), v(8);
  for (int i = 0; i < 8; ++i) {
    u[i] = std::abs(N(rng));
    v[i] = std::abs(N(rng));
  }
  KernelGrid S = KernelGrid::zeros(g), R = KernelGrid::zeros(g);
  for (int k = 0; k < 8; ++k)
    for (int l = 0; l < 8; ++l) {
      S.at(k, l) = u[k] * v[l];
      R.at(k, l) = cplx(N(rng), N(rng));
    }
  auto lp = [](const std::vector<double>& a, double p) { return lq_sum(a, p); };
  CHECK(mixed_norm(S, 2, 3, 1) == doctest::Approx(lp(u, 2) * lp(v, 3)));

  // Order 1: inner p over the first index, outer q over the second.
  for (double p : {1.0, 2.5}) {
    std::vector<double> inner1(8), inner2(8);
    for (int l = 0; l < 8; ++l) {
      double acc = 0;
      for (int k = 0; k < 8; ++k) acc += std::pow(std::abs(R.at(k, l)), p);
      inner1[l] = std::pow(acc, 1 / p);
    }
    for (int k = 0; k < 8; ++k) {
      double acc = 0;
      for (int l = 0; l < 8; ++l) acc += std::pow(std::abs(R.at(k, l)), 3.0);
      inner2[k] = std::pow(acc, 1 / 3.0);
    }
    double o1 = lp(inner1, 3), o2 = lp(inner2, p);
    CHECK(std::abs(mixed_norm(R, p, 3, 1) - o1) <= 1e-13 * o1);
    CHECK(std::abs(mixed_norm(R, p, 3, 2) - o2) <= 1e-13 * o2);
  }
  for (double p : {1.0, 2.0, kInf})
    CHECK(mixed_norm(R, p, p, 1) == doctest::Approx(mixed_norm(R, p, p, 2)));
}
