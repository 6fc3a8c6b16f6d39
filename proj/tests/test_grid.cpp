#include <cmath>
#include <random>

#include "doctest.h"
#include "flw/grid.hpp"
#include "flw/rng.hpp"
#include "flw/signal_io.hpp"

using namespace flw;

namespace {

Signal random_signal(const TorusGrid& g, std::uint64_t seed) {
  auto rng = trial_stream(seed, 0);
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

}  // namespace

TEST_CASE("grid geometry") {
  TorusGrid g = TorusGrid::make(2, 8);
  CHECK(g.size() == 64);
  CHECK(g.cell() == doctest::Approx(std::pow(2 * kPi / 8, 2)));
  CHECK_THROWS_AS(TorusGrid::make(0, 8), Error);
  CHECK_THROWS_AS(TorusGrid::make(1, 7), Error);
  std::vector<int> idx(2);
  unravel(g, 13, idx);
  CHECK(idx == std::vector<int>{1, 5});
  CHECK(ravel(g, idx) == 13);
  CHECK(wrap(-1, 8) == 7);
}

TEST_CASE("forward transform examples") {
  TorusGrid g = TorusGrid::make(1, 8);
  Spectrum Z = forward_transform(Signal::zeros(g));
  for (auto c : Z.coeffs) CHECK(c == cplx(0));

  Spectrum F = forward_transform(mode(g, 1));
  for (int k = -4; k < 4; ++k) {
    std::vector<int> kk{k};
    double expect = k == 1 ? std::sqrt(2 * kPi) : 0.0;
    CHECK(std::abs(F.at(kk) - expect) < 1e-12);
  }
  CHECK(std::abs(F.at(std::vector<int>{1})) == doctest::Approx(2.50663).epsilon(1e-5));

  Signal imp = Signal::zeros(g);
  imp.values[0] = 1;
  Spectrum I = forward_transform(imp);
  for (auto c : I.coeffs) CHECK(std::abs(c) == doctest::Approx(g.h() / std::sqrt(2 * kPi)));
  CHECK(std::abs(I.coeffs[0]) == doctest::Approx(0.31333).epsilon(1e-4));
}

TEST_CASE("forward transform matches a direct sum") {
  TorusGrid g = TorusGrid::make(2, 8);
  Signal f = random_signal(g, 3);
  Spectrum F = forward_transform(f);
  const FrequencyLattice& L = lattice(g);
  double worst = 0;
  std::vector<int> x(2);
  for (std::size_t i = 0; i < L.size(); ++i) {
    cplx acc = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      unravel(g, j, x);
      double ph = g.h() * (L.k(i)[0] * x[0] + L.k(i)[1] * x[1]);
      acc += f.values[j] * std::exp(cplx(0, -ph));
    }
    acc *= g.cell() / (2 * kPi);
    worst = std::max(worst, std::abs(acc - F.coeffs[i]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("inverse transform and round trip") {
  TorusGrid g1 = TorusGrid::make(1, 8);
  Spectrum F = Spectrum::zeros(g1);
  F.at(std::vector<int>{1}) = std::sqrt(2 * kPi);
  Signal f = inverse_transform(F);
  Signal e = mode(g1, 1);
  for (int j = 0; j < 8; ++j) CHECK(std::abs(f.values[j] - e.values[j]) < 1e-12);
  for (auto v : inverse_transform(Spectrum::zeros(g1)).values) CHECK(v == cplx(0));

  TorusGrid g = TorusGrid::make(2, 16);
  Signal r = random_signal(g, 11);
  Signal back = inverse_transform(forward_transform(r));
  double dev = 0;
  for (std::size_t j = 0; j < g.size(); ++j) dev = std::max(dev, std::abs(back.values[j] - r.values[j]));
  CHECK(dev < 1e-12);
}

TEST_CASE("cyclic convolution") {
  TorusGrid g = TorusGrid::make(1, 8);
  Signal a = mode(g, 1);
  for (auto v : cyclic_convolve(a, Signal::zeros(g)).values) CHECK(v == cplx(0));

  Signal c = cyclic_convolve(a, a);
  for (int j = 0; j < 8; ++j) {
    cplx direct = 0;
    for (int l = 0; l < 8; ++l) direct += a.values[l] * a.values[wrap(j - l, 8)];
    direct *= g.h();
    CHECK(std::abs(c.values[j] - direct) < 1e-12);
    CHECK(std::abs(c.values[j] - 2 * kPi * a.values[j]) < 1e-12);
  }

  Signal id = Signal::zeros(g);
  id.values[0] = 1 / g.h();
  Signal r = random_signal(g, 5);
  Signal out = cyclic_convolve(id, r);
  for (int j = 0; j < 8; ++j) CHECK(std::abs(out.values[j] - r.values[j]) < 1e-12);
  CHECK_THROWS_AS(cyclic_convolve(r, Signal::zeros(TorusGrid::make(1, 16))), Error);
}

TEST_CASE("convolution theorem on random pairs") {
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    TorusGrid g = TorusGrid::make(1 + t % 2, t % 2 ? 8 : 32);
    Signal f = random_signal(g, 100 + t), u = random_signal(g, 300 + t);
    Spectrum C = forward_transform(cyclic_convolve(f, u));
    Spectrum F = forward_transform(f), U = forward_transform(u);
    double factor = std::pow(2 * kPi, 0.5 * g.d), scale = 0;
    for (std::size_t i = 0; i < C.coeffs.size(); ++i)
      scale = std::max(scale, std::abs(factor * F.coeffs[i] * U.coeffs[i]));
    for (std::size_t i = 0; i < C.coeffs.size(); ++i)
      worst = std::max(worst, std::abs(C.coeffs[i] - factor * F.coeffs[i] * U.coeffs[i]) / scale);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("lp norms") {
  TorusGrid g = TorusGrid::make(1, 8);
  CHECK(lp_norm(Signal::zeros(g), 2) == 0);
  Signal one = Signal::zeros(g);
  for (auto& v : one.values) v = 1;
  CHECK(lp_norm(one, 1) == doctest::Approx(2 * kPi));
  CHECK(lp_norm(one, kInf) == 1);
  CHECK_THROWS_AS(lp_norm(one, 0.5), Error);

  Signal r = random_signal(TorusGrid::make(2, 8), 9);
  for (double p : {1.0, 1.5, 3.0}) {
    double acc = 0;
    for (auto v : r.values) acc += std::pow(std::abs(v), p);
    double direct = std::pow(r.grid.cell() * acc, 1 / p);
    CHECK(std::abs(lp_norm(r, p) - direct) <= 1e-14 * direct);
  }
}

TEST_CASE("parseval and linearity") {
  for (int t = 0; t < 20; ++t) {
    TorusGrid g = TorusGrid::make(1 + t % 2, 16);
    Signal f = random_signal(g, 40 + t), u = random_signal(g, 80 + t);
    Spectrum F = forward_transform(f);
    double a = 0, b = 0;
    for (auto c : F.coeffs) a += std::norm(c);
    for (auto v : f.values) b += std::norm(v);
    b *= g.cell();
    CHECK(std::abs(a - b) <= 1e-10 * b);

    cplx al(0.3, -1.2), be(2.0, 0.5);
    Signal mix = Signal::zeros(g);
    for (std::size_t j = 0; j < g.size(); ++j) mix.values[j] = al * f.values[j] + be * u.values[j];
    Spectrum M = forward_transform(mix), U = forward_transform(u);
    for (std::size_t i = 0; i < M.coeffs.size(); ++i)
      CHECK(std::abs(M.coeffs[i] - al * F.coeffs[i] - be * U.coeffs[i]) < 1e-12);
  }
}

TEST_CASE("exponent parsing") {
  CHECK(parse_exponent("inf") == kInf);
  CHECK(parse_exponent("1.5") == 1.5);
  CHECK(format_exponent(kInf) == "inf");
  CHECK(conjugate(1) == kInf);
  CHECK(conjugate(2) == 2);
  CHECK(conjugate(kInf) == 1);
}

TEST_CASE("signal io round trip") {
  Signal f = random_signal(TorusGrid::make(2, 8), 21);
  Signal j = signal_from_json(signal_to_json(f));
  Signal b = signal_from_binary(signal_to_binary(f));
  CHECK(j.grid == f.grid);
  CHECK(j.values == f.values);
  CHECK(b.values == f.values);
  CHECK(signal_to_binary(f).substr(0, 4) == "FLW1");
  CHECK_THROWS_AS(signal_from_binary("XXXX"), Error);
}
