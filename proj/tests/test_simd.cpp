#include <cstring>
#include <random>

#include "doctest.h"
#include "flw/simd.hpp"
#include "flw/norms.hpp"
#include "flw/rng.hpp"

using namespace flw;

namespace {

struct Data {
  std::vector<cplx> a, b;
  std::vector<double> w, x;
};

Data make(std::size_t n, std::uint64_t seed) {
  auto rng = trial_stream(seed, n);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(0, 3);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.a.emplace_back(N(rng), N(rng));
    d.b.emplace_back(N(rng), N(rng));
    d.w.push_back(U(rng));
    d.x.push_back(U(rng));
  }
  if (n > 3) {
    d.a[1] = cplx(1e-300, -1e300);
    d.b[2] = cplx(-0.0, 0.0);
  }
  return d;
}

}  // namespace

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (simd::detected() != simd::Isa::avx2) {
    MESSAGE("AVX2 not available; comparing the scalar path with itself");
  }
  // Odd lengths exercise the remainder loops.
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1023u}) {
    Data d = make(n, 17);
    std::vector<cplx> c1(n), c2(n);
    std::vector<double> w1(n), w2(n), u1(n), u2(n);
    simd::scalar::cmul(d.a.data(), d.b.data(), c1.data(), n);
    simd::scalar::weighted_abs(d.a.data(), d.w.data(), w1.data(), n);
    simd::scalar::weighted_abs(d.a.data(), nullptr, u1.data(), n);
    double m1 = simd::scalar::max_value(d.x.data(), n);
    if (simd::detected() == simd::Isa::avx2) {
      simd::avx2::cmul(d.a.data(), d.b.data(), c2.data(), n);
      simd::avx2::weighted_abs(d.a.data(), d.w.data(), w2.data(), n);
      simd::avx2::weighted_abs(d.a.data(), nullptr, u2.data(), n);
      CHECK(simd::avx2::max_value(d.x.data(), n) == m1);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::memcmp(&c1[i], &c2[i], sizeof(cplx)) == 0);
        CHECK(std::memcmp(&w1[i], &w2[i], sizeof(double)) == 0);
        CHECK(std::memcmp(&u1[i], &u2[i], sizeof(double)) == 0);
      }
    }
    if (n == 0) CHECK(m1 == 0);
  }
}

TEST_CASE("dispatch can be forced and results do not change") {
  TorusGrid g = TorusGrid::make(2, 16);
  Signal f = Signal::zeros(g);
  Data d = make(g.size(), 5);
  f.values = d.a;
  simd::force(simd::Isa::scalar);
  CHECK(simd::active() == simd::Isa::scalar);
  double a = fl_norm(f, {1, Weight::power(1.5)});
  Spectrum A = forward_transform(pointwise_product(f, f));
  simd::force(simd::Isa::avx2);
  CHECK(simd::active() == simd::detected());
  double b = fl_norm(f, {1, Weight::power(1.5)});
  Spectrum B = forward_transform(pointwise_product(f, f));
  CHECK(a == b);
  CHECK(A.coeffs == B.coeffs);
  CHECK(std::string(simd::name(simd::Isa::scalar)) == "scalar");
}
