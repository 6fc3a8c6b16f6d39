#include "flw/simd.hpp"

#include <immintrin.h>

#include <atomic>
#include <cmath>

namespace flw::simd {

namespace {

Isa probe() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<int> g_forced{-1};

}  // namespace

Isa detected() {
  static const Isa isa = probe();
  return isa;
}

Isa active() {
  int f = g_forced.load(std::memory_order_relaxed);
  Isa det = detected();
  if (f < 0) return det;
  return static_cast<Isa>(f) == Isa::avx2 && det == Isa::avx2 ? Isa::avx2 : Isa::scalar;
}

void force(Isa isa) { g_forced.store(static_cast<int>(isa), std::memory_order_relaxed); }

const char* name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

namespace scalar {

void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double ar = a[i].real(), ai = a[i].imag();
    double br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void weighted_abs(const cplx* a, const double* w, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double re = a[i].real(), im = a[i].imag();
    double m = std::sqrt(re * re + im * im);
    out[i] = w ? m * w[i] : m;
  }
}

double max_value(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace scalar

namespace avx2 {

__attribute__((target("avx2"))) void cmul(const cplx* a, const cplx* b, cplx* out,
                                          std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);  // ar0 ai0 ar1 ai1
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    __m256d br = _mm256_movedup_pd(vb);        // br br
    __m256d bi = _mm256_permute_pd(vb, 0xF);   // bi bi
    __m256d sw = _mm256_permute_pd(va, 0x5);   // ai ar
    __m256d t1 = _mm256_mul_pd(va, br);        // ar*br ai*br
    __m256d t2 = _mm256_mul_pd(sw, bi);        // ai*bi ar*bi
    // even lanes: t1 - t2, odd lanes: t1 + t2
    __m256d r = _mm256_addsub_pd(t1, t2);
    _mm256_storeu_pd(po + 2 * i, r);
  }
  if (i < n) scalar::cmul(a + i, b + i, out + i, n - i);
}

__attribute__((target("avx2"))) void weighted_abs(const cplx* a, const double* w, double* out,
                                                  std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v0 = _mm256_loadu_pd(pa + 2 * i);      // r0 i0 r1 i1
    __m256d v1 = _mm256_loadu_pd(pa + 2 * i + 4);  // r2 i2 r3 i3
    __m256d s0 = _mm256_mul_pd(v0, v0);
    __m256d s1 = _mm256_mul_pd(v1, v1);
    // hadd gives r0²+i0², r2²+i2², r1²+i1², r3²+i3²
    __m256d h = _mm256_hadd_pd(s0, s1);
    h = _mm256_permute4x64_pd(h, 0xD8);
    __m256d m = _mm256_sqrt_pd(h);
    if (w) m = _mm256_mul_pd(m, _mm256_loadu_pd(w + i));
    _mm256_storeu_pd(out + i, m);
  }
  if (i < n) scalar::weighted_abs(a + i, w ? w + i : nullptr, out + i, n - i);
}

__attribute__((target("avx2"))) double max_value(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = scalar::max_value(lanes, 4);
  double tail = scalar::max_value(x + i, n - i);
  return tail > m ? tail : m;
}

}  // namespace avx2

void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  if (active() == Isa::avx2) return avx2::cmul(a, b, out, n);
  scalar::cmul(a, b, out, n);
}

void weighted_abs(const cplx* a, const double* w, double* out, std::size_t n) {
  if (active() == Isa::avx2) return avx2::weighted_abs(a, w, out, n);
  scalar::weighted_abs(a, w, out, n);
}

double max_value(const double* x, std::size_t n) {
  if (active() == Isa::avx2) return avx2::max_value(x, n);
  return scalar::max_value(x, n);
}

}  // namespace flw::simd
