#pragma once

#include <cstddef>

#include "flw/grid.hpp"

// Pointwise kernels with a scalar reference and an AVX2 variant picked at
// runtime. Both produce bit-identical results (no FMA contraction, no
// reassociation); reductions that sum stay scalar.
namespace flw::simd {

enum class Isa { scalar, avx2 };

Isa detected();
Isa active();
// Restricts dispatch; requests above the detected level are clamped.
void force(Isa isa);
const char* name(Isa isa);

namespace scalar {
void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void weighted_abs(const cplx* a, const double* w, double* out, std::size_t n);
double max_value(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void weighted_abs(const cplx* a, const double* w, double* out, std::size_t n);
double max_value(const double* x, std::size_t n);
}  // namespace avx2

// out[i] = a[i] * b[i]
void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n);
// out[i] = |a[i]| * w[i]; w may be null for unit weight.
void weighted_abs(const cplx* a, const double* w, double* out, std::size_t n);
// Largest entry, 0 for an empty range. Inputs are non-negative.
double max_value(const double* x, std::size_t n);

}  // namespace flw::simd
