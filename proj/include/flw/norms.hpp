#pragma once

#include "flw/cone.hpp"
#include "flw/grid.hpp"
#include "flw/weight.hpp"

namespace flw {

struct FLNormSpec {
  double q = 1;
  Weight weight = Weight::power(0);
};

double fl_norm(const Spectrum& F, const FLNormSpec& spec);
double fl_norm(const Signal& f, const FLNormSpec& spec);
double local_fl_norm(const Signal& f, const Signal& cutoff, const FLNormSpec& spec);
// Sum over lattice points of the cone, origin excluded.
double cone_seminorm(const Spectrum& F, const Cone& cone, const FLNormSpec& spec);
double cone_seminorm(const Signal& f, const Cone& cone, const FLNormSpec& spec);

// Dense kernel F(k, l) over lattice pairs, row-major in k.
struct KernelGrid {
  static constexpr std::size_t kMaxPoints = 4096;

  TorusGrid grid;
  std::vector<cplx> values;

  static KernelGrid zeros(const TorusGrid& g);
  std::size_t points() const { return grid.size(); }
  cplx& at(std::size_t k, std::size_t l) { return values[k * points() + l]; }
  const cplx& at(std::size_t k, std::size_t l) const { return values[k * points() + l]; }
};

// order 1: inner p over ξ (first index), outer q over η;
// order 2: inner q over η, outer p over ξ.
double mixed_norm(const KernelGrid& F, double p, double q, int order);

}  // namespace flw
