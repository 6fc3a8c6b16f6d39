#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flw/norms.hpp"
#include "json.hpp"

namespace flw {

// F(ξ, η) = <ξ>^t0 <ξ-η>^t1 <η>^t2
struct PowerKernelSpec {
  double t0 = 0, t1 = 0, t2 = 0;

  double eval(std::span<const double> xi, std::span<const double> eta) const;
  void check() const;
  nlohmann::json to_json() const;
};

// Power kernel sampled on lattice pairs with the unwrapped difference k - l.
KernelGrid power_kernel(const TorusGrid& g, const PowerKernelSpec& spec);
// G(l, k) = F(k, l)
KernelGrid transpose(const KernelGrid& F);

// T_F(f, g)(k) = Σ_l F(k, l) f(l) g(k - l), k - l wrapped on the lattice.
Spectrum apply_tf(const KernelGrid& F, const Spectrum& f, const Spectrum& g);

struct DualPair {
  cplx lhs, rhs;
  double defect() const;  // |lhs - rhs| / max(|lhs|, 1)
};

// <T_F(f, g), h> against <T_G(h, ǧ), f> with G the transpose and ǧ(k) = g(-k).
DualPair tf_dual_pair(const KernelGrid& F, const Spectrum& f, const Spectrum& g,
                      const Spectrum& h);

// Lattice ℓ^q norm of the coefficients, optionally weighted by <k>^r.
double lattice_norm(const Spectrum& f, double q, double r = 0);

struct TFBoundReport {
  int kase = 1;
  double q = 1, r = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  TorusGrid grid;
  double max_ratio = 0;
  std::int64_t worst_trial = -1;
  // Case 2: ‖<·>^{-r}‖ in ℓ^{q0}, q0 = q/(q-2), over the lattice; the bound
  // constant of the Hölder step.
  double proof_constant = 1;
  double tolerance = 1e-10;

  bool ok() const { return max_ratio <= proof_constant * (1 + tolerance); }
  nlohmann::json to_json() const;
};

// Random kernels and arrays keyed by lattice coordinates, so the instance on a
// coarse grid is the restriction of the one on a finer grid. Mixes complex
// Gaussian, one-hot and heavy-tailed instances.
struct RandomLatticeSource {
  std::uint64_t seed = 0;

  Spectrum array(const TorusGrid& g, std::uint64_t trial, std::uint64_t slot) const;
  KernelGrid kernel(const TorusGrid& g, std::uint64_t trial) const;
};

// Mixed-norm bounds for T_F: case 1 (F ∈ L^{∞,q'}_2), case 2 (q > 2,
// F ∈ L^{q,∞}_1, g weighted by <·>^r with r > d(1 - 2/q)), case 3 (q <= 2,
// F ∈ L^{q',∞}_1).
TFBoundReport verify_tf_bound(int kase, double q, double r, int trials, std::uint64_t seed,
                              const TorusGrid& g = TorusGrid::make(1, 16));

// Slice norms of χ_Ω F along one variable, d = 1, against the bound table of
// the power-kernel integral estimates.
struct SliceRegion {
  enum class Kind { omega, tail };
  Kind kind = Kind::omega;
  int index = 1;       // Ω_1..Ω_5 for omega
  double delta = 0.5;  // omega
  double c = 0.5;      // tail: |η - ξ| >= c|ξ|
  double R = 8;        // omega: |ξ| threshold; tail: <ξ>, <η> >= R

  static SliceRegion omega(int index, double delta = 0.5, double R = 8);
  static SliceRegion tail(double c, double R);
  std::string name() const;
};

struct SliceReport {
  PowerKernelSpec spec;
  SliceRegion region;
  double p = 1;
  int range = 128;
  std::string branch;
  std::vector<int> abscissa;  // fixed ξ (Ω_1, Ω_2, tail) or fixed η (Ω_3..Ω_5)
  std::vector<double> slice, bound;
  double C = 0;            // max slice / bound
  double residual = 0;     // max (slice - C·bound)
  // Slopes of log(slice/bound) against log<x> over the octaves
  // [range/4, range/2] and [range/2, range].
  double inner_slope = 0, tail_slope = 0;
  double slope_floor = 0.02;
  double deceleration = 0.8;

  bool ok() const;
  nlohmann::json to_json() const;
};

// Bound formula and branch name at abscissa x (free variable of the slice).
std::pair<double, std::string> slice_bound(const PowerKernelSpec& spec, const SliceRegion& region,
                                           double p, double x);
SliceReport kernel_slice_norms(const PowerKernelSpec& spec, const SliceRegion& region, double p,
                               int range = 128);

}  // namespace flw
