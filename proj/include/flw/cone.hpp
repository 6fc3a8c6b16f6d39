#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flw/grid.hpp"

namespace flw {

// Open cone {k : angle(axis, k) < aperture}; aperture π means all of R^d \ 0.
struct Cone {
  std::vector<double> axis;
  double aperture = kPi;

  // Normalizes the axis.
  static Cone make(std::vector<double> axis, double aperture);
  static Cone full(int d);
  // d = 2, axis (cos θ, sin θ).
  static Cone from_angle(double theta, double aperture);

  int dim() const { return static_cast<int>(axis.size()); }
  double angle_to(std::span<const double> k) const;
  bool contains(std::span<const int> k) const;
  bool contains_real(std::span<const double> k) const;
};

// "dir:θ" (d = 2, radians) or "axis:x1,...,xd".
Cone parse_cone(const std::string& spec, int d, double aperture);

// The five frequency-pair regions used by the product estimates, evaluated
// with the continuum difference ξ - η (no wrap).
std::array<bool, 5> omega_tests(std::span<const double> xi, std::span<const double> eta,
                                double delta, double R);
// Lowest-index region containing (ξ, η), 1..5, or 0 if none.
int omega_label(std::span<const double> xi, std::span<const double> eta, double delta, double R);
void check_omega_params(double delta, double R);

struct RegionMask {
  TorusGrid grid;
  double delta = 0.5;
  double R = 8;
  bool disjoint = true;  // Ω2 with Ω1 removed
  std::array<std::vector<std::uint8_t>, 5> masks;  // (k, l) row-major over lattice indices

  bool in(int region, std::size_t k, std::size_t l) const {
    return masks[region - 1][k * grid.size() + l] != 0;
  }
  std::size_t count(int region) const;
};

RegionMask omega_masks(const TorusGrid& g, double delta, double R, bool disjoint = true);

}  // namespace flw
