#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flw {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform periodic grid on the d-torus [0, 2π)^d with n samples per axis.
struct TorusGrid {
  int d = 1;
  int n = 8;

  static TorusGrid make(int d, int n);

  double h() const { return 2.0 * kPi / n; }
  std::size_t size() const;
  // Measure of one cell, h^d.
  double cell() const;

  bool operator==(const TorusGrid&) const = default;
};

// Row-major multi-index helpers shared by sample and lattice arrays.
void unravel(const TorusGrid& g, std::size_t idx, std::span<int> out);
std::size_t ravel(const TorusGrid& g, std::span<const int> idx);
// Periodic wrap of an integer index into [0, n).
inline int wrap(int j, int n) { return ((j % n) + n) % n; }

struct Signal {
  TorusGrid grid;
  std::vector<cplx> values;

  static Signal zeros(const TorusGrid& g);
  void check() const;
};

// Coefficients indexed by the centered lattice k ∈ {-n/2..n/2-1}^d, stored
// row-major by k + n/2.
struct Spectrum {
  TorusGrid grid;
  std::vector<cplx> coeffs;

  static Spectrum zeros(const TorusGrid& g);
  cplx& at(std::span<const int> k);
  const cplx& at(std::span<const int> k) const;
};

// Precomputed lattice geometry: coordinates, |k| and <k> for every index.
struct FrequencyLattice {
  TorusGrid grid;
  std::vector<int> coords;      // size() * d, centered
  std::vector<double> norm;     // |k|
  std::vector<double> bracket;  // (1 + |k|^2)^{1/2}
  std::vector<std::size_t> fft_slot;  // natural-order DFT index of each k

  explicit FrequencyLattice(const TorusGrid& g);
  std::size_t size() const { return norm.size(); }
  std::span<const int> k(std::size_t i) const {
    return {coords.data() + i * grid.d, static_cast<std::size_t>(grid.d)};
  }
  std::size_t index(std::span<const int> k) const;
  // Index of the origin.
  std::size_t origin() const;
};

// Cached per grid; safe to call from several threads.
const FrequencyLattice& lattice(const TorusGrid& g);

Spectrum forward_transform(const Signal& f);
Signal inverse_transform(const Spectrum& F);

Signal cyclic_convolve(const Signal& f, const Signal& g);
Signal pointwise_product(const Signal& f, const Signal& g);

// Spatial sample coordinate x_j wrapped into [-π, π).
std::vector<double> centered_position(const TorusGrid& g, std::size_t j);

struct Weight;
double lp_norm(const Signal& f, double p, const Weight* spatial_weight = nullptr);

// (Σ|v|^q)^{1/q}, max when q = ∞; fixed summation order.
double lq_sum(std::span<const double> v, double q);

double parse_exponent(const std::string& s);
std::string format_exponent(double q);
// Hölder conjugate.
double conjugate(double q);

}  // namespace flw
