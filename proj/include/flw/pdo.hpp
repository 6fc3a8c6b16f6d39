#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flw/inclusion.hpp"
#include "json.hpp"

namespace flw {

// Sampled S^m_{1,0} bounds: sup |a|/<k>^m, sup of first k-differences over
// <k>^{m-1}, sup of first x-differences (divided by h) over <k>^m.
struct SymbolCertificate {
  double sup = 0, dk = 0, dx = 0;
  std::size_t samples = 0;

  bool finite() const;
  nlohmann::json to_json() const;
};

// Symbol a(x, k) of order m on a grid, either a finite sum Σ b_r(x) c_r(k)
// (applied term by term through the FFT) or a full table over positions ×
// lattice points.
struct Symbol {
  using XPart = std::function<cplx(std::span<const double>)>;  // x in [0, 2π)^d
  using KPart = std::function<cplx(std::span<const int>)>;

  struct Term {
    XPart b;  // empty: b ≡ 1
    KPart c;
  };
  // b(x) coeff k^alpha, times |k|² when laplacian is set; alpha is padded
  // with zeros to the grid dimension.
  struct Monomial {
    XPart b;
    cplx coeff = 1;
    std::vector<int> alpha;
    bool laplacian = false;
  };

  std::string name;
  double order = 0;
  std::vector<Term> terms;
  TorusGrid table_grid{};
  std::vector<cplx> table;  // position-major, centered lattice order
  std::vector<Monomial> monomials;  // nonempty for differential operators

  static Symbol multiplier(std::string name, double order, KPart c);
  static Symbol separable(std::string name, double order, std::vector<Term> terms);
  static Symbol from_table(const TorusGrid& g, double order, std::vector<cplx> values);
  static Symbol differential(std::string name, double order, std::vector<Monomial> monomials);
  // Σ c_j k_1^j
  static Symbol polynomial(std::vector<double> coeffs);
  static Symbol laplace_plus_one();  // 1 + |k|²
  static Symbol dx1();               // i k_1

  bool is_table() const { return !table.empty(); }
  bool is_differential() const { return !monomials.empty(); }
  bool x_independent() const;
  cplx eval(const TorusGrid& g, std::size_t j, std::span<const int> k) const;
  SymbolCertificate certificate(const TorusGrid& g) const;
};

// "poly:<c0,c1,...>", "laplace+1", "dx1", "table:<path>" (JSON with order, d,
// n and position-major "re"/"im" arrays).
Symbol parse_symbol(const std::string& spec);

// (a(x,D)f)(x_j) = (2π)^{-d/2} Σ_k a(x_j, k) f̂(k) e^{ik·x_j}
Signal quantize_apply(const Symbol& a, const Signal& f);

// Differential symbols only: each k^alpha becomes (-i∂)^alpha through 8th-order
// central differences, so the kernel is supported within 4|alpha| samples.
Signal apply_differential(const Symbol& a, const Signal& f);

struct CharQuery {
  double c = 0.1;
  double R = 16;
  double aperture = kPi / 32;
  int radius = 8;  // spatial window: periodic Chebyshev distance in samples
};

// |a(x, k)| > c |k|^m for every lattice k in the cone with |k| > R and every
// grid x within the spatial window of x0.
bool noncharacteristic_at(const Symbol& a, const TorusGrid& g, std::span<const int> x0,
                          std::span<const double> theta, const CharQuery& cq);

std::vector<SingularPoint> char_set_scan(const Symbol& a, const TorusGrid& g,
                                         const std::vector<std::vector<int>>& positions,
                                         const std::vector<std::vector<double>>& directions,
                                         const CharQuery& cq);

struct TransportReport {
  InclusionReport lowered;       // WF_{s-m}(Af) ⊆ WF_s(f)
  // Singular points of f at least one tolerance away from Char(a) must be
  // singular for Af.
  InclusionReport recovered;
  InclusionReport microlocal;    // WF_s(f) ⊆ WF_{s-m}(Af) ∪ Char(a)
  std::size_t char_points = 0;
  SymbolCertificate certificate;

  bool ok() const { return lowered.ok() && recovered.ok() && microlocal.ok(); }
  nlohmann::json to_json() const;
};

// a(x, k) ρ(|k|) with ρ a C^∞ cutoff, 1 below n/4 and 0 from n/2 on. Without
// it the Nyquist truncation of a(k) f̂(k) rings at every position.
Symbol dealiased(const Symbol& a, const TorusGrid& g);

// Standard query with the top octave dropped, inside the band where the
// dealiased symbol is exact.
WavefrontQuery transport_query(const TorusGrid& g, double q, double s);

// Differential symbols act through apply_differential and are scanned with the
// standard query; others act as Op(dealiased a) scanned with transport_query.
// Char(a) is scanned on the same positions and directions with R at the first
// fitted octave and the estimator's aperture (half-lines for d = 1).
TransportReport transport_check(const Symbol& a, const Signal& f, double q, double s,
                                double c = 0.1);

// WF_{s-1}(∂_axis f) ⊆ WF_s(f), with the derivative taken by central
// differences and both scans on the standard query.
InclusionReport derivative_check(const Signal& f, int axis, double q, double s);

}  // namespace flw
