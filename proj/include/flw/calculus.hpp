#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "flw/inclusion.hpp"
#include "flw/norms.hpp"
#include "json.hpp"

namespace flw {

// A norm ratio with its bound. Certified bounds are lattice theorems and must
// hold to `tolerance`; uncertified ones are reported only.
struct NormRatioReport {
  std::string name;
  double ratio = 0;
  double bound = kInf;
  bool certified = false;
  double tolerance = 1e-10;
  nlohmann::json params = nlohmann::json::object();

  bool ok() const { return !certified || ratio <= bound * (1 + tolerance); }
  nlohmann::json to_json() const;
};

// max ω(k) / (ω1(k ⊖ l) ω2(l)) over lattice pairs, ⊖ the wrapped difference.
double moderation_constant(const TorusGrid& g, const Weight& w, const Weight& w1,
                           const Weight& w2);

// ‖f1 f2‖_{FL^q_ω} / (‖f1‖_{FL^q1_ω1} ‖f2‖_{FL^q2_ω2}), certified against
// (2π)^{-d/2} times the scanned moderation constant when 1/q1 + 1/q2 >= 1 + 1/q.
NormRatioReport product_norm_check(const Signal& f1, const Signal& f2, double q, double q1,
                                   double q2, const Weight& w, const Weight& w1, const Weight& w2);

// ‖f1 * f2‖_{FL^q_ω} / (‖f1‖ ‖f2‖) against (2π)^{d/2} max ω/(ω1 ω2), with
// 1/q1 + 1/q2 = 1/q.
NormRatioReport convolve_norm_check(const Signal& f1, const Signal& f2, double q, double q1,
                                    double q2, const Weight& w, const Weight& w1,
                                    const Weight& w2);

// Exponent conditions of the critical product estimate; throws naming the
// first violated one.
void check_product_exponents(int d, double q, double s1, double s2, double r, double s);

// ‖f1 f2‖_{FL^q_s} / (‖f1‖_{FL^q_s1} ‖f2‖_{FL^q_{s2+r}}). The constant is not
// explicit; only q = 1 with r = 0 is certified (via the moderation scan).
NormRatioReport product_critical_norm_check(const Signal& f1, const Signal& f2, double q,
                                            double s1, double s2, double r, double s);

struct StabilityReport {
  std::string name;
  int n = 0;
  double at_n = 0, at_2n = 0;
  double limit = 0.5;

  double change() const;
  bool ok() const { return std::isfinite(at_n) && std::isfinite(at_2n) && change() < limit; }
  nlohmann::json to_json() const;
};

// Largest critical-product ratio over random pairs with lattice-keyed spectra
// decaying like <k>^{-(order + d/q + 1)}, at n and 2n (d = 1).
StabilityReport critical_product_stability(double q, double s1, double s2, double r, double s,
                                           int n, int trials, std::uint64_t seed);

// FL^q_s scan at the standard query.
WavefrontReport fl_scan(const Signal& f, double q, double s);

// Cells of WF(f1) translated by every point of supp f1 (|f1| > 1e-8 max).
InclusionReport wf_convolution_check(const Signal& f1, const Signal& f2, double q, double s);

enum class ProductMode { thm4_1_case1, thm4_1_case2, thm4_3 };
ProductMode parse_product_mode(const std::string& s);
const char* product_mode_name(ProductMode m);

struct ProductWFParams {
  double q = 1;
  double s1 = 0, s2 = 0;
  double s = 0;   // target scale (thm4_1_case2); computed for thm4_3
  double r = 0;   // thm4_3
  double N1 = 0, N2 = 0;
  // Known FL^q orders of f1 and f2 when available; membership margins are
  // then checked and reported.
  double order1 = std::numeric_limits<double>::quiet_NaN();
  double order2 = std::numeric_limits<double>::quiet_NaN();
};

// Validates the theorem hypotheses (throws naming the violated one) and
// returns the left and right scales with the hypothesis margins.
nlohmann::json product_hypotheses(int d, ProductMode mode, ProductWFParams& p);

InclusionReport wf_product_check(const Signal& f1, const Signal& f2, ProductMode mode,
                                 ProductWFParams p);

// ‖f_1 ⋯ f_N g‖_{FL^q_s} / (Π ‖f_i‖_{FL^q_s} ‖g‖_{FL^q0_s}); params carry
// the per-factor constant ratio^{1/(N+1)}. Certified for q = q0 = 1, s = 0.
NormRatioReport algebra_check(const std::vector<Signal>& fs, const Signal& g, double q, double q0,
                              double s);

}  // namespace flw
