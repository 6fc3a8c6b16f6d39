#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flw/pdo.hpp"
#include "json.hpp"

namespace flw {

// Outcome of one verification suite; `report` holds every sub-check with its
// parameters and is a pure function of the inputs.
struct SuiteResult {
  std::string name;
  bool ok = true;
  nlohmann::json report = nlohmann::json::object();

  // Appends a named sub-check and folds its verdict into ok.
  void add(const std::string& key, bool pass, nlohmann::json detail);
};

// Parseval, transform round trip, convolution theorem and T_F duality on
// random instances (d <= 2, n <= 32), each within `tolerance` relative.
SuiteResult identity_suite(int trials, std::uint64_t seed, double tolerance = 1e-10);

// Mixed-norm T_F bounds: case 1 for q in {1, 2, 4, ∞}, case 3 for q in {1, 1.5, 2}.
SuiteResult tf_bound_suite(int trials, std::uint64_t seed);
// Case 2 (q = 4, r = 0.6, d = 1) at n = 16 and 32: the bound holds with the
// proof constant and the largest ratio moves by less than half.
SuiteResult tf_case2_stability(int trials, std::uint64_t seed);

// Weighted Young convolution and ℓ¹ product bounds on random signals.
SuiteResult young_suite(int trials, std::uint64_t seed);
SuiteResult product_suite(int trials, std::uint64_t seed);
SuiteResult critical_product_suite(int trials, std::uint64_t seed);
SuiteResult algebra_suite(int trials, std::uint64_t seed);

// Fitted slice-norm constants for every power-kernel branch and the tail region.
SuiteResult slice_suite(int range = 128);

// Inclusion checks on designated corpus pairs.
SuiteResult wf_product_suite();
SuiteResult wf_convolution_suite();
SuiteResult wf_nonlinearity_suite();
SuiteResult transport_suite();
// Windowing, a three-rung monotonicity ladder and the derivative inclusion.
SuiteResult inclusion_suite();

// Oracle recovery on the standard corpus, FL^1_s probes 1.5 away from each
// component order; classical-scan matches are reported without gating.
SuiteResult oracle_suite();
// Accumulating cusps: classical-singular at x = 0 while per-s FL^1_s scans pass for
// s in {0, 1, 2}.
SuiteResult strictness_suite();

// Single bootstrap case; ok when accepted with final_index = 2s + n - d/q'.
SuiteResult bootstrap_case(double q, int d, double s, int k, int m, double r, int n, int variant);
// Twenty-case table with expected rejections and the m-invariance of variant 2.
SuiteResult bootstrap_table();

// Counting-measure monotonicity over random signals, FL-modulation ratio
// spread over fixed-support signals, and WF verdict agreement on the corpus.
SuiteResult modulation_suite(int trials, int signals, std::uint64_t seed);

// (2 + sin x_1)(1 + |k|²), order 2.
Symbol elliptic_test_symbol();

}  // namespace flw
