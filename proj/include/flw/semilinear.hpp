#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flw/inclusion.hpp"
#include "flw/pdo.hpp"
#include "json.hpp"

namespace flw {

// G(x, y) = Σ_{0<|α|<=m} a_α(x) y^α in N arguments. A term's coefficient is
// the signal a_α when present, else the constant c.
struct PolynomialNonlinearity {
  struct Term {
    std::vector<int> alpha;
    cplx c = 1;
    std::optional<Signal> a;
  };

  int N = 1;
  std::vector<Term> terms;

  // Validates every term; throws on |α| = 0, negative entries or wrong arity.
  void check() const;
  int degree() const;
  nlohmann::json to_json() const;

  // c y_i^p
  static PolynomialNonlinearity monomial(int N, int i, int p, cplx c = 1);
};

Signal eval_nonlinearity(const PolynomialNonlinearity& G, const std::vector<Signal>& args);

struct Jet {
  int k = 0;
  std::vector<std::vector<int>> betas;  // graded lexicographic
  std::vector<Signal> components;       // ∂^β f

  std::size_t size() const { return components.size(); }
};

// Multi-indices |β| <= k in d variables: by degree, then lexicographically
// descending, e.g. (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).
std::vector<std::vector<int>> graded_multi_indices(int d, int k);
// Components by the spectral multipliers (ik)^β.
Jet jet(const Signal& f, int k);

// Nonlinearity hypotheses: s >= d/q', s <= σ <= 2s - d/q', r >= d/q' (strict
// inequalities on s and r when q = ∞).
nlohmann::json nonlinearity_hypotheses(int d, double q, double s, double sigma, double r);

// WF_σ(G(x, f_1, ..., f_N)) inside the union of WF_{σ + (m-1)r}(f_j).
InclusionReport wf_nonlinearity_check(const PolynomialNonlinearity& G,
                                      const std::vector<Signal>& fs, double q, double s,
                                      double sigma, double r);

struct BootstrapStep {
  int iteration = 0;
  double sigma = 0;
  double gain = 0;
};

struct BootstrapLedger {
  double q = 1;
  int d = 1;
  double s = 0;
  int k = 0, m = 1;
  double r = 0;
  int n = 1;
  int variant = 1;
  bool rejected = false;
  std::string rejection;  // the violated inequality
  double cap = 0;         // 2s - d/q'
  double gain = 0;        // per round: n - k - (m-1)r, or n - k for variant 2
  std::vector<BootstrapStep> trace;
  double final_index = 0;
  int round_bound = 0;

  nlohmann::json to_json() const;
};

// Index calculus of the regularity bootstrap: σ_0 = s, σ_{i+1} = min(σ_i +
// gain, cap); the round at σ = cap lifts f to cap + n.
BootstrapLedger bootstrap_indices(double q, int d, double s, int k, int m, double r, int n,
                                  int variant);

struct DemoResult {
  Signal f;
  int iterations = 0;
  double residual = 0;  // ‖P f - G(x, J_k f) - source‖₂ / ‖source‖₂
  std::vector<double> updates;

  nlohmann::json to_json() const;
};

// Fixed point f ← P^{-1}(G(x, J_k f) + source) for an x-independent P with
// |P(k)| bounded away from 0 on the lattice.
DemoResult demo_solve(const Symbol& P, const PolynomialNonlinearity& G, int k,
                      const Signal& source, double tol = 1e-10, int max_iter = 200);

}  // namespace flw
