#pragma once

#include <vector>

#include "flw/inclusion.hpp"
#include "flw/weight.hpp"
#include "flw/window.hpp"
#include "json.hpp"

namespace flw {

// V(x_j, k) = (2π)^{-d/2} h^d Σ_y f(y) conj(φ(y - x_j)) e^{-ik·y} at every
// grid position x_j and lattice point k.
struct STFT {
  static constexpr std::size_t kMaxCells = std::size_t(1) << 22;

  TorusGrid grid;
  std::vector<cplx> values;  // position-major: values[j * size + k]

  const cplx& at(std::size_t j, std::size_t k) const { return values[j * grid.size() + k]; }
};

STFT stft(const Signal& f, const WindowSpec& window);

// Measure used for the inner L^p over positions: h^d per cell, or counting.
enum class XMeasure { cell, counting };

// Outer ℓ^q over k of the inner L^p over x of |V ω|, ω(x, ξ) = <ξ>^s <x>^t.
double modulation_norm(const Signal& f, double p, double q, const SectionedWeight& w,
                       const WindowSpec& window, XMeasure measure = XMeasure::cell);
double modulation_norm(const STFT& V, double p, double q, const SectionedWeight& w,
                       XMeasure measure = XMeasure::cell);

// Smallest periodic box side containing |f| > 1e-12 max|f|, per axis maximum.
int support_extent(const Signal& f);

struct EquivalenceReport {
  double p = 2, q = 2, s = 0;
  std::size_t count = 0;
  int support = 0;  // largest support extent seen
  double lower_ratio = 0, upper_ratio = 0;  // min / max of modulation / FL

  double spread() const { return lower_ratio > 0 ? upper_ratio / lower_ratio : kInf; }
  nlohmann::json to_json() const;
};

// Ratios ‖f‖_{M^{p,q}_s} / ‖f‖_{FL^q_s} over compactly supported signals.
EquivalenceReport equivalence_check(const std::vector<Signal>& fs, double q, double s, double p,
                                    const WindowSpec& window);

struct EmbeddingReport {
  double q = 1, p1 = 1, p2 = kInf;
  double upper = 0;         // ‖f‖_{M^{p2,q}} / ‖f‖_{FL^q}
  double lower = 0;         // ‖f‖_{FL^q} / ‖f‖_{M^{p1,q}}
  double monotone_ratio = 0;  // counting-measure ‖f‖_{M^{p2,q}} / ‖f‖_{M^{p1,q}}
  double tolerance = 1e-10;

  bool ok() const { return monotone_ratio <= 1 + tolerance; }
  nlohmann::json to_json() const;
};

// Requires p1 <= min(q, q') and max(q, q') <= p2.
EmbeddingReport embedding_check(const Signal& f, double q, double p1, double p2,
                                const WindowSpec& window);

// ‖f‖_{M^{p2,q2}} / ‖f‖_{M^{p1,q1}} with counting measure in x, p1 <= p2, q1 <= q2.
double modulation_monotone_ratio(const STFT& V, double p1, double q1, double p2, double q2,
                                 const SectionedWeight& w);

// Verdicts from cone FL seminorms against verdicts from cone-restricted
// modulation content, two-sided at the standard tolerance.
InclusionReport modulation_wf_agreement(const Signal& f, double q, double s);

}  // namespace flw
