#pragma once

#include <string>
#include <vector>

#include "flw/cone.hpp"
#include "flw/norms.hpp"
#include "flw/window.hpp"
#include "json.hpp"

namespace flw {

// Decay-fit parameters shared by every scan mode. A direction is regular when
// the least-squares slope of log2 A_m against m over the octaves
// [m_lo, m_hi] is at most -(d/q + margin), where A_m is the q-mean of
// |F ω| over the dyadic annulus 2^m <= |k| < 2^{m+1} inside the cone
// (max for q = ∞). Classical mode instead asks for decay order
// -slope >= threshold with q = ∞ and ω = 1.
struct WavefrontQuery {
  std::vector<std::vector<int>> positions;
  std::vector<std::vector<double>> directions;
  WindowSpec window;
  double aperture = kPi / 32;
  FLNormSpec spec;
  double threshold = 6;
  int m_lo = 4;
  int m_hi = 6;
  double margin = 0.25;
  // Coefficients below floor * max|F| of the windowed spectrum count as zero.
  double floor = 1e-13;
  // Spacing of the position lattice in samples; unit of position tolerance.
  int scan_step = 16;

  // Position lattice every `step` samples, 2 signs (d = 1) or 32 direction
  // bins with half-bin aperture (d >= 2), degree-11 B-spline window of
  // width 64, octaves [log2 n - 4, log2 n - 2].
  static WavefrontQuery standard(const TorusGrid& g, const FLNormSpec& spec, int step = 16);
  void validate(const TorusGrid& g, bool classical) const;
  nlohmann::json to_json() const;
};

// Evenly spaced directions: ±1 for d = 1, angles 2πb/count for d = 2.
std::vector<std::vector<double>> direction_bins(int d, int count);
std::vector<std::vector<int>> position_lattice(const TorusGrid& g, int step);

struct Verdict {
  bool singular = false;
  double slope = 0;
  double seminorm = 0;
  int octaves = 0;  // nonzero annuli entering the fit
};

struct WavefrontReport {
  TorusGrid grid;
  std::string mode;  // "fl", "classical", "modulation"
  WavefrontQuery query;
  std::vector<Verdict> cells;  // position-major

  std::size_t positions() const { return query.positions.size(); }
  std::size_t directions() const { return query.directions.size(); }
  const Verdict& at(std::size_t p, std::size_t t) const { return cells[p * directions() + t]; }
  std::size_t singular_count() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Per-direction decay verdicts of one (already windowed) spectrum.
std::vector<Verdict> analyze_spectrum(const Spectrum& F, const WavefrontQuery& q, bool classical);

struct DirectionSets {
  std::vector<std::vector<double>> directions;
  std::vector<bool> singular;  // Σ membership per direction bin; Θ is the rest
  std::vector<Verdict> verdicts;
};

// Θ/Σ split of the direction sphere for a signal the caller has already
// localized.
DirectionSets regular_directions(const Signal& f, const FLNormSpec& spec, double aperture,
                                 int direction_count);

WavefrontReport estimate_wavefront(const Signal& f, const WavefrontQuery& q);
WavefrontReport classical_wavefront(const Signal& f, const WavefrontQuery& q);
// Same decay rule applied to sup_{|x - x0| <= radius} |V_φ f(x, ·)|, the
// cone-restricted modulation content near each position.
WavefrontReport modulation_wavefront(const Signal& f, const WavefrontQuery& q, int radius = 2);

struct SuperiorReport {
  std::vector<double> s_list;
  std::size_t npos = 0, ndir = 0;
  // Largest index i such that s_list[0..i] all pass with the query's window
  // and cone; -1 if s_list[0] fails.
  std::vector<int> fixed_index;
  // Pass flags per s when window and cone may shrink with s.
  std::vector<std::vector<bool>> per_s_pass;
  std::vector<std::vector<bool>> fixed_pass;

  nlohmann::json to_json() const;
};

// FL^q_s scans over s_list (q from the query, ω = <·>^s). The per-s variant
// tries windows W, W/2, ... >= min_width and apertures α, α/2 (d >= 2).
SuperiorReport superior_scan(const Signal& f, const WavefrontQuery& q,
                             const std::vector<double>& s_list, int min_width = 32);

struct SplitResult {
  Signal g, h;
  double cone_residual = 0;     // max |F h| on the cone relative to max |F(χ1 f)|
  double g_norm = 0;            // FL norm of g under the given spec
  Verdict remainder;            // classical verdict of χ h on the shrunk cone
};

// ĝ = F(χ1 f) on the cone and 0 elsewhere, h = χ1 f - g; the inner window χ
// must sit where χ1 is identically 1.
SplitResult split_regular(const Signal& f, std::span<const int> x0, const Cone& cone,
                          const FLNormSpec& spec, const WindowSpec& inner, const WindowSpec& outer,
                          double threshold = 6);

}  // namespace flw
