#pragma once

#include <string>
#include <vector>

#include "flw/corpus.hpp"
#include "flw/wavefront.hpp"
#include "json.hpp"

namespace flw {

// Matching tolerance between singular verdicts: periodic Chebyshev distance
// in samples, and angle between direction vectors.
struct Tolerance {
  int samples = 32;
  double angle = 2 * kPi / 32 + 1e-9;
};

// Two scan steps in position and one direction bin (exact match for the two
// signs of d = 1).
Tolerance standard_tolerance(const WavefrontQuery& q);

struct SingularPoint {
  std::vector<int> x;
  std::vector<double> theta;
};

std::vector<SingularPoint> singular_points(const WavefrontReport& r);
int periodic_distance(const TorusGrid& g, std::span<const int> a, std::span<const int> b);
double direction_angle(std::span<const double> a, std::span<const double> b);
bool near(const TorusGrid& g, const SingularPoint& a, const SingularPoint& b, const Tolerance& tol);

struct InclusionReport {
  std::string name;
  std::size_t lhs = 0, rhs = 0;
  std::vector<SingularPoint> violations;
  nlohmann::json notes = nlohmann::json::object();

  bool ok() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

// Every point of lhs must have a point of rhs within tolerance.
InclusionReport check_inclusion(const std::string& name, const TorusGrid& g,
                                const std::vector<SingularPoint>& lhs,
                                const std::vector<SingularPoint>& rhs, const Tolerance& tol);

// Two-sided agreement: each side included in the other.
InclusionReport check_agreement(const std::string& name, const TorusGrid& g,
                                const std::vector<SingularPoint>& a,
                                const std::vector<SingularPoint>& b, const Tolerance& tol);

struct OracleMatch {
  std::size_t expected_singular = 0;  // components that must be seen
  std::size_t expected_regular = 0;   // components that must stay silent
  std::vector<SingularPoint> misses;
  std::vector<SingularPoint> extras;

  bool ok() const { return misses.empty() && extras.empty(); }
  nlohmann::json to_json() const;
};

// Compares a scan with known singular structure. A component must be seen
// (every support point and direction matched) when the scan scale exceeds
// its order by at least `band`, and must not explain any verdict when the
// scale is at least `band` below it; in between it may go either way.
// Classical scans use the decay rate against the query threshold instead.
OracleMatch match_oracle(const WavefrontReport& r, const std::vector<OracleComponent>& oracle,
                         double s, double band = 1.5);

// Σ(χf) ⊆ Σ(f): FL^q_s scans of the windowed and the raw signal.
InclusionReport windowing_check(const Signal& f, std::span<const int> center,
                                const WindowSpec& window, double q, double s);

struct Rung {
  double q;
  double s;  // ω = <·>^s
};

// Along a ladder with q non-decreasing and s non-increasing, the singular set
// of each rung lies inside that of the previous one.
InclusionReport monotonicity_check(const Signal& f, const std::vector<Rung>& ladder);

}  // namespace flw
