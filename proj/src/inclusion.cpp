#include "flw/inclusion.hpp"

#include <algorithm>
#include <cmath>

#include "flw/window.hpp"

namespace flw {

Tolerance standard_tolerance(const WavefrontQuery& q) {
  Tolerance t;
  t.samples = 2 * q.scan_step;
  std::size_t nd = q.directions.size();
  t.angle = (q.directions.empty() || q.directions[0].size() == 1) ? 1e-9 : 2 * kPi / nd + 1e-9;
  return t;
}

std::vector<SingularPoint> singular_points(const WavefrontReport& r) {
  std::vector<SingularPoint> out;
  for (std::size_t p = 0; p < r.positions(); ++p)
    for (std::size_t t = 0; t < r.directions(); ++t)
      if (r.at(p, t).singular) out.push_back({r.query.positions[p], r.query.directions[t]});
  return out;
}

int periodic_distance(const TorusGrid& g, std::span<const int> a, std::span<const int> b) {
  int m = 0;
  for (int i = 0; i < g.d; ++i) {
    int d = wrap(a[i] - b[i], g.n);
    m = std::max(m, std::min(d, g.n - d));
  }
  return m;
}

double direction_angle(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  double c = dot / std::sqrt(na * nb);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

bool near(const TorusGrid& g, const SingularPoint& a, const SingularPoint& b, const Tolerance& tol) {
  if (periodic_distance(g, a.x, b.x) > tol.samples) return false;
  // an empty direction stands for "every direction"
  if (a.theta.empty() || b.theta.empty()) return true;
  return direction_angle(a.theta, b.theta) <= tol.angle;
}

nlohmann::json InclusionReport::to_json() const {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& p : violations) v.push_back({{"x0", p.x}, {"theta", p.theta}});
  return {{"name", name}, {"lhs", lhs}, {"rhs", rhs}, {"violations", v}, {"ok", ok()},
          {"notes", notes}};
}

InclusionReport check_inclusion(const std::string& name, const TorusGrid& g,
                                const std::vector<SingularPoint>& lhs,
                                const std::vector<SingularPoint>& rhs, const Tolerance& tol) {
  InclusionReport r;
  r.name = name;
  r.lhs = lhs.size();
  r.rhs = rhs.size();
  for (const auto& a : lhs) {
    bool hit = false;
    for (const auto& b : rhs)
      if (near(g, a, b, tol)) {
        hit = true;
        break;
      }
    if (!hit) r.violations.push_back(a);
  }
  return r;
}

InclusionReport check_agreement(const std::string& name, const TorusGrid& g,
                                const std::vector<SingularPoint>& a,
                                const std::vector<SingularPoint>& b, const Tolerance& tol) {
  InclusionReport r = check_inclusion(name, g, a, b, tol);
  InclusionReport back = check_inclusion(name, g, b, a, tol);
  r.violations.insert(r.violations.end(), back.violations.begin(), back.violations.end());
  return r;
}

nlohmann::json OracleMatch::to_json() const {
  auto pts = [](const std::vector<SingularPoint>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : v) a.push_back({{"x0", p.x}, {"theta", p.theta}});
    return a;
  };
  return {{"expected_singular", expected_singular}, {"expected_regular", expected_regular},
          {"misses", pts(misses)}, {"extras", pts(extras)}, {"ok", ok()}};
}

OracleMatch match_oracle(const WavefrontReport& r, const std::vector<OracleComponent>& oracle,
                         double s, double band) {
  const TorusGrid& g = r.grid;
  Tolerance tol = standard_tolerance(r.query);
  bool classical = r.mode == "classical";
  enum class Want { singular, regular, either };
  std::vector<Want> want;
  OracleMatch m;
  for (const auto& c : oracle) {
    Want w = Want::either;
    if (classical) {
      if (c.decay <= r.query.threshold - band) w = Want::singular;
      if (c.decay >= r.query.threshold + band) w = Want::regular;
    } else {
      double o = c.order(r.query.spec.q);
      if (s >= o + band) w = Want::singular;
      if (s <= o - band) w = Want::regular;
    }
    if (w == Want::singular) ++m.expected_singular;
    if (w == Want::regular) ++m.expected_regular;
    want.push_back(w);
  }
  auto found = singular_points(r);
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    if (want[i] != Want::singular) continue;
    const auto& dirs = oracle[i].directions.empty() ? r.query.directions : oracle[i].directions;
    for (const auto& x : oracle[i].support)
      for (const auto& th : dirs) {
        SingularPoint target{x, th};
        bool hit = false;
        for (const auto& p : found)
          if (near(g, p, target, tol)) {
            hit = true;
            break;
          }
        if (!hit) m.misses.push_back(target);
      }
  }
  for (const auto& p : found) {
    bool explained = false;
    for (std::size_t i = 0; i < oracle.size() && !explained; ++i) {
      if (want[i] == Want::regular) continue;
      for (const auto& x : oracle[i].support) {
        if (periodic_distance(g, p.x, x) > tol.samples) continue;
        if (oracle[i].directions.empty()) {
          explained = true;
          break;
        }
        for (const auto& th : oracle[i].directions)
          if (direction_angle(p.theta, th) <= tol.angle) {
            explained = true;
            break;
          }
        if (explained) break;
      }
    }
    if (!explained) m.extras.push_back(p);
  }
  return m;
}

InclusionReport windowing_check(const Signal& f, std::span<const int> center,
                                const WindowSpec& window, double q, double s) {
  WavefrontQuery qu = WavefrontQuery::standard(f.grid, {q, Weight::power(s)});
  WavefrontReport raw = estimate_wavefront(f, qu);
  WavefrontReport win = estimate_wavefront(apply_window(f, center, window), qu);
  InclusionReport r = check_inclusion("windowing", f.grid, singular_points(win),
                                      singular_points(raw), standard_tolerance(qu));
  r.notes = {{"q", format_exponent(q)},
             {"s", s},
             {"window", {{"shape", window_shape_name(window.shape)}, {"width", window.width}}},
             {"center", std::vector<int>(center.begin(), center.end())}};
  return r;
}

InclusionReport monotonicity_check(const Signal& f, const std::vector<Rung>& ladder) {
  if (ladder.size() < 2) throw Error("ladder needs at least two rungs");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i].q < ladder[i - 1].q || ladder[i].s > ladder[i - 1].s)
      throw Error("ladder must have q non-decreasing and s non-increasing");
  std::vector<std::vector<SingularPoint>> sets;
  Tolerance tol;
  for (const auto& r : ladder) {
    WavefrontQuery qu = WavefrontQuery::standard(f.grid, {r.q, Weight::power(r.s)});
    tol = standard_tolerance(qu);
    sets.push_back(singular_points(estimate_wavefront(f, qu)));
  }
  InclusionReport out;
  out.name = "monotonicity";
  nlohmann::json rungs = nlohmann::json::array();
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    rungs.push_back({{"q", format_exponent(ladder[i].q)}, {"s", ladder[i].s}, {"cells", sets[i].size()}});
    if (i == 0) continue;
    InclusionReport step = check_inclusion("monotonicity", f.grid, sets[i], sets[i - 1], tol);
    out.lhs += step.lhs;
    out.rhs += step.rhs;
    out.violations.insert(out.violations.end(), step.violations.begin(), step.violations.end());
  }
  out.notes = {{"rungs", rungs}};
  return out;
}

}  // namespace flw
