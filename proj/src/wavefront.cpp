#include "flw/wavefront.hpp"

#include <cmath>
#include <sstream>

#include "flw/parallel.hpp"
#include "flw/simd.hpp"

namespace flw {

namespace {

int log2_exact(int n) {
  int m = 0;
  while ((1 << (m + 1)) <= n) ++m;
  return m;
}

// Lattice points of each direction cone, bucketed by octave.
struct Geometry {
  int m_lo = 0, m_hi = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> annuli;  // [dir][m - m_lo]
  std::vector<std::vector<std::uint32_t>> cone;                 // [dir], k != 0

  Geometry(const TorusGrid& g, const std::vector<std::vector<double>>& dirs, double aperture,
           int lo, int hi)
      : m_lo(lo), m_hi(hi) {
    const FrequencyLattice& L = lattice(g);
    std::vector<Cone> cones;
    for (const auto& d : dirs) cones.push_back(Cone::make(d, aperture));
    annuli.assign(dirs.size(), std::vector<std::vector<std::uint32_t>>(hi - lo + 1));
    cone.assign(dirs.size(), {});
    for (std::size_t i = 0; i < L.size(); ++i) {
      auto k = L.k(i);
      long long r2 = 0;
      for (int c : k) r2 += static_cast<long long>(c) * c;
      if (r2 == 0) continue;
      int m = 0;
      while ((1LL << (2 * (m + 1))) <= r2) ++m;  // 4^m <= |k|^2 < 4^{m+1}
      for (std::size_t t = 0; t < cones.size(); ++t) {
        if (!cones[t].contains(k)) continue;
        cone[t].push_back(static_cast<std::uint32_t>(i));
        if (m >= lo && m <= hi) annuli[t][m - lo].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
};

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// mag: |F| on the lattice (already floored); w: weight on the lattice.
Verdict judge(const std::vector<double>& mag, const std::vector<double>& w, const Geometry& geo,
              std::size_t t, double q, int d, bool classical, const WavefrontQuery& qu) {
  Verdict v;
  std::vector<double> vals;
  vals.reserve(geo.cone[t].size());
  for (auto i : geo.cone[t]) vals.push_back(mag[i] * w[i]);
  v.seminorm = lq_sum(vals, q);

  std::vector<double> xs, ys;
  bool last_zero = false;
  for (int m = geo.m_lo; m <= geo.m_hi; ++m) {
    const auto& ann = geo.annuli[t][m - geo.m_lo];
    vals.clear();
    for (auto i : ann) vals.push_back(mag[i] * w[i]);
    double a = 0;
    if (!vals.empty()) {
      a = lq_sum(vals, q);
      if (!std::isinf(q)) a /= std::pow(static_cast<double>(vals.size()), 1.0 / q);
    }
    last_zero = !(a > 0);
    if (a > 0) {
      xs.push_back(m);
      ys.push_back(std::log2(a));
    }
  }
  v.octaves = static_cast<int>(xs.size());
  if (xs.size() < 2 || last_zero) {
    v.slope = -kInf;
    v.singular = false;
    return v;
  }
  v.slope = fit_slope(xs, ys);
  if (classical)
    v.singular = !(-v.slope >= qu.threshold);
  else
    v.singular = !(v.slope <= -(d / q + qu.margin));
  return v;
}

// Coefficients below floor * max(local peak, ref) are dropped; ref keeps
// windows that only see roundoff from reading as flat spectra.
std::vector<double> floored_magnitude(const Spectrum& F, double floor, double ref = 0) {
  std::vector<double> mag(F.coeffs.size());
  simd::weighted_abs(F.coeffs.data(), nullptr, mag.data(), mag.size());
  double mx = simd::max_value(mag.data(), mag.size());
  double thr = floor * std::max(mx, ref);
  for (double& m : mag)
    if (m < thr) m = 0;
  return mag;
}

std::vector<Verdict> judge_all(const std::vector<double>& mag, const std::vector<double>& w,
                               const Geometry& geo, const WavefrontQuery& qu, double q, int d,
                               bool classical) {
  std::vector<Verdict> out(qu.directions.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = judge(mag, w, geo, t, q, d, classical, qu);
  return out;
}

// Upper bound of any windowed coefficient: (2π)^{-d/2} h^d max|f| Σ χ.
double global_reference(const Signal& f, const WindowSpec& w) {
  const TorusGrid& g = f.grid;
  double peak = 0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  Signal chi = make_window(g, std::vector<int>(g.d, 0), w);
  double mass = 0;
  for (const auto& v : chi.values) mass += v.real();
  return std::pow(2 * kPi, -0.5 * g.d) * g.cell() * peak * mass;
}

WavefrontReport scan(const Signal& f, const WavefrontQuery& qu, bool classical, int radius,
                     const char* mode) {
  const TorusGrid& g = f.grid;
  qu.validate(g, classical);
  const double ref = global_reference(f, qu.window);
  Geometry geo(g, qu.directions, qu.aperture, qu.m_lo, qu.m_hi);
  double q = classical ? kInf : qu.spec.q;
  std::vector<double> w =
      classical ? std::vector<double>(g.size(), 1.0) : qu.spec.weight.on_lattice(g);

  WavefrontReport rep;
  rep.grid = g;
  rep.mode = mode;
  rep.query = qu;
  std::size_t nd = qu.directions.size();
  rep.cells.resize(qu.positions.size() * nd);
  parallel_for(qu.positions.size(), [&](std::size_t p) {
    std::vector<double> mag;
    if (radius <= 0) {
      mag = floored_magnitude(forward_transform(apply_window(f, qu.positions[p], qu.window)),
                              qu.floor, ref);
    } else {
      int side = 2 * radius + 1;
      std::size_t count = 1;
      for (int a = 0; a < g.d; ++a) count *= side;
      std::vector<int> c(g.d);
      for (std::size_t o = 0; o < count; ++o) {
        std::size_t t = o;
        for (int a = 0; a < g.d; ++a) {
          c[a] = wrap(qu.positions[p][a] + static_cast<int>(t % side) - radius, g.n);
          t /= side;
        }
        auto m = floored_magnitude(forward_transform(apply_window(f, c, qu.window)), qu.floor, ref);
        if (mag.empty())
          mag = std::move(m);
        else
          for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::max(mag[i], m[i]);
      }
    }
    auto v = judge_all(mag, w, geo, qu, q, g.d, classical);
    for (std::size_t t = 0; t < nd; ++t) rep.cells[p * nd + t] = v[t];
  });
  return rep;
}

nlohmann::json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace

std::vector<std::vector<double>> direction_bins(int d, int count) {
  if (d == 1) return {{1.0}, {-1.0}};
  if (d != 2) throw Error("direction bins are defined for d = 1 and d = 2");
  if (count < 4) throw Error("direction_count must be >= 4");
  std::vector<std::vector<double>> out;
  for (int b = 0; b < count; ++b) {
    double th = 2 * kPi * b / count;
    out.push_back({std::cos(th), std::sin(th)});
  }
  return out;
}

std::vector<std::vector<int>> position_lattice(const TorusGrid& g, int step) {
  if (step < 1 || g.n % step != 0) throw Error("scan step must divide n");
  int per = g.n / step;
  std::size_t count = 1;
  for (int a = 0; a < g.d; ++a) count *= per;
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<int> p(g.d);
    std::size_t t = i;
    for (int a = g.d - 1; a >= 0; --a) {
      p[a] = static_cast<int>(t % per) * step;
      t /= per;
    }
    out.push_back(std::move(p));
  }
  return out;
}

WavefrontQuery WavefrontQuery::standard(const TorusGrid& g, const FLNormSpec& spec, int step) {
  WavefrontQuery q;
  q.positions = position_lattice(g, step);
  q.scan_step = step;
  q.directions = direction_bins(g.d, 32);
  q.aperture = g.d == 1 ? kPi / 2 : kPi / 32;
  q.window = WindowSpec{WindowShape::bspline, std::min(64, g.n / 2), 0};
  q.spec = spec;
  q.m_hi = log2_exact(g.n) - 2;
  q.m_lo = q.m_hi - 2;
  return q;
}

void WavefrontQuery::validate(const TorusGrid& g, bool classical) const {
  if (window.width < 4) throw Error("window width must be >= 4 cells");
  if (window.width > g.n) throw Error("window larger than torus");
  if (!(aperture > 0 && aperture <= kPi / 2)) throw Error("cone aperture must lie in (0, pi/2]");
  if (m_lo < 0 || m_hi > log2_exact(g.n / 2)) throw Error("octave range outside the lattice");
  int count = m_hi - m_lo + 1;
  if (classical && count < 3) throw Error("fewer than 3 octaves available");
  if (count < 2) throw Error("fewer than 2 octaves available");
  if (directions.empty()) throw Error("no scan directions");
  if (positions.empty()) throw Error("no scan positions");
  for (const auto& d : directions)
    if (static_cast<int>(d.size()) != g.d) throw Error("direction dimension mismatch");
  for (const auto& p : positions)
    if (static_cast<int>(p.size()) != g.d) throw Error("position dimension mismatch");
  if (!(spec.q >= 1)) throw Error("exponent must be >= 1");
}

nlohmann::json WavefrontQuery::to_json() const {
  return {{"positions", positions.size()},
          {"directions", directions.size()},
          {"window", {{"shape", window_shape_name(window.shape)}, {"width", window.width}}},
          {"aperture", aperture},
          {"q", format_exponent(spec.q)},
          {"weight", spec.weight.describe()},
          {"threshold", threshold},
          {"octaves", {m_lo, m_hi}},
          {"margin", margin},
          {"floor", floor},
          {"scan_step", scan_step}};
}

std::size_t WavefrontReport::singular_count() const {
  std::size_t c = 0;
  for (const auto& v : cells) c += v.singular;
  return c;
}

nlohmann::json WavefrontReport::to_json() const {
  nlohmann::json cells_j = nlohmann::json::array();
  for (std::size_t p = 0; p < positions(); ++p)
    for (std::size_t t = 0; t < directions(); ++t) {
      const Verdict& v = at(p, t);
      cells_j.push_back({{"x0", query.positions[p]},
                         {"theta", query.directions[t]},
                         {"verdict", v.singular ? "singular" : "regular"},
                         {"slope", num(v.slope)},
                         {"seminorm", num(v.seminorm)}});
    }
  return {{"mode", mode},
          {"d", grid.d},
          {"n", grid.n},
          {"query", query.to_json()},
          {"cells", cells_j}};
}

std::string WavefrontReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  for (int a = 0; a < grid.d; ++a) os << "x" << a << ",";
  for (int a = 0; a < grid.d; ++a) os << "theta" << a << ",";
  os << "verdict,slope,seminorm\n";
  for (std::size_t p = 0; p < positions(); ++p)
    for (std::size_t t = 0; t < directions(); ++t) {
      const Verdict& v = at(p, t);
      for (int x : query.positions[p]) os << x << ",";
      for (double th : query.directions[t]) os << th << ",";
      os << (v.singular ? "singular" : "regular") << "," << v.slope << "," << v.seminorm << "\n";
    }
  return os.str();
}

std::vector<Verdict> analyze_spectrum(const Spectrum& F, const WavefrontQuery& qu, bool classical) {
  const TorusGrid& g = F.grid;
  qu.validate(g, classical);
  Geometry geo(g, qu.directions, qu.aperture, qu.m_lo, qu.m_hi);
  std::vector<double> w =
      classical ? std::vector<double>(g.size(), 1.0) : qu.spec.weight.on_lattice(g);
  return judge_all(floored_magnitude(F, qu.floor), w, geo, qu, classical ? kInf : qu.spec.q, g.d,
                   classical);
}

DirectionSets regular_directions(const Signal& f, const FLNormSpec& spec, double aperture,
                                 int direction_count) {
  WavefrontQuery qu = WavefrontQuery::standard(f.grid, spec);
  qu.directions = direction_bins(f.grid.d, direction_count);
  qu.aperture = aperture;
  DirectionSets out;
  out.directions = qu.directions;
  out.verdicts = analyze_spectrum(forward_transform(f), qu, false);
  for (const auto& v : out.verdicts) out.singular.push_back(v.singular);
  return out;
}

WavefrontReport estimate_wavefront(const Signal& f, const WavefrontQuery& q) {
  return scan(f, q, false, 0, "fl");
}

WavefrontReport classical_wavefront(const Signal& f, const WavefrontQuery& q) {
  return scan(f, q, true, 0, "classical");
}

WavefrontReport modulation_wavefront(const Signal& f, const WavefrontQuery& q, int radius) {
  if (radius < 1) throw Error("modulation radius must be >= 1");
  return scan(f, q, false, radius, "modulation");
}

nlohmann::json SuperiorReport::to_json() const {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t c = 0; c < fixed_index.size(); ++c) {
    std::vector<int> per(per_s_pass[c].begin(), per_s_pass[c].end());
    cells.push_back({{"position", c / ndir}, {"direction", c % ndir}, {"fixed_index", fixed_index[c]},
                     {"per_s_pass", per}});
  }
  return {{"s_list", s_list}, {"cells", cells}};
}

SuperiorReport superior_scan(const Signal& f, const WavefrontQuery& qu,
                             const std::vector<double>& s_list, int min_width) {
  if (s_list.empty()) throw Error("empty s_list");
  for (std::size_t i = 1; i < s_list.size(); ++i)
    if (!(s_list[i] > s_list[i - 1])) throw Error("s_list must be ascending");
  const TorusGrid& g = f.grid;
  qu.validate(g, false);

  std::vector<int> widths{qu.window.width};
  while (widths.back() / 2 >= std::max(min_width, 4)) widths.push_back(widths.back() / 2);
  std::vector<double> apertures{qu.aperture};
  if (g.d >= 2) apertures.push_back(qu.aperture / 2);
  std::vector<Geometry> geos;
  for (double a : apertures) geos.emplace_back(g, qu.directions, a, qu.m_lo, qu.m_hi);
  std::vector<std::vector<double>> weights;
  for (double s : s_list) weights.push_back(Weight::power(s).on_lattice(g));

  SuperiorReport rep;
  rep.s_list = s_list;
  rep.npos = qu.positions.size();
  rep.ndir = qu.directions.size();
  std::size_t cells = rep.npos * rep.ndir, ns = s_list.size();
  rep.fixed_index.assign(cells, -1);
  rep.per_s_pass.assign(cells, std::vector<bool>(ns, false));
  rep.fixed_pass.assign(cells, std::vector<bool>(ns, false));

  parallel_for(rep.npos, [&](std::size_t p) {
    for (std::size_t wi = 0; wi < widths.size(); ++wi) {
      WindowSpec win = qu.window;
      win.width = widths[wi];
      auto mag = floored_magnitude(forward_transform(apply_window(f, qu.positions[p], win)),
                                   qu.floor, global_reference(f, win));
      for (std::size_t ai = 0; ai < geos.size(); ++ai)
        for (std::size_t si = 0; si < ns; ++si)
          for (std::size_t t = 0; t < rep.ndir; ++t) {
            Verdict v = judge(mag, weights[si], geos[ai], t, qu.spec.q, g.d, false, qu);
            std::size_t c = p * rep.ndir + t;
            if (!v.singular) {
              rep.per_s_pass[c][si] = true;
              if (wi == 0 && ai == 0) rep.fixed_pass[c][si] = true;
            }
          }
    }
    for (std::size_t t = 0; t < rep.ndir; ++t) {
      std::size_t c = p * rep.ndir + t;
      int idx = -1;
      while (idx + 1 < static_cast<int>(ns) && rep.fixed_pass[c][idx + 1]) ++idx;
      rep.fixed_index[c] = idx;
    }
  });
  return rep;
}

SplitResult split_regular(const Signal& f, std::span<const int> x0, const Cone& cone,
                          const FLNormSpec& spec, const WindowSpec& inner, const WindowSpec& outer,
                          double threshold) {
  const TorusGrid& g = f.grid;
  Signal chi1 = make_window(g, x0, outer);
  Signal chi = make_window(g, x0, inner);
  for (std::size_t i = 0; i < chi.values.size(); ++i)
    if (chi.values[i] != 0.0 && chi1.values[i] != 1.0) throw Error("window support violation");

  Signal base = pointwise_product(chi1, f);
  Spectrum F = forward_transform(base);
  const FrequencyLattice& L = lattice(g);
  Spectrum G = Spectrum::zeros(g);
  for (std::size_t i = 0; i < L.size(); ++i)
    if (cone.contains(L.k(i))) G.coeffs[i] = F.coeffs[i];

  SplitResult r;
  r.g = inverse_transform(G);
  r.h = Signal::zeros(g);
  for (std::size_t i = 0; i < base.values.size(); ++i) r.h.values[i] = base.values[i] - r.g.values[i];

  Spectrum H = forward_transform(r.h);
  double fmax = 0, hmax = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    fmax = std::max(fmax, std::abs(F.coeffs[i]));
    if (cone.contains(L.k(i))) hmax = std::max(hmax, std::abs(H.coeffs[i]));
  }
  r.cone_residual = fmax > 0 ? hmax / fmax : 0;
  r.g_norm = fl_norm(G, spec);

  WavefrontQuery qu = WavefrontQuery::standard(g, FLNormSpec{});
  qu.directions = {cone.axis};
  qu.aperture = std::min(cone.aperture / 2, kPi / 2);
  qu.threshold = threshold;
  qu.floor = 1e-13;
  auto v = analyze_spectrum(forward_transform(pointwise_product(chi, r.h)), qu, true);
  r.remainder = v[0];
  return r;
}

}  // namespace flw
