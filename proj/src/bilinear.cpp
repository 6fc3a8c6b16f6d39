#include "flw/bilinear.hpp"

#include <algorithm>
#include <cmath>

#include "flw/cone.hpp"
#include "flw/parallel.hpp"
#include "flw/rng.hpp"

namespace flw {

namespace {

double bracket(std::span<const double> x) {
  double s = 1;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double bracket1(double x) { return std::sqrt(1 + x * x); }

void check_same(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw Error("lattice mismatch");
}

// Lattice index of k - l (wrapped), both given as centered-order indices.
std::size_t difference_index(const TorusGrid& g, std::size_t k, std::size_t l) {
  const FrequencyLattice& L = lattice(g);
  std::size_t out = 0;
  auto a = L.k(k), b = L.k(l);
  for (int i = 0; i < g.d; ++i) out = out * g.n + wrap(a[i] - b[i] + g.n / 2, g.n);
  return out;
}

std::size_t negated_index(const TorusGrid& g, std::size_t k) {
  const FrequencyLattice& L = lattice(g);
  std::size_t out = 0;
  for (int c : L.k(k)) out = out * g.n + wrap(-c + g.n / 2, g.n);
  return out;
}

std::uint64_t lattice_key(std::span<const int> k) {
  std::uint64_t key = 0;
  for (int c : k) key = (key << 16) | static_cast<std::uint16_t>(c + 32768);
  return key;
}

cplx gaussian(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return {hashed_normal(seed, a, 2 * b), hashed_normal(seed, a, 2 * b + 1)};
}

}  // namespace

double PowerKernelSpec::eval(std::span<const double> xi, std::span<const double> eta) const {
  double diff = 1;
  for (std::size_t i = 0; i < xi.size(); ++i) diff += (xi[i] - eta[i]) * (xi[i] - eta[i]);
  return std::pow(bracket(xi), t0) * std::pow(std::sqrt(diff), t1) * std::pow(bracket(eta), t2);
}

void PowerKernelSpec::check() const {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !std::isfinite(t2))
    throw Error("kernel exponents must be finite");
}

nlohmann::json PowerKernelSpec::to_json() const { return {{"t0", t0}, {"t1", t1}, {"t2", t2}}; }

KernelGrid power_kernel(const TorusGrid& g, const PowerKernelSpec& spec) {
  spec.check();
  KernelGrid F = KernelGrid::zeros(g);
  const FrequencyLattice& L = lattice(g);
  std::vector<double> a(g.d), b(g.d);
  for (std::size_t k = 0; k < F.points(); ++k)
    for (std::size_t l = 0; l < F.points(); ++l) {
      for (int i = 0; i < g.d; ++i) {
        a[i] = L.k(k)[i];
        b[i] = L.k(l)[i];
      }
      F.at(k, l) = spec.eval(a, b);
    }
  return F;
}

KernelGrid transpose(const KernelGrid& F) {
  KernelGrid G = KernelGrid::zeros(F.grid);
  for (std::size_t k = 0; k < F.points(); ++k)
    for (std::size_t l = 0; l < F.points(); ++l) G.at(l, k) = F.at(k, l);
  return G;
}

Spectrum apply_tf(const KernelGrid& F, const Spectrum& f, const Spectrum& g) {
  check_same(F.grid, f.grid);
  check_same(F.grid, g.grid);
  Spectrum out = Spectrum::zeros(F.grid);
  std::size_t m = F.points();
  for (std::size_t k = 0; k < m; ++k) {
    cplx acc = 0;
    for (std::size_t l = 0; l < m; ++l)
      acc += F.at(k, l) * f.coeffs[l] * g.coeffs[difference_index(F.grid, k, l)];
    out.coeffs[k] = acc;
  }
  return out;
}

double DualPair::defect() const { return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0); }

DualPair tf_dual_pair(const KernelGrid& F, const Spectrum& f, const Spectrum& g,
                      const Spectrum& h) {
  check_same(F.grid, h.grid);
  Spectrum gc = Spectrum::zeros(g.grid);
  for (std::size_t k = 0; k < gc.coeffs.size(); ++k)
    gc.coeffs[k] = g.coeffs[negated_index(g.grid, k)];
  Spectrum left = apply_tf(F, f, g);
  Spectrum right = apply_tf(transpose(F), h, gc);
  DualPair p{0, 0};
  for (std::size_t k = 0; k < left.coeffs.size(); ++k) {
    p.lhs += left.coeffs[k] * h.coeffs[k];
    p.rhs += right.coeffs[k] * f.coeffs[k];
  }
  return p;
}

double lattice_norm(const Spectrum& f, double q, double r) {
  const FrequencyLattice& L = lattice(f.grid);
  std::vector<double> a(f.coeffs.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = std::abs(f.coeffs[i]) * (r == 0 ? 1.0 : std::pow(L.bracket[i], r));
  return lq_sum(a, q);
}

Spectrum RandomLatticeSource::array(const TorusGrid& g, std::uint64_t trial,
                                    std::uint64_t slot) const {
  const FrequencyLattice& L = lattice(g);
  Spectrum F = Spectrum::zeros(g);
  std::uint64_t stream = trial * 8 + slot;
  double u = hashed_uniform(seed ^ 0xA5A5A5A5ull, stream, 0);
  if (u < 0.1) {
    std::vector<int> k(g.d);
    for (int i = 0; i < g.d; ++i)
      k[i] = static_cast<int>(hashed_uniform(seed ^ 0x5A5Aull, stream, i + 1) * 8) - 4;
    F.coeffs[L.index(k)] = gaussian(seed, stream, 7);
    return F;
  }
  bool heavy = u < 0.2;
  for (std::size_t i = 0; i < L.size(); ++i) {
    std::uint64_t key = lattice_key(L.k(i));
    cplx z = gaussian(seed, stream, key) / L.bracket[i];
    if (heavy) {
      double t = hashed_uniform(seed ^ 0x77ull, stream, key);
      z /= t * t;
    }
    F.coeffs[i] = z;
  }
  return F;
}

KernelGrid RandomLatticeSource::kernel(const TorusGrid& g, std::uint64_t trial) const {
  const FrequencyLattice& L = lattice(g);
  KernelGrid F = KernelGrid::zeros(g);
  std::uint64_t stream = trial * 8 + 7;
  for (std::size_t k = 0; k < F.points(); ++k)
    for (std::size_t l = 0; l < F.points(); ++l)
      F.at(k, l) = gaussian(seed, stream, (lattice_key(L.k(k)) << 32) ^ lattice_key(L.k(l))) /
                   (L.bracket[k] * L.bracket[l]);
  return F;
}

nlohmann::json TFBoundReport::to_json() const {
  return {{"case", kase},
          {"q", format_exponent(q)},
          {"r", r},
          {"trials", trials},
          {"seed", seed},
          {"d", grid.d},
          {"n", grid.n},
          {"max_ratio", max_ratio},
          {"worst_seed", worst_trial},
          {"proof_constant", proof_constant},
          {"tolerance", tolerance},
          {"ok", ok()}};
}

TFBoundReport verify_tf_bound(int kase, double q, double r, int trials, std::uint64_t seed,
                              const TorusGrid& g) {
  if (kase < 1 || kase > 3) throw Error("case must be 1, 2 or 3");
  if (!(q >= 1)) throw Error("exponent must be >= 1");
  if (trials < 1) throw Error("trials must be positive");
  if (kase == 2) {
    if (!(q > 2)) throw Error("case 2 requires q > 2");
    if (!(r > g.d * (1 - 2 / q))) throw Error("case 2 requires r > d(1 - 2/q)");
  }
  if (kase == 3 && q > 2) throw Error("case 3 requires q <= 2");
  TFBoundReport rep;
  rep.kase = kase;
  rep.q = q;
  rep.r = kase == 2 ? r : 0;
  rep.trials = trials;
  rep.seed = seed;
  rep.grid = g;
  if (kase == 2) {
    double q0 = std::isinf(q) ? 1 : q / (q - 2);
    const FrequencyLattice& L = lattice(g);
    std::vector<double> w(L.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(L.bracket[i], -r);
    rep.proof_constant = lq_sum(w, q0);
  }
  double qc = conjugate(q);
  RandomLatticeSource src{seed};
  std::vector<double> ratio(trials);
  parallel_for(trials, [&](std::size_t t) {
    KernelGrid F = src.kernel(g, t);
    Spectrum f = src.array(g, t, 0), h = src.array(g, t, 1);
    double knorm = kase == 1 ? mixed_norm(F, kInf, qc, 2)
                   : kase == 2 ? mixed_norm(F, q, kInf, 1)
                               : mixed_norm(F, qc, kInf, 1);
    double den = knorm * lattice_norm(f, q) * lattice_norm(h, q, rep.r);
    double num = lattice_norm(apply_tf(F, f, h), q);
    ratio[t] = den > 0 ? num / den : 0;
  });
  for (int t = 0; t < trials; ++t)
    if (ratio[t] > rep.max_ratio) {
      rep.max_ratio = ratio[t];
      rep.worst_trial = t;
    }
  return rep;
}

SliceRegion SliceRegion::omega(int index, double delta, double R) {
  if (index < 1 || index > 5) throw Error("region index must lie in 1..5");
  check_omega_params(delta, R);
  SliceRegion s;
  s.kind = Kind::omega;
  s.index = index;
  s.delta = delta;
  s.R = R;
  return s;
}

SliceRegion SliceRegion::tail(double c, double R) {
  if (!(c > 0)) throw Error("tail region requires c > 0");
  if (!(R > 1)) throw Error("tail region requires R > 1");
  SliceRegion s;
  s.kind = Kind::tail;
  s.c = c;
  s.R = R;
  return s;
}

std::string SliceRegion::name() const {
  return kind == Kind::omega ? "omega" + std::to_string(index) : "tail";
}

namespace {

bool is_critical(double t, double dp) { return std::abs(t + dp) < 1e-12; }

double log_factor(double x, double p) {
  double v = 1 + std::log(bracket1(x));
  return std::isinf(p) ? 1.0 : std::pow(v, 1 / p);
}

}  // namespace

std::pair<double, std::string> slice_bound(const PowerKernelSpec& s, const SliceRegion& region,
                                           double p, double x) {
  const double d = 1;
  double dp = std::isinf(p) ? 0 : d / p;
  double bx = bracket1(x);
  if (region.kind == SliceRegion::Kind::tail) {
    if (s.t2 >= -dp) return {std::pow(bx, s.t0), "t2 >= -d/p"};
    return {std::pow(bx, s.t0) * (1 + std::pow(bx, s.t1)), "t2 < -d/p"};
  }
  switch (region.index) {
    case 1:
      if (is_critical(s.t2, dp)) return {std::pow(bx, s.t0 + s.t1) * log_factor(x, p), "t2 = -d/p"};
      return {std::pow(bx, s.t0 + s.t1) * (1 + std::pow(bx, s.t2 + dp)),
              s.t2 < -dp ? "t2 < -d/p" : "t2 > -d/p"};
    case 2:
      if (is_critical(s.t1, dp)) return {std::pow(bx, s.t0 + s.t2) * log_factor(x, p), "t1 = -d/p"};
      return {std::pow(bx, s.t0 + s.t2) * (1 + std::pow(bx, s.t1 + dp)),
              s.t1 < -dp ? "t1 < -d/p" : "t1 > -d/p"};
    case 3:
      return {std::pow(bx, s.t1 + s.t2), "bounded xi"};
    default:
      if (is_critical(s.t0, dp)) return {std::pow(bx, s.t1 + s.t2) * log_factor(x, p), "t0 = -d/p"};
      if (s.t0 > -dp) return {std::pow(bx, s.t0 + s.t1 + s.t2 + dp), "t0 > -d/p"};
      return {std::pow(bx, s.t1 + s.t2), "t0 < -d/p"};
  }
}

bool SliceReport::ok() const {
  if (!(std::isfinite(C) && C > 0 && residual <= 1e-12 * C)) return false;
  // the ratio slice/bound must level off: flat, or its growth decelerating
  return tail_slope <= slope_floor || tail_slope <= deceleration * inner_slope;
}

nlohmann::json SliceReport::to_json() const {
  return {{"kernel", spec.to_json()},
          {"region", region.name()},
          {"delta", region.delta},
          {"R", region.R},
          {"c", region.c},
          {"p", format_exponent(p)},
          {"range", range},
          {"branch", branch},
          {"C", C},
          {"residual", residual},
          {"inner_slope", inner_slope},
          {"tail_slope", tail_slope},
          {"ok", ok()}};
}

SliceReport kernel_slice_norms(const PowerKernelSpec& spec, const SliceRegion& region, double p,
                               int range) {
  if (!(p >= 1)) throw Error("slice exponent p must be >= 1");
  if (range < 8) throw Error("range must be at least 8");
  spec.check();
  double dp = std::isinf(p) ? 0 : 1 / p;
  bool tail = region.kind == SliceRegion::Kind::tail;
  if (tail) {
    double t12 = spec.t1 + spec.t2;
    if (std::isinf(p) ? t12 > 0 : t12 >= -dp)
      throw Error("tail region requires t1 + t2 < -d/p (<= 0 when p = inf)");
  }
  SliceReport rep;
  rep.spec = spec;
  rep.region = region;
  rep.p = p;
  rep.range = range;
  // fixed ξ for Ω_1, Ω_2 and the tail region; fixed η otherwise
  bool fixed_xi = tail || region.index <= 2;
  const int span = tail ? 16384 : static_cast<int>(std::ceil(2 * range / region.delta + region.R)) + 4;
  std::size_t m = 2 * range + 1;
  rep.abscissa.resize(m);
  rep.slice.assign(m, 0);
  rep.bound.assign(m, 0);
  std::vector<std::string> branch(m);
  parallel_for(m, [&](std::size_t i) {
    int x = static_cast<int>(i) - range;
    rep.abscissa[i] = x;
    auto [b, name] = slice_bound(spec, region, p, x);
    rep.bound[i] = b;
    branch[i] = name;
    std::vector<double> vals;
    double xi[1], eta[1];
    for (int y = -span; y <= span; ++y) {
      xi[0] = fixed_xi ? x : y;
      eta[0] = fixed_xi ? y : x;
      bool in;
      if (tail) {
        in = std::abs(eta[0] - xi[0]) >= region.c * std::abs(xi[0]) && bracket1(xi[0]) >= region.R &&
             bracket1(eta[0]) >= region.R;
      } else {
        in = omega_tests(xi, eta, region.delta, region.R)[region.index - 1];
      }
      if (in) vals.push_back(spec.eval(xi, eta));
    }
    double s = lq_sum(vals, p);
    if (tail && !std::isinf(p) && !vals.empty()) {
      // both half-lines beyond the truncation, <η - ξ> ~ <η> ~ |η|
      double e = (spec.t1 + spec.t2) * p + 1;
      double rest = 2 * std::pow(bracket1(x), spec.t0 * p) * std::pow(span + 0.5, e) / (-e);
      s = std::pow(std::pow(s, p) + rest, 1 / p);
    }
    rep.slice[i] = s;
  });
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < m; ++i) {
    if (rep.slice[i] > 0 && std::find(seen.begin(), seen.end(), branch[i]) == seen.end())
      seen.push_back(branch[i]);
    rep.C = std::max(rep.C, rep.slice[i] / rep.bound[i]);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) rep.branch += (i ? "; " : "") + seen[i];
  rep.residual = -kInf;
  for (std::size_t i = 0; i < m; ++i)
    rep.residual = std::max(rep.residual, rep.slice[i] - rep.C * rep.bound[i]);
  auto octave_slope = [&](int lo, int hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < m; ++i) {
      int ax = std::abs(rep.abscissa[i]);
      if (ax < lo || ax > hi || rep.slice[i] <= 0) continue;
      double lx = std::log(bracket1(ax)), ly = std::log(rep.slice[i] / rep.bound[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++cnt;
    }
    return cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
  };
  rep.inner_slope = octave_slope(range / 4, range / 2);
  rep.tail_slope = octave_slope(range / 2, range);
  return rep;
}

}  // namespace flw
