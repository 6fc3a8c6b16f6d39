#include "flw/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "flw/parallel.hpp"
#include "flw/rng.hpp"

namespace flw {

namespace {

void require_same_grid(const Signal& a, const Signal& b) {
  if (!(a.grid == b.grid)) throw Error("grid mismatch");
}

double inv(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }

// d/q'
double dqc(int d, double q) { return d * (1 - inv(q)); }

bool member(double s, double order, double q) {
  return s < order || (std::isinf(q) && s <= order);
}

std::size_t wrapped_difference(const FrequencyLattice& L, std::size_t k, std::size_t l) {
  const TorusGrid& g = L.grid;
  std::size_t out = 0;
  for (int i = 0; i < g.d; ++i) out = out * g.n + wrap(L.k(k)[i] - L.k(l)[i] + g.n / 2, g.n);
  return out;
}

}  // namespace

nlohmann::json NormRatioReport::to_json() const {
  nlohmann::json j = {{"name", name},           {"ratio", ratio},
                      {"certified", certified}, {"tolerance", tolerance},
                      {"params", params},       {"ok", ok()}};
  if (std::isfinite(bound)) {
    j["bound"] = bound;
    j["normalized"] = ratio / bound;
  }
  return j;
}

double moderation_constant(const TorusGrid& g, const Weight& w, const Weight& w1,
                           const Weight& w2) {
  const FrequencyLattice& L = lattice(g);
  std::vector<double> a = w.on_lattice(g), b = w1.on_lattice(g), c = w2.on_lattice(g);
  std::size_t m = L.size();
  std::vector<double> row(m, 0);
  parallel_for(m, [&](std::size_t k) {
    double best = 0;
    for (std::size_t l = 0; l < m; ++l)
      best = std::max(best, a[k] / (b[wrapped_difference(L, k, l)] * c[l]));
    row[k] = best;
  });
  return *std::max_element(row.begin(), row.end());
}

NormRatioReport product_norm_check(const Signal& f1, const Signal& f2, double q, double q1,
                                   double q2, const Weight& w, const Weight& w1,
                                   const Weight& w2) {
  require_same_grid(f1, f2);
  for (double e : {q, q1, q2})
    if (!(e >= 1)) throw Error("exponent must be >= 1");
  if (inv(q1) + inv(q2) < 1 + inv(q) - 1e-12) throw Error("requires 1/q1 + 1/q2 >= 1 + 1/q");
  const TorusGrid& g = f1.grid;
  NormRatioReport r;
  r.name = "product";
  double C = moderation_constant(g, w, w1, w2);
  double num = fl_norm(pointwise_product(f1, f2), {q, w});
  double den = fl_norm(f1, {q1, w1}) * fl_norm(f2, {q2, w2});
  r.ratio = den > 0 ? num / den : 0;
  r.bound = std::pow(2 * kPi, -0.5 * g.d) * C;
  r.certified = true;
  r.params = {{"q", format_exponent(q)},    {"q1", format_exponent(q1)},
              {"q2", format_exponent(q2)},  {"weight", w.describe()},
              {"weight1", w1.describe()},   {"weight2", w2.describe()},
              {"moderation_constant", C}};
  return r;
}

NormRatioReport convolve_norm_check(const Signal& f1, const Signal& f2, double q, double q1,
                                    double q2, const Weight& w, const Weight& w1,
                                    const Weight& w2) {
  require_same_grid(f1, f2);
  for (double e : {q, q1, q2})
    if (!(e >= 1)) throw Error("exponent must be >= 1");
  if (std::abs(inv(q1) + inv(q2) - inv(q)) > 1e-12) throw Error("requires 1/q1 + 1/q2 = 1/q");
  const TorusGrid& g = f1.grid;
  std::vector<double> a = w.on_lattice(g), b = w1.on_lattice(g), c = w2.on_lattice(g);
  double C = 0;
  for (std::size_t k = 0; k < a.size(); ++k) C = std::max(C, a[k] / (b[k] * c[k]));
  NormRatioReport r;
  r.name = "convolution";
  double num = fl_norm(cyclic_convolve(f1, f2), {q, w});
  double den = fl_norm(f1, {q1, w1}) * fl_norm(f2, {q2, w2});
  r.ratio = den > 0 ? num / den : 0;
  r.bound = std::pow(2 * kPi, 0.5 * g.d) * C;
  r.certified = true;
  r.params = {{"q", format_exponent(q)},   {"q1", format_exponent(q1)},
              {"q2", format_exponent(q2)}, {"weight", w.describe()},
              {"weight1", w1.describe()},  {"weight2", w2.describe()},
              {"pointwise_constant", C}};
  return r;
}

void check_product_exponents(int d, double q, double s1, double s2, double r, double s) {
  if (!(q >= 1)) throw Error("exponent must be >= 1");
  if (!(r >= 0)) throw Error("r >= 0");
  if (q <= 2 && r != 0) throw Error("r = 0 when q <= 2");
  if (q > 2 && !(r > d * (1 - 2 / q))) throw Error("r > d(1 - 2/q) when q > 2");
  if (!(s <= s1 && s <= s2)) throw Error("s <= s_j");
  double crit = std::min(d * inv(q), dqc(d, q));
  bool strict_sum = std::abs(s + crit) < 1e-12;
  if (strict_sum ? !(s1 + s2 > 0) : !(s1 + s2 >= 0))
    throw Error(strict_sum ? "s1 + s2 > 0 when s = -min(d/q, d/q')" : "s1 + s2 >= 0");
  double dq = dqc(d, q);
  bool strict_top = std::abs(s1 - dq) < 1e-12 || std::abs(s2 - dq) < 1e-12;
  double top = s1 + s2 - dq;
  if (strict_top ? !(s < top) : !(s <= top + 1e-12))
    throw Error(strict_top ? "s < s1 + s2 - d/q' when s_j = d/q'" : "s <= s1 + s2 - d/q'");
}

NormRatioReport product_critical_norm_check(const Signal& f1, const Signal& f2, double q,
                                            double s1, double s2, double r, double s) {
  require_same_grid(f1, f2);
  const TorusGrid& g = f1.grid;
  check_product_exponents(g.d, q, s1, s2, r, s);
  NormRatioReport rep;
  rep.name = "product-critical";
  double num = fl_norm(pointwise_product(f1, f2), {q, Weight::power(s)});
  double den = fl_norm(f1, {q, Weight::power(s1)}) * fl_norm(f2, {q, Weight::power(s2 + r)});
  rep.ratio = den > 0 ? num / den : 0;
  rep.params = {{"q", format_exponent(q)}, {"s1", s1}, {"s2", s2}, {"r", r}, {"s", s}};
  if (q == 1 && r == 0) {
    double C = moderation_constant(g, Weight::power(s), Weight::power(s1), Weight::power(s2));
    rep.bound = std::pow(2 * kPi, -0.5 * g.d) * C;
    rep.certified = true;
    rep.params["moderation_constant"] = C;
  }
  return rep;
}

double StabilityReport::change() const {
  double lo = std::min(at_n, at_2n);
  return lo > 0 ? std::abs(at_2n - at_n) / lo : kInf;
}

nlohmann::json StabilityReport::to_json() const {
  return {{"name", name}, {"n", n},           {"at_n", at_n}, {"at_2n", at_2n},
          {"change", change()}, {"limit", limit}, {"ok", ok()}};
}

StabilityReport critical_product_stability(double q, double s1, double s2, double r, double s,
                                           int n, int trials, std::uint64_t seed) {
  check_product_exponents(1, q, s1, s2, r, s);
  if (trials < 1) throw Error("trials must be positive");
  StabilityReport rep;
  rep.name = "product-critical";
  rep.n = n;
  double decay1 = s1 + inv(q) + 1, decay2 = s2 + r + inv(q) + 1;
  auto run = [&](int m) {
    TorusGrid g = TorusGrid::make(1, m);
    const FrequencyLattice& L = lattice(g);
    std::vector<double> best(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
      Spectrum a = Spectrum::zeros(g), b = Spectrum::zeros(g);
      for (std::size_t i = 0; i < L.size(); ++i) {
        std::uint64_t key = static_cast<std::uint64_t>(L.k(i)[0] + 65536);
        a.coeffs[i] = cplx(hashed_normal(seed, 4 * t, key), hashed_normal(seed, 4 * t + 1, key)) *
                      std::pow(L.bracket[i], -decay1);
        b.coeffs[i] =
            cplx(hashed_normal(seed, 4 * t + 2, key), hashed_normal(seed, 4 * t + 3, key)) *
            std::pow(L.bracket[i], -decay2);
      }
      best[t] = product_critical_norm_check(inverse_transform(a), inverse_transform(b), q, s1, s2,
                                            r, s)
                    .ratio;
    });
    return *std::max_element(best.begin(), best.end());
  };
  rep.at_n = run(n);
  rep.at_2n = run(2 * n);
  return rep;
}

WavefrontReport fl_scan(const Signal& f, double q, double s) {
  return estimate_wavefront(f, WavefrontQuery::standard(f.grid, {q, Weight::power(s)}));
}

InclusionReport wf_convolution_check(const Signal& f1, const Signal& f2, double q, double s) {
  require_same_grid(f1, f2);
  const TorusGrid& g = f1.grid;
  WavefrontReport lhs = fl_scan(cyclic_convolve(f1, f2), q, s);
  WavefrontReport w2 = fl_scan(f2, q, s);
  double peak = 0;
  for (const auto& v : f1.values) peak = std::max(peak, std::abs(v));
  std::vector<std::vector<int>> support;
  std::vector<int> idx(g.d);
  for (std::size_t j = 0; j < f1.values.size(); ++j)
    if (std::abs(f1.values[j]) > 1e-8 * peak) {
      unravel(g, j, idx);
      support.push_back(idx);
    }
  std::vector<SingularPoint> rhs;
  for (const auto& p : singular_points(w2))
    for (const auto& x : support) {
      SingularPoint t{p.x, p.theta};
      for (int a = 0; a < g.d; ++a) t.x[a] = wrap(p.x[a] + x[a], g.n);
      rhs.push_back(std::move(t));
    }
  InclusionReport r = check_inclusion("wf-conv", g, singular_points(lhs), rhs,
                                      standard_tolerance(lhs.query));
  r.notes = {{"q", format_exponent(q)}, {"s", s}, {"support_points", support.size()},
             {"rhs_cells", w2.singular_count()}};
  return r;
}

ProductMode parse_product_mode(const std::string& s) {
  if (s == "thm4_1_case1") return ProductMode::thm4_1_case1;
  if (s == "thm4_1_case2") return ProductMode::thm4_1_case2;
  if (s == "thm4_3") return ProductMode::thm4_3;
  throw Error("unknown product mode: " + s);
}

const char* product_mode_name(ProductMode m) {
  switch (m) {
    case ProductMode::thm4_1_case1: return "thm4_1_case1";
    case ProductMode::thm4_1_case2: return "thm4_1_case2";
    default: return "thm4_3";
  }
}

nlohmann::json product_hypotheses(int d, ProductMode mode, ProductWFParams& p) {
  if (!(p.q >= 1)) throw Error("exponent must be >= 1");
  double q = p.q, dq = dqc(d, q);
  nlohmann::json hyp = nlohmann::json::array();
  auto need = [&](const std::string& name, double margin, bool strict) {
    hyp.push_back({{"name", name}, {"margin", margin}});
    if (strict ? !(margin > 0) : !(margin >= -1e-12)) throw Error("hypothesis violated: " + name);
  };
  nlohmann::json out;
  double f2_scale = p.s2;
  if (mode == ProductMode::thm4_1_case1) {
    if (q == 1)
      need("s1 - |s2| >= 0", p.s1 - std::abs(p.s2), false);
    else
      need("s1 - |s2| > d/q'", p.s1 - std::abs(p.s2) - dq, true);
    p.s = p.s2;
    out["lhs_scale"] = p.s2;
    out["rhs_scales"] = {std::abs(p.s2)};
  } else if (mode == ProductMode::thm4_1_case2) {
    need("s >= 0", p.s, false);
    if (q == 1)
      need("s1 + s2 >= s", p.s1 + p.s2 - p.s, false);
    else
      need("s1 + s2 - d/q' > s", p.s1 + p.s2 - dq - p.s, true);
    need("s2 - s >= d/q'", p.s2 - p.s - dq, false);
    out["lhs_scale"] = p.s;
    out["rhs_scales"] = {std::abs(p.s2)};
  } else {
    if (q <= 2) {
      if (p.r != 0) throw Error("hypothesis violated: r = 0 when q <= 2");
    } else {
      need("r > d(1 - 2/q)", p.r - d * (1 - 2 / q), true);
    }
    need("s1 + s2 > 0", p.s1 + p.s2, true);
    p.s = p.s1 + p.s2 - std::min(d * inv(q), dq);
    double extra = std::max(0.0, d * (1 - 2 * inv(q)));
    bool strict = !std::isinf(q);
    need("N1 >= s1 + |s2| + max(0, d(1 - 2/q))", p.N1 - p.s1 - std::abs(p.s2) - extra, strict);
    need("N2 >= s2 + |s1| + max(0, d(1 - 2/q))", p.N2 - p.s2 - std::abs(p.s1) - extra, strict);
    f2_scale = p.s2 + p.r;
    out["lhs_scale"] = p.s;
    out["rhs_scales"] = {p.N1, p.N2};
  }
  nlohmann::json mem = nlohmann::json::array();
  auto membership = [&](const char* name, double order, double scale) {
    if (std::isnan(order)) return;
    mem.push_back({{"name", name}, {"order", order}, {"scale", scale}, {"margin", order - scale}});
    if (!member(scale, order, q)) throw Error(std::string("hypothesis violated: ") + name);
  };
  membership("f1 in FL^q_{s1,loc}", p.order1, p.s1);
  membership("f2 in FL^q_{s2(+r),loc}", p.order2, f2_scale);
  out["mode"] = product_mode_name(mode);
  out["q"] = format_exponent(q);
  out["s1"] = p.s1;
  out["s2"] = p.s2;
  out["hypotheses"] = hyp;
  out["membership"] = mem;
  return out;
}

InclusionReport wf_product_check(const Signal& f1, const Signal& f2, ProductMode mode,
                                 ProductWFParams p) {
  require_same_grid(f1, f2);
  const TorusGrid& g = f1.grid;
  nlohmann::json notes = product_hypotheses(g.d, mode, p);
  WavefrontReport lhs = fl_scan(pointwise_product(f1, f2), p.q, p.s);
  std::vector<SingularPoint> rhs;
  if (mode == ProductMode::thm4_3) {
    rhs = singular_points(fl_scan(f1, p.q, p.N1));
    auto more = singular_points(fl_scan(f2, p.q, p.N2));
    rhs.insert(rhs.end(), more.begin(), more.end());
  } else {
    rhs = singular_points(fl_scan(f1, p.q, std::abs(p.s2)));
  }
  InclusionReport r = check_inclusion(std::string("wf-product/") + product_mode_name(mode), g,
                                      singular_points(lhs), rhs, standard_tolerance(lhs.query));
  r.notes = notes;
  return r;
}

NormRatioReport algebra_check(const std::vector<Signal>& fs, const Signal& g, double q, double q0,
                              double s) {
  if (fs.empty()) throw Error("algebra check needs at least one factor");
  for (const auto& f : fs) require_same_grid(f, g);
  if (!(q >= 1 && q0 >= 1)) throw Error("exponent must be >= 1");
  if (q0 > q) throw Error("q0 <= q");
  int d = g.grid.d;
  if (q < 2 && !(s >= dqc(d, q) - 1e-12)) throw Error("s >= d/q' when 1 <= q < 2");
  if (q >= 2 && !(s > d * (3 * (1 - inv(q)) - 1))) throw Error("s > d(3/q' - 1) when q >= 2");
  Signal prod = g;
  double den = fl_norm(g, {q0, Weight::power(s)});
  for (const auto& f : fs) {
    prod = pointwise_product(prod, f);
    den *= fl_norm(f, {q, Weight::power(s)});
  }
  NormRatioReport r;
  r.name = "algebra";
  r.ratio = den > 0 ? fl_norm(prod, {q, Weight::power(s)}) / den : 0;
  std::size_t N = fs.size();
  r.params = {{"q", format_exponent(q)}, {"q0", format_exponent(q0)}, {"s", s}, {"N", N},
              {"per_factor", std::pow(r.ratio, 1.0 / (N + 1))}};
  if (q == 1 && q0 == 1 && s == 0) {
    r.bound = std::pow(2 * kPi, -0.5 * d * static_cast<double>(N));
    r.certified = true;
  }
  return r;
}

}  // namespace flw
