#include "flw/semilinear.hpp"

#include <algorithm>
#include <cmath>

#include "flw/calculus.hpp"

namespace flw {

namespace {

double inv(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }
double dqc(int d, double q) { return d * (1 - inv(q)); }

double l2(const Signal& f) {
  double acc = 0;
  for (const auto& v : f.values) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace

void PolynomialNonlinearity::check() const {
  if (N < 1) throw Error("nonlinearity needs at least one argument");
  if (terms.empty()) throw Error("nonlinearity has no terms");
  for (const auto& t : terms) {
    if (static_cast<int>(t.alpha.size()) != N) throw Error("multi-index length differs from N");
    int total = 0;
    for (int a : t.alpha) {
      if (a < 0) throw Error("negative multi-index entry");
      total += a;
    }
    if (total == 0) throw Error("terms need |alpha| >= 1");
  }
}

int PolynomialNonlinearity::degree() const {
  int m = 0;
  for (const auto& t : terms) {
    int total = 0;
    for (int a : t.alpha) total += a;
    m = std::max(m, total);
  }
  return m;
}

nlohmann::json PolynomialNonlinearity::to_json() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : terms) {
    nlohmann::json j = {{"alpha", t.alpha}};
    if (t.a)
      j["coefficient"] = "signal";
    else
      j["coefficient"] = {t.c.real(), t.c.imag()};
    ts.push_back(j);
  }
  return {{"N", N}, {"degree", degree()}, {"terms", ts}};
}

PolynomialNonlinearity PolynomialNonlinearity::monomial(int N, int i, int p, cplx c) {
  if (i < 0 || i >= N) throw Error("argument index out of range");
  PolynomialNonlinearity G;
  G.N = N;
  Term t;
  t.alpha.assign(N, 0);
  t.alpha[i] = p;
  t.c = c;
  G.terms.push_back(std::move(t));
  G.check();
  return G;
}

Signal eval_nonlinearity(const PolynomialNonlinearity& G, const std::vector<Signal>& args) {
  G.check();
  if (static_cast<int>(args.size()) != G.N) throw Error("arity mismatch");
  const TorusGrid& g = args[0].grid;
  for (const auto& f : args)
    if (!(f.grid == g)) throw Error("grid mismatch");
  for (const auto& t : G.terms)
    if (t.a && !(t.a->grid == g)) throw Error("grid mismatch");
  Signal out = Signal::zeros(g);
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    cplx acc = 0;
    for (const auto& t : G.terms) {
      cplx v = t.a ? t.a->values[j] : t.c;
      for (int i = 0; i < G.N; ++i)
        for (int e = 0; e < t.alpha[i]; ++e) v *= args[i].values[j];
      acc += v;
    }
    out.values[j] = acc;
  }
  return out;
}

std::vector<std::vector<int>> graded_multi_indices(int d, int k) {
  if (d < 1) throw Error("dimension must be >= 1");
  if (k < 0) throw Error("jet order must be >= 0");
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= k; ++deg) {
    std::vector<int> beta(d, 0);
    // Lexicographically descending compositions of deg into d parts.
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == d - 1) {
        beta[pos] = left;
        out.push_back(beta);
        return;
      }
      for (int v = left; v >= 0; --v) {
        beta[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, deg);
  }
  return out;
}

Jet jet(const Signal& f, int k) {
  f.check();
  const TorusGrid& g = f.grid;
  const FrequencyLattice& L = lattice(g);
  Jet J;
  J.k = k;
  J.betas = graded_multi_indices(g.d, k);
  Spectrum F = forward_transform(f);
  for (const auto& beta : J.betas) {
    Spectrum G = F;
    for (std::size_t i = 0; i < L.size(); ++i) {
      cplx m = 1;
      for (int a = 0; a < g.d; ++a)
        for (int e = 0; e < beta[a]; ++e) m *= cplx(0, L.k(i)[a]);
      G.coeffs[i] *= m;
    }
    J.components.push_back(inverse_transform(G));
  }
  return J;
}

nlohmann::json nonlinearity_hypotheses(int d, double q, double s, double sigma, double r) {
  if (!(q >= 1)) throw Error("exponent must be >= 1");
  double dq = dqc(d, q);
  bool strict = std::isinf(q);
  nlohmann::json hyp = nlohmann::json::array();
  auto need = [&](const std::string& name, double margin, bool st) {
    hyp.push_back({{"name", name}, {"margin", margin}});
    if (st ? !(margin > 0) : !(margin >= -1e-12)) throw Error("hypothesis violated: " + name);
  };
  need(strict ? "s > d/q'" : "s >= d/q'", s - dq, strict);
  need("sigma >= s", sigma - s, false);
  need("sigma <= 2s - d/q'", 2 * s - dq - sigma, false);
  need(strict ? "r > d/q'" : "r >= d/q'", r - dq, strict);
  return hyp;
}

InclusionReport wf_nonlinearity_check(const PolynomialNonlinearity& G,
                                      const std::vector<Signal>& fs, double q, double s,
                                      double sigma, double r) {
  G.check();
  if (fs.empty()) throw Error("arity mismatch");
  const TorusGrid& g = fs[0].grid;
  nlohmann::json hyp = nonlinearity_hypotheses(g.d, q, s, sigma, r);
  int m = G.degree();
  WavefrontReport lhs = fl_scan(eval_nonlinearity(G, fs), q, sigma);
  double raised = sigma + (m - 1) * r;
  std::vector<SingularPoint> rhs;
  std::size_t rhs_cells = 0;
  for (const auto& f : fs) {
    auto pts = singular_points(fl_scan(f, q, raised));
    rhs_cells += pts.size();
    rhs.insert(rhs.end(), pts.begin(), pts.end());
  }
  InclusionReport rep =
      check_inclusion("wf-nonlinearity", g, singular_points(lhs), rhs, standard_tolerance(lhs.query));
  rep.notes = {{"q", format_exponent(q)}, {"s", s},         {"sigma", sigma},
               {"r", r},                  {"m", m},         {"raised_scale", raised},
               {"hypotheses", hyp},       {"rhs_cells", rhs_cells}};
  return rep;
}

nlohmann::json BootstrapLedger::to_json() const {
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& st : trace)
    tr.push_back({{"iteration", st.iteration}, {"sigma", st.sigma}, {"gain", st.gain}});
  nlohmann::json j = {{"q", format_exponent(q)}, {"d", d}, {"s", s}, {"k", k},
                      {"m", m}, {"r", r}, {"n", n}, {"variant", variant},
                      {"rejected", rejected}};
  if (rejected) {
    j["rejection"] = rejection;
    return j;
  }
  j["cap"] = cap;
  j["gain"] = gain;
  j["trace"] = tr;
  j["final_index"] = final_index;
  j["round_bound"] = round_bound;
  return j;
}

BootstrapLedger bootstrap_indices(double q, int d, double s, int k, int m, double r, int n,
                                  int variant) {
  BootstrapLedger L;
  L.q = q;
  L.d = d;
  L.s = s;
  L.k = k;
  L.m = m;
  L.r = r;
  L.n = n;
  L.variant = variant;
  auto reject = [&](const std::string& why) {
    L.rejected = true;
    L.rejection = why;
    return L;
  };
  if (variant != 1 && variant != 2) return reject("variant in {1, 2}");
  if (!(q >= 1)) return reject("q in [1, inf]");
  if (d < 1) return reject("d >= 1");
  if (k < 0) return reject("k >= 0");
  if (m < 1) return reject("m >= 1");
  if (n < 1) return reject("n >= 1");
  if (variant == 2 && q != 1) return reject("q = 1 for variant 2");
  double dq = dqc(d, q);
  if (!(s >= dq)) return reject("s >= d/q'");
  if (!(r >= dq)) return reject("r >= d/q'");
  if (variant == 1 && !(s + n >= dq + k + (m - 1) * r - 1e-12))
    return reject("s + n >= d/q' + k + (m - 1)r");
  L.cap = 2 * s - dq;
  L.gain = variant == 1 ? n - k - (m - 1) * r : n - k;
  if (L.cap > s && !(L.gain > 0))
    return reject(variant == 1 ? "n > k + (m - 1)r" : "n > k");
  double sigma = s;
  int it = 0;
  L.trace.push_back({it, sigma, L.gain});
  while (sigma < L.cap) {
    sigma = std::min(sigma + L.gain, L.cap);
    L.trace.push_back({++it, sigma, L.gain});
  }
  L.final_index = sigma + n;
  L.round_bound = L.cap > s ? static_cast<int>(std::ceil((s - dq) / L.gain)) + 1 : 1;
  return L;
}

nlohmann::json DemoResult::to_json() const {
  return {{"iterations", iterations}, {"residual", residual}, {"updates", updates}};
}

DemoResult demo_solve(const Symbol& P, const PolynomialNonlinearity& G, int k,
                      const Signal& source, double tol, int max_iter) {
  source.check();
  G.check();
  if (!P.x_independent()) throw Error("demo solver needs an x-independent symbol");
  const TorusGrid& g = source.grid;
  const FrequencyLattice& L = lattice(g);
  if (G.N != static_cast<int>(graded_multi_indices(g.d, k).size()))
    throw Error("arity mismatch: G takes " + std::to_string(G.N) + " arguments, the jet has " +
                std::to_string(graded_multi_indices(g.d, k).size()));
  std::vector<cplx> sym(L.size());
  double lo = kInf, hi = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    sym[i] = P.eval(g, 0, L.k(i));
    lo = std::min(lo, std::abs(sym[i]));
    hi = std::max(hi, std::abs(sym[i]));
  }
  if (!(lo > 1e-12 * hi)) throw Error("symbol is not invertible on the lattice");
  auto solve = [&](const Signal& rhs) {
    Spectrum F = forward_transform(rhs);
    for (std::size_t i = 0; i < L.size(); ++i) F.coeffs[i] /= sym[i];
    return inverse_transform(F);
  };
  double src_norm = l2(source);
  if (src_norm == 0) throw Error("zero source");
  auto residual = [&](const Signal& f) {
    Signal Pf = quantize_apply(P, f);
    Signal Gf = eval_nonlinearity(G, jet(f, k).components);
    double acc = 0;
    for (std::size_t j = 0; j < Pf.values.size(); ++j)
      acc += std::norm(Pf.values[j] - Gf.values[j] - source.values[j]);
    return std::sqrt(acc) / src_norm;
  };
  DemoResult res;
  res.f = solve(source);
  for (int it = 1; it <= max_iter; ++it) {
    Signal rhs = eval_nonlinearity(G, jet(res.f, k).components);
    for (std::size_t j = 0; j < rhs.values.size(); ++j) rhs.values[j] += source.values[j];
    Signal next = solve(rhs);
    double diff = 0;
    for (std::size_t j = 0; j < next.values.size(); ++j)
      diff += std::norm(next.values[j] - res.f.values[j]);
    double nn = l2(next);
    double upd = nn > 0 ? std::sqrt(diff) / nn : std::sqrt(diff);
    if (!std::isfinite(upd)) throw Error("fixed-point iteration diverged");
    res.f = std::move(next);
    res.iterations = it;
    res.updates.push_back(upd);
    if (upd < tol) {
      res.residual = residual(res.f);
      if (res.residual < tol) return res;
    }
  }
  throw Error("fixed-point iteration did not converge in " + std::to_string(max_iter) +
              " iterations");
}

}  // namespace flw
