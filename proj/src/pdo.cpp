#include "flw/pdo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flw/calculus.hpp"
#include "flw/parallel.hpp"

namespace flw {

namespace {

std::vector<double> position(const TorusGrid& g, std::size_t j) {
  std::vector<int> idx(g.d);
  unravel(g, j, idx);
  std::vector<double> x(g.d);
  for (int a = 0; a < g.d; ++a) x[a] = idx[a] * g.h();
  return x;
}

// e^{2πi m/n} for m in [0, n).
std::vector<cplx> roots_of_unity(int n) {
  std::vector<cplx> r(n);
  for (int m = 0; m < n; ++m) r[m] = std::polar(1.0, 2 * kPi * m / n);
  return r;
}

Signal apply_table(const Symbol& a, const Signal& f) {
  const TorusGrid& g = f.grid;
  if (!(a.table_grid == g)) throw Error("grid mismatch");
  Spectrum F = forward_transform(f);
  const FrequencyLattice& L = lattice(g);
  std::vector<cplx> roots = roots_of_unity(g.n);
  std::size_t N = g.size();
  double pre = std::pow(2 * kPi, -0.5 * g.d);
  Signal out = Signal::zeros(g);
  parallel_for(N, [&](std::size_t j) {
    std::vector<int> idx(g.d);
    unravel(g, j, idx);
    cplx acc = 0;
    for (std::size_t k = 0; k < N; ++k) {
      long long dot = 0;
      for (int b = 0; b < g.d; ++b) dot += static_cast<long long>(L.k(k)[b]) * idx[b];
      acc += a.table[j * N + k] * F.coeffs[k] * roots[wrap(static_cast<int>(dot % g.n), g.n)];
    }
    out.values[j] = pre * acc;
  });
  return out;
}

bool within(const TorusGrid& g, std::span<const int> a, std::span<const int> b, int radius) {
  return periodic_distance(g, a, b) <= radius;
}

Cone char_cone(std::span<const double> theta, double aperture) {
  return Cone::make({theta.begin(), theta.end()}, theta.size() == 1 ? kPi / 2 : aperture);
}

// Symbol values with the x and k parts tabulated once per grid.
struct Sampled {
  const Symbol& a;
  const TorusGrid& g;
  std::vector<std::vector<cplx>> bx, ck;

  Sampled(const Symbol& sym, const TorusGrid& grid) : a(sym), g(grid) {
    if (a.is_table()) {
      if (!(a.table_grid == g)) throw Error("grid mismatch");
      return;
    }
    const FrequencyLattice& L = lattice(g);
    for (const auto& t : a.terms) {
      std::vector<cplx> b, c(L.size());
      if (t.b) {
        b.resize(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) b[j] = t.b(position(g, j));
      }
      for (std::size_t k = 0; k < L.size(); ++k) c[k] = t.c(L.k(k));
      bx.push_back(std::move(b));
      ck.push_back(std::move(c));
    }
  }

  cplx at(std::size_t j, std::size_t k) const {
    if (a.is_table()) return a.table[j * g.size() + k];
    cplx v = 0;
    for (std::size_t r = 0; r < ck.size(); ++r) v += (bx[r].empty() ? 1.0 : bx[r][j]) * ck[r][k];
    return v;
  }
};

std::vector<std::size_t> window_positions(const Symbol& a, const TorusGrid& g,
                                          std::span<const int> x0, int radius) {
  std::vector<std::size_t> js;
  if (a.x_independent()) {
    js.push_back(ravel(g, x0));
    return js;
  }
  std::vector<int> idx(g.d);
  for (std::size_t j = 0; j < g.size(); ++j) {
    unravel(g, j, idx);
    if (within(g, idx, x0, radius)) js.push_back(j);
  }
  return js;
}

void check_char_query(const TorusGrid& g, const CharQuery& cq) {
  if (!(cq.R < g.n / 2.0)) throw Error("R must be below n/2");
  if (cq.radius < 0) throw Error("spatial radius must be >= 0");
}

bool nonchar(const Sampled& s, std::span<const int> x0, std::span<const double> theta,
             const CharQuery& cq) {
  const TorusGrid& g = s.g;
  if (static_cast<int>(theta.size()) != g.d || static_cast<int>(x0.size()) != g.d)
    throw Error("dimension mismatch");
  const FrequencyLattice& L = lattice(g);
  Cone cone = char_cone(theta, cq.aperture);
  std::vector<std::size_t> ks;
  std::vector<double> floor;
  for (std::size_t k = 0; k < L.size(); ++k)
    if (L.norm[k] > cq.R && cone.contains(L.k(k))) {
      ks.push_back(k);
      floor.push_back(cq.c * std::pow(L.norm[k], s.a.order));
    }
  for (std::size_t j : window_positions(s.a, g, x0, cq.radius))
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (!(std::abs(s.at(j, ks[i])) > floor[i])) return false;
  return true;
}

// C^∞ cutoff: 1 for |k| <= n/4, 0 for |k| >= n/2.
double nyquist_taper(double r) {
  if (r <= 0.5) return 1;
  if (r >= 1) return 0;
  double t = (1 - r) / 0.5;
  double a = std::exp(-1 / t), b = std::exp(-1 / (1 - t));
  return a / (a + b);
}

}  // namespace

bool SymbolCertificate::finite() const {
  return std::isfinite(sup) && std::isfinite(dk) && std::isfinite(dx);
}

nlohmann::json SymbolCertificate::to_json() const {
  return {{"sup", sup}, {"dk", dk}, {"dx", dx}, {"samples", samples}, {"finite", finite()}};
}

Symbol Symbol::multiplier(std::string name, double order, KPart c) {
  return separable(std::move(name), order, {Term{{}, std::move(c)}});
}

Symbol Symbol::separable(std::string name, double order, std::vector<Term> terms) {
  if (terms.empty()) throw Error("symbol needs at least one term");
  for (const auto& t : terms)
    if (!t.c) throw Error("symbol term needs a frequency part");
  Symbol s;
  s.name = std::move(name);
  s.order = order;
  s.terms = std::move(terms);
  return s;
}

Symbol Symbol::from_table(const TorusGrid& g, double order, std::vector<cplx> values) {
  if (values.size() != g.size() * g.size()) throw Error("symbol table size mismatch");
  Symbol s;
  s.name = "table";
  s.order = order;
  s.table_grid = g;
  s.table = std::move(values);
  return s;
}

Symbol Symbol::differential(std::string name, double order, std::vector<Monomial> monomials) {
  if (monomials.empty()) throw Error("symbol needs at least one term");
  std::vector<Term> terms;
  for (const auto& m : monomials)
    terms.push_back({m.b, [m](std::span<const int> k) {
                       if (k.size() < m.alpha.size()) throw Error("dimension mismatch");
                       cplx v = m.coeff;
                       for (std::size_t a = 0; a < m.alpha.size(); ++a)
                         for (int p = 0; p < m.alpha[a]; ++p) v *= double(k[a]);
                       if (m.laplacian) {
                         double r2 = 0;
                         for (int x : k) r2 += double(x) * x;
                         v *= r2;
                       }
                       return v;
                     }});
  Symbol s = separable(std::move(name), order, std::move(terms));
  s.monomials = std::move(monomials);
  return s;
}

Symbol Symbol::polynomial(std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.empty()) throw Error("zero polynomial symbol");
  std::ostringstream name;
  name << "poly:";
  for (std::size_t i = 0; i < coeffs.size(); ++i) name << (i ? "," : "") << coeffs[i];
  double order = static_cast<double>(coeffs.size() - 1);
  std::vector<Monomial> ms;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) ms.push_back({{}, coeffs[i], {static_cast<int>(i)}});
  return differential(name.str(), order, std::move(ms));
}

Symbol Symbol::laplace_plus_one() {
  return differential("laplace+1", 2, {{{}, 1, {}}, {{}, 1, {}, true}});
}

Symbol Symbol::dx1() {
  return differential("dx1", 1, {{{}, cplx(0, 1), {1}}});
}

bool Symbol::x_independent() const {
  if (is_table()) return false;
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return !t.b; });
}

cplx Symbol::eval(const TorusGrid& g, std::size_t j, std::span<const int> k) const {
  if (is_table()) {
    if (!(table_grid == g)) throw Error("grid mismatch");
    return table[j * g.size() + lattice(g).index(k)];
  }
  cplx v = 0;
  std::vector<double> x;
  for (const auto& t : terms) {
    cplx b = 1;
    if (t.b) {
      if (x.empty()) x = position(g, j);
      b = t.b(x);
    }
    v += b * t.c(k);
  }
  return v;
}

SymbolCertificate Symbol::certificate(const TorusGrid& g) const {
  const FrequencyLattice& L = lattice(g);
  int stride = std::max(1, g.n / 16);
  std::vector<std::size_t> js;
  std::vector<int> idx(g.d);
  for (std::size_t j = 0; j < g.size(); ++j) {
    unravel(g, j, idx);
    if (std::all_of(idx.begin(), idx.end(), [&](int v) { return v % stride == 0; })) js.push_back(j);
  }
  if (x_independent()) js.resize(1);
  Sampled smp(*this, g);
  std::vector<SymbolCertificate> per(js.size());
  parallel_for(js.size(), [&](std::size_t i) {
    std::size_t j = js[i];
    SymbolCertificate& c = per[i];
    std::vector<int> jj(g.d), k2(g.d);
    unravel(g, j, jj);
    for (std::size_t k = 0; k < L.size(); ++k) {
      double br = L.bracket[k];
      cplx a = smp.at(j, k);
      c.sup = std::max(c.sup, std::abs(a) / std::pow(br, order));
      for (int b = 0; b < g.d; ++b) {
        std::copy(L.k(k).begin(), L.k(k).end(), k2.begin());
        if (++k2[b] < g.n / 2)
          c.dk = std::max(c.dk, std::abs(smp.at(j, L.index(k2)) - a) / std::pow(br, order - 1));
        if (!x_independent()) {
          std::vector<int> j2 = jj;
          j2[b] = wrap(j2[b] + 1, g.n);
          cplx a2 = smp.at(ravel(g, j2), k);
          c.dx = std::max(c.dx, std::abs(a2 - a) / g.h() / std::pow(br, order));
        }
      }
      ++c.samples;
    }
  });
  SymbolCertificate out;
  for (const auto& c : per) {
    out.sup = std::max(out.sup, c.sup);
    out.dk = std::max(out.dk, c.dk);
    out.dx = std::max(out.dx, c.dx);
    out.samples += c.samples;
  }
  return out;
}

Symbol parse_symbol(const std::string& spec) {
  if (spec == "laplace+1") return Symbol::laplace_plus_one();
  if (spec == "dx1") return Symbol::dx1();
  if (spec.rfind("poly:", 0) == 0) {
    std::vector<double> c;
    std::stringstream ss(spec.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        c.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw Error("");
      } catch (const std::exception&) {
        throw Error("bad polynomial coefficient: " + tok);
      }
    }
    return Symbol::polynomial(std::move(c));
  }
  if (spec.rfind("table:", 0) == 0) {
    std::ifstream in(spec.substr(6));
    if (!in) throw Error("cannot open symbol table: " + spec.substr(6));
    nlohmann::json j;
    try {
      in >> j;
      TorusGrid g = TorusGrid::make(j.at("d").get<int>(), j.at("n").get<int>());
      auto re = j.at("re").get<std::vector<double>>();
      auto im = j.at("im").get<std::vector<double>>();
      if (re.size() != im.size()) throw Error("symbol table re/im size mismatch");
      std::vector<cplx> v(re.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = {re[i], im[i]};
      return Symbol::from_table(g, j.at("order").get<double>(), std::move(v));
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("bad symbol table: ") + e.what());
    }
  }
  throw Error("unknown symbol: " + spec);
}

Signal quantize_apply(const Symbol& a, const Signal& f) {
  f.check();
  if (a.is_table()) return apply_table(a, f);
  const TorusGrid& g = f.grid;
  const FrequencyLattice& L = lattice(g);
  Spectrum F = forward_transform(f);
  Signal out = Signal::zeros(g);
  for (const auto& t : a.terms) {
    Spectrum G = F;
    for (std::size_t k = 0; k < L.size(); ++k) G.coeffs[k] *= t.c(L.k(k));
    Signal part = inverse_transform(G);
    if (t.b)
      for (std::size_t j = 0; j < part.values.size(); ++j) part.values[j] *= t.b(position(g, j));
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += part.values[j];
  }
  return out;
}

namespace {

// 8th-order central stencils, offsets 1..4 (first derivative antisymmetric).
constexpr double kD1[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
constexpr double kD2c = -205.0 / 72;
constexpr double kD2[4] = {8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};

std::vector<cplx> difference(const TorusGrid& g, const std::vector<cplx>& u, int axis, int order) {
  std::size_t stride = 1;
  for (int a = g.d - 1; a > axis; --a) stride *= g.n;
  std::vector<cplx> out(u.size());
  double h = g.h();
  std::vector<int> idx(g.d);
  for (std::size_t j = 0; j < u.size(); ++j) {
    int i = static_cast<int>(j / stride % g.n);
    auto at = [&](int off) { return u[j + (wrap(i + off, g.n) - i) * static_cast<long long>(stride)]; };
    cplx v = 0;
    if (order == 1) {
      for (int o = 1; o <= 4; ++o) v += kD1[o - 1] * (at(o) - at(-o));
      v /= h;
    } else {
      v = kD2c * u[j];
      for (int o = 1; o <= 4; ++o) v += kD2[o - 1] * (at(o) + at(-o));
      v /= h * h;
    }
    out[j] = v;
  }
  return out;
}

// (-i∂_axis)^p
std::vector<cplx> power_of_d(const TorusGrid& g, std::vector<cplx> u, int axis, int p) {
  for (; p >= 2; p -= 2) {
    u = difference(g, u, axis, 2);
    for (auto& v : u) v = -v;
  }
  if (p == 1) {
    u = difference(g, u, axis, 1);
    for (auto& v : u) v *= cplx(0, -1);
  }
  return u;
}

}  // namespace

Signal apply_differential(const Symbol& a, const Signal& f) {
  f.check();
  if (!a.is_differential()) throw Error("symbol is not a differential operator: " + a.name);
  const TorusGrid& g = f.grid;
  Signal out = Signal::zeros(g);
  for (const auto& m : a.monomials) {
    if (static_cast<int>(m.alpha.size()) > g.d) throw Error("dimension mismatch");
    std::vector<cplx> u = f.values;
    for (std::size_t ax = 0; ax < m.alpha.size(); ++ax) u = power_of_d(g, std::move(u), ax, m.alpha[ax]);
    if (m.laplacian) {
      std::vector<cplx> lap(u.size(), 0);
      for (int ax = 0; ax < g.d; ++ax) {
        std::vector<cplx> p = power_of_d(g, u, ax, 2);
        for (std::size_t j = 0; j < u.size(); ++j) lap[j] += p[j];
      }
      u = std::move(lap);
    }
    for (std::size_t j = 0; j < u.size(); ++j)
      out.values[j] += m.coeff * (m.b ? m.b(position(g, j)) : cplx(1)) * u[j];
  }
  return out;
}

bool noncharacteristic_at(const Symbol& a, const TorusGrid& g, std::span<const int> x0,
                          std::span<const double> theta, const CharQuery& cq) {
  check_char_query(g, cq);
  return nonchar(Sampled(a, g), x0, theta, cq);
}

std::vector<SingularPoint> char_set_scan(const Symbol& a, const TorusGrid& g,
                                         const std::vector<std::vector<int>>& positions,
                                         const std::vector<std::vector<double>>& directions,
                                         const CharQuery& cq) {
  check_char_query(g, cq);
  Sampled smp(a, g);
  std::size_t nd = directions.size();
  std::vector<std::uint8_t> flag(positions.size() * nd, 0);
  parallel_for(flag.size(), [&](std::size_t c) {
    flag[c] = !nonchar(smp, positions[c / nd], directions[c % nd], cq);
  });
  std::vector<SingularPoint> out;
  for (std::size_t c = 0; c < flag.size(); ++c)
    if (flag[c]) out.push_back({positions[c / nd], directions[c % nd]});
  return out;
}

nlohmann::json TransportReport::to_json() const {
  return {{"lowered", lowered.to_json()},
          {"recovered", recovered.to_json()},
          {"microlocal", microlocal.to_json()},
          {"char_points", char_points},
          {"certificate", certificate.to_json()},
          {"ok", ok()}};
}

Symbol dealiased(const Symbol& a, const TorusGrid& g) {
  const FrequencyLattice& L = lattice(g);
  double half = g.n / 2.0;
  if (a.is_table()) {
    Symbol out = a;
    std::size_t N = g.size();
    if (!(a.table_grid == g)) throw Error("grid mismatch");
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k) out.table[j * N + k] *= nyquist_taper(L.norm[k] / half);
    return out;
  }
  std::vector<Symbol::Term> terms;
  for (const auto& t : a.terms) {
    Symbol::KPart c = t.c;
    terms.push_back({t.b, [c, half](std::span<const int> k) {
                       double r2 = 0;
                       for (int v : k) r2 += double(v) * v;
                       return c(k) * nyquist_taper(std::sqrt(r2) / half);
                     }});
  }
  return Symbol::separable(a.name, a.order, std::move(terms));
}

WavefrontQuery transport_query(const TorusGrid& g, double q, double s) {
  WavefrontQuery qu = WavefrontQuery::standard(g, {q, Weight::power(s)});
  --qu.m_hi;
  return qu;
}

TransportReport transport_check(const Symbol& a, const Signal& f, double q, double s, double c) {
  const TorusGrid& g = f.grid;
  TransportReport rep;
  rep.certificate = a.certificate(g);
  if (!rep.certificate.finite()) throw Error("symbol certificate is not finite");
  bool local = a.is_differential();
  Signal Af = local ? apply_differential(a, f) : quantize_apply(dealiased(a, g), f);
  auto query = [&](double t) {
    return local ? WavefrontQuery::standard(g, {q, Weight::power(t)}) : transport_query(g, q, t);
  };
  WavefrontQuery qu = query(s);
  WavefrontReport wf_f = estimate_wavefront(f, qu);
  WavefrontReport wf_af = estimate_wavefront(Af, query(s - a.order));
  Tolerance tol = standard_tolerance(qu);

  CharQuery cq;
  cq.c = c;
  cq.R = std::ldexp(1.0, qu.m_lo);
  cq.aperture = qu.aperture;
  cq.radius = qu.scan_step / 2;
  auto chars = char_set_scan(a, g, qu.positions, qu.directions, cq);
  rep.char_points = chars.size();

  auto sf = singular_points(wf_f), saf = singular_points(wf_af);
  rep.lowered = check_inclusion("transport/lowered", g, saf, sf, tol);

  std::vector<SingularPoint> nonchar;
  for (const auto& p : sf) {
    bool is_char = std::any_of(chars.begin(), chars.end(),
                               [&](const SingularPoint& ch) { return near(g, p, ch, tol); });
    if (!is_char) nonchar.push_back(p);
  }
  rep.recovered = check_inclusion("transport/recovered", g, nonchar, saf, tol);

  std::vector<SingularPoint> rhs = saf;
  rhs.insert(rhs.end(), chars.begin(), chars.end());
  rep.microlocal = check_inclusion("transport/microlocal", g, sf, rhs, tol);
  nlohmann::json notes = {{"symbol", a.name},
                          {"order", a.order},
                          {"q", format_exponent(q)},
                          {"s", s},
                          {"c", c},
                          {"R", cq.R},
                          {"octaves", {qu.m_lo, qu.m_hi}},
                          {"realization", local ? "differences" : "dealiased"},
                          {"singular_f", sf.size()},
                          {"singular_af", saf.size()}};
  rep.lowered.notes = rep.recovered.notes = rep.microlocal.notes = notes;
  return rep;
}

InclusionReport derivative_check(const Signal& f, int axis, double q, double s) {
  const TorusGrid& g = f.grid;
  if (axis < 0 || axis >= g.d) throw Error("axis out of range");
  std::vector<int> alpha(axis + 1, 0);
  alpha[axis] = 1;
  Symbol d = Symbol::differential("d" + std::to_string(axis + 1), 1, {{{}, cplx(0, 1), alpha}});
  Signal df = apply_differential(d, f);
  WavefrontQuery qu = WavefrontQuery::standard(g, {q, Weight::power(s)});
  WavefrontReport lhs = estimate_wavefront(df, WavefrontQuery::standard(g, {q, Weight::power(s - 1)}));
  WavefrontReport rhs = estimate_wavefront(f, qu);
  InclusionReport r = check_inclusion("wf-derivative", g, singular_points(lhs),
                                      singular_points(rhs), standard_tolerance(qu));
  r.notes = {{"axis", axis}, {"q", format_exponent(q)}, {"s", s}};
  return r;
}

}  // namespace flw
