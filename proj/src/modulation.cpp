#include "flw/modulation.hpp"

#include <algorithm>
#include <cmath>

#include "flw/calculus.hpp"
#include "flw/parallel.hpp"

namespace flw {

namespace {

// Column of V at position j: forward transform of f times the window centered there.
Spectrum column(const Signal& f, const WindowSpec& window, std::size_t j) {
  std::vector<int> c(f.grid.d);
  unravel(f.grid, j, c);
  Signal w = make_window(f.grid, c, window);
  for (auto& v : w.values) v = std::conj(v);
  return forward_transform(pointwise_product(f, w));
}

void check_exponent(double e) {
  if (!(e >= 1)) throw Error("exponent must be >= 1");
}

// Per-k inner L^p over positions of |V ω|, streaming over columns. Several
// inner exponents at once; accumulators hold Σ|·|^p (or the max for p = ∞).
template <class ColumnFn>
std::vector<std::vector<double>> inner_norms(const TorusGrid& g, const std::vector<double>& ps,
                                             const SectionedWeight& w, XMeasure measure,
                                             ColumnFn&& col) {
  const FrequencyLattice& L = lattice(g);
  std::size_t N = g.size(), K = L.size();
  std::vector<double> kw = Weight::power(w.s).on_lattice(g);
  Weight xw = Weight::power(w.t);
  double cell = measure == XMeasure::cell ? g.cell() : 1.0;
  std::vector<std::vector<double>> res(ps.size(), std::vector<double>(K, 0));
  // Columns are computed in parallel blocks and reduced in position order.
  constexpr std::size_t kBlock = 64;
  std::vector<std::vector<double>> per(kBlock);
  for (std::size_t start = 0; start < N; start += kBlock) {
    std::size_t count = std::min(kBlock, N - start);
    parallel_for(count, [&](std::size_t b) {
      std::size_t j = start + b;
      Spectrum V = col(j);
      double wx = w.t == 0 ? 1.0 : xw.at_real(centered_position(g, j));
      std::vector<double>& out = per[b];
      out.assign(ps.size() * K, 0);
      for (std::size_t k = 0; k < K; ++k) {
        double a = std::abs(V.coeffs[k]) * kw[k] * wx;
        for (std::size_t i = 0; i < ps.size(); ++i)
          out[i * K + k] = std::isinf(ps[i]) ? a : std::pow(a, ps[i]);
      }
    });
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t b = 0; b < count; ++b)
        for (std::size_t k = 0; k < K; ++k) {
          double v = per[b][i * K + k];
          res[i][k] = std::isinf(ps[i]) ? std::max(res[i][k], v) : res[i][k] + v;
        }
  }
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!std::isinf(ps[i]))
      for (double& v : res[i]) v = std::pow(cell * v, 1.0 / ps[i]);
  return res;
}

double outer(const std::vector<double>& inner, double q) { return lq_sum(inner, q); }

double fl_of(const Signal& f, double q, double s) { return fl_norm(f, {q, Weight::power(s)}); }

}  // namespace

STFT stft(const Signal& f, const WindowSpec& window) {
  f.check();
  std::size_t N = f.grid.size();
  if (N * N > STFT::kMaxCells) throw Error("STFT too large for the grid");
  STFT V;
  V.grid = f.grid;
  V.values.assign(N * N, 0);
  parallel_for(N, [&](std::size_t j) {
    Spectrum c = column(f, window, j);
    std::copy(c.coeffs.begin(), c.coeffs.end(), V.values.begin() + j * N);
  });
  return V;
}

double modulation_norm(const Signal& f, double p, double q, const SectionedWeight& w,
                       const WindowSpec& window, XMeasure measure) {
  check_exponent(p);
  check_exponent(q);
  f.check();
  auto in = inner_norms(f.grid, {p}, w, measure,
                        [&](std::size_t j) { return column(f, window, j); });
  return outer(in[0], q);
}

double modulation_norm(const STFT& V, double p, double q, const SectionedWeight& w,
                       XMeasure measure) {
  check_exponent(p);
  check_exponent(q);
  std::size_t N = V.grid.size();
  auto in = inner_norms(V.grid, {p}, w, measure, [&](std::size_t j) {
    Spectrum c = Spectrum::zeros(V.grid);
    std::copy(V.values.begin() + j * N, V.values.begin() + (j + 1) * N, c.coeffs.begin());
    return c;
  });
  return outer(in[0], q);
}

int support_extent(const Signal& f) {
  const TorusGrid& g = f.grid;
  double peak = 0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  if (peak == 0) return 0;
  std::vector<std::vector<bool>> hit(g.d, std::vector<bool>(g.n, false));
  std::vector<int> idx(g.d);
  for (std::size_t j = 0; j < f.values.size(); ++j)
    if (std::abs(f.values[j]) > 1e-12 * peak) {
      unravel(g, j, idx);
      for (int a = 0; a < g.d; ++a) hit[a][idx[a]] = true;
    }
  int extent = 0;
  for (int a = 0; a < g.d; ++a) {
    // Longest periodic run of empty samples; the support arc is the rest.
    int longest = 0, run = 0;
    for (int j = 0; j < 2 * g.n; ++j) {
      run = hit[a][j % g.n] ? 0 : run + 1;
      longest = std::max(longest, std::min(run, g.n));
    }
    extent = std::max(extent, g.n - longest);
  }
  return extent;
}

nlohmann::json EquivalenceReport::to_json() const {
  return {{"p", format_exponent(p)},   {"q", format_exponent(q)},
          {"s", s},                    {"count", count},
          {"support", support},        {"lower_ratio", lower_ratio},
          {"upper_ratio", upper_ratio}, {"spread", spread()}};
}

EquivalenceReport equivalence_check(const std::vector<Signal>& fs, double q, double s, double p,
                                    const WindowSpec& window) {
  if (fs.empty()) throw Error("equivalence check needs at least one signal");
  check_exponent(p);
  check_exponent(q);
  EquivalenceReport r;
  r.p = p;
  r.q = q;
  r.s = s;
  r.lower_ratio = kInf;
  for (const auto& f : fs) {
    int ext = support_extent(f);
    if (2 * ext > f.grid.n) throw Error("support exceeds half the torus");
    r.support = std::max(r.support, ext);
    double fl = fl_of(f, q, s);
    if (fl == 0) throw Error("zero signal");
    double ratio = modulation_norm(f, p, q, {s, 0}, window) / fl;
    r.lower_ratio = std::min(r.lower_ratio, ratio);
    r.upper_ratio = std::max(r.upper_ratio, ratio);
    ++r.count;
  }
  return r;
}

nlohmann::json EmbeddingReport::to_json() const {
  return {{"q", format_exponent(q)},
          {"p1", format_exponent(p1)},
          {"p2", format_exponent(p2)},
          {"upper", upper},
          {"lower", lower},
          {"monotone_ratio", monotone_ratio},
          {"tolerance", tolerance},
          {"ok", ok()}};
}

double modulation_monotone_ratio(const STFT& V, double p1, double q1, double p2, double q2,
                                 const SectionedWeight& w) {
  for (double e : {p1, q1, p2, q2}) check_exponent(e);
  if (p1 > p2 || q1 > q2) throw Error("requires p1 <= p2 and q1 <= q2");
  double lo = modulation_norm(V, p1, q1, w, XMeasure::counting);
  double hi = modulation_norm(V, p2, q2, w, XMeasure::counting);
  return lo > 0 ? hi / lo : 0;
}

EmbeddingReport embedding_check(const Signal& f, double q, double p1, double p2,
                                const WindowSpec& window) {
  for (double e : {q, p1, p2}) check_exponent(e);
  double qc = conjugate(q);
  if (!(p1 <= std::min(q, qc) && std::max(q, qc) <= p2))
    throw Error("requires p1 <= min(q, q') and max(q, q') <= p2");
  f.check();
  EmbeddingReport r;
  r.q = q;
  r.p1 = p1;
  r.p2 = p2;
  auto in = inner_norms(f.grid, {p1, p2}, {0, 0}, XMeasure::cell,
                        [&](std::size_t j) { return column(f, window, j); });
  double fl = fl_of(f, q, 0);
  double m1 = outer(in[0], q), m2 = outer(in[1], q);
  r.upper = fl > 0 ? m2 / fl : 0;
  r.lower = m1 > 0 ? fl / m1 : 0;
  auto cnt = inner_norms(f.grid, {p1, p2}, {0, 0}, XMeasure::counting,
                         [&](std::size_t j) { return column(f, window, j); });
  double c1 = outer(cnt[0], q);
  r.monotone_ratio = c1 > 0 ? outer(cnt[1], q) / c1 : 0;
  return r;
}

InclusionReport modulation_wf_agreement(const Signal& f, double q, double s) {
  WavefrontQuery qu = WavefrontQuery::standard(f.grid, {q, Weight::power(s)});
  WavefrontReport fl = estimate_wavefront(f, qu);
  WavefrontReport mod = modulation_wavefront(f, qu);
  InclusionReport r = check_agreement("wf-modulation", f.grid, singular_points(fl),
                                      singular_points(mod), standard_tolerance(qu));
  r.notes = {{"q", format_exponent(q)},
             {"s", s},
             {"fl_cells", fl.singular_count()},
             {"modulation_cells", mod.singular_count()}};
  return r;
}

}  // namespace flw
