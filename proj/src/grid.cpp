#include "flw/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "flw/simd.hpp"
#include "flw/weight.hpp"

namespace flw {

TorusGrid TorusGrid::make(int d, int n) {
  if (d < 1) throw Error("grid dimension must be positive");
  if (n < 4 || n % 2 != 0) throw Error("samples per axis must be even and >= 4");
  double total = std::pow(static_cast<double>(n), d);
  if (total > 1 << 26) throw Error("grid too large");
  return TorusGrid{d, n};
}

std::size_t TorusGrid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

double TorusGrid::cell() const { return std::pow(h(), d); }

void unravel(const TorusGrid& g, std::size_t idx, std::span<int> out) {
  for (int a = g.d - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % g.n);
    idx /= g.n;
  }
}

std::size_t ravel(const TorusGrid& g, std::span<const int> idx) {
  std::size_t r = 0;
  for (int a = 0; a < g.d; ++a) r = r * g.n + static_cast<std::size_t>(idx[a]);
  return r;
}

Signal Signal::zeros(const TorusGrid& g) { return Signal{g, std::vector<cplx>(g.size())}; }

void Signal::check() const {
  if (values.size() != grid.size()) throw Error("signal length does not match grid");
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error("non-finite sample");
}

Spectrum Spectrum::zeros(const TorusGrid& g) { return Spectrum{g, std::vector<cplx>(g.size())}; }

cplx& Spectrum::at(std::span<const int> k) { return coeffs[lattice(grid).index(k)]; }
const cplx& Spectrum::at(std::span<const int> k) const { return coeffs[lattice(grid).index(k)]; }

FrequencyLattice::FrequencyLattice(const TorusGrid& g) : grid(g) {
  std::size_t m = g.size();
  coords.resize(m * g.d);
  norm.resize(m);
  bracket.resize(m);
  fft_slot.resize(m);
  std::vector<int> c(g.d), nat(g.d);
  for (std::size_t i = 0; i < m; ++i) {
    unravel(g, i, c);
    double r2 = 0;
    for (int a = 0; a < g.d; ++a) {
      int k = c[a] - g.n / 2;
      coords[i * g.d + a] = k;
      r2 += static_cast<double>(k) * k;
      nat[a] = wrap(k, g.n);
    }
    norm[i] = std::sqrt(r2);
    bracket[i] = std::sqrt(1.0 + r2);
    fft_slot[i] = ravel(g, nat);
  }
}

std::size_t FrequencyLattice::index(std::span<const int> k) const {
  std::size_t r = 0;
  for (int a = 0; a < grid.d; ++a) {
    int c = k[a] + grid.n / 2;
    if (c < 0 || c >= grid.n) throw Error("frequency outside lattice");
    r = r * grid.n + static_cast<std::size_t>(c);
  }
  return r;
}

std::size_t FrequencyLattice::origin() const {
  std::vector<int> z(grid.d, 0);
  return index(z);
}

namespace {

std::mutex g_cache_mu;

const FrequencyLattice& cached_lattice(const TorusGrid& g) {
  static std::map<std::pair<int, int>, std::unique_ptr<FrequencyLattice>> cache;
  std::lock_guard lk(g_cache_mu);
  auto& slot = cache[{g.d, g.n}];
  if (!slot) slot = std::make_unique<FrequencyLattice>(g);
  return *slot;
}

// FFTW planning is not thread-safe; execution with the new-array interface is.
fftw_plan plan_for(const TorusGrid& g, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  static std::mutex mu;
  std::lock_guard lk(mu);
  auto key = std::make_tuple(g.d, g.n, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::vector<int> dims(g.d, g.n);
  std::size_t m = g.size();
  fftw_complex* a = fftw_alloc_complex(m);
  fftw_complex* b = fftw_alloc_complex(m);
  fftw_plan p = fftw_plan_dft(g.d, dims.data(), a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  if (!p) throw Error("FFT planning failed");
  plans.emplace(key, p);
  return p;
}

void execute(const TorusGrid& g, int sign, const cplx* in, cplx* out) {
  fftw_plan p = plan_for(g, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw Error("grid mismatch");
}

}  // namespace

const FrequencyLattice& lattice(const TorusGrid& g) { return cached_lattice(g); }

Spectrum forward_transform(const Signal& f) {
  const TorusGrid& g = f.grid;
  if (f.values.size() != g.size()) throw Error("signal length does not match grid");
  const FrequencyLattice& L = lattice(g);
  std::vector<cplx> buf(g.size());
  execute(g, FFTW_FORWARD, f.values.data(), buf.data());
  double scale = std::pow(2.0 * kPi, -0.5 * g.d) * g.cell();
  Spectrum F = Spectrum::zeros(g);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) F.coeffs[i] = buf[L.fft_slot[i]] * scale;
  return F;
}

Signal inverse_transform(const Spectrum& F) {
  const TorusGrid& g = F.grid;
  if (F.coeffs.size() != g.size()) throw Error("spectrum length does not match grid");
  const FrequencyLattice& L = lattice(g);
  std::vector<cplx> buf(g.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[L.fft_slot[i]] = F.coeffs[i];
  Signal f = Signal::zeros(g);
  execute(g, FFTW_BACKWARD, buf.data(), f.values.data());
  double scale = std::pow(2.0 * kPi, -0.5 * g.d);
  for (auto& v : f.values) v *= scale;
  return f;
}

Signal cyclic_convolve(const Signal& f, const Signal& g) {
  require_same_grid(f.grid, g.grid);
  Spectrum a = forward_transform(f);
  Spectrum b = forward_transform(g);
  simd::cmul(a.coeffs.data(), b.coeffs.data(), a.coeffs.data(), a.coeffs.size());
  double c = std::pow(2.0 * kPi, 0.5 * f.grid.d);
  for (auto& v : a.coeffs) v *= c;
  return inverse_transform(a);
}

Signal pointwise_product(const Signal& f, const Signal& g) {
  require_same_grid(f.grid, g.grid);
  Signal r = Signal::zeros(f.grid);
  simd::cmul(f.values.data(), g.values.data(), r.values.data(), r.values.size());
  return r;
}

std::vector<double> centered_position(const TorusGrid& g, std::size_t j) {
  std::vector<int> idx(g.d);
  unravel(g, j, idx);
  std::vector<double> x(g.d);
  for (int a = 0; a < g.d; ++a) {
    int c = idx[a] >= g.n / 2 ? idx[a] - g.n : idx[a];
    x[a] = c * g.h();
  }
  return x;
}

double lq_sum(std::span<const double> v, double q) {
  if (q < 1) throw Error("exponent must be >= 1");
  if (std::isinf(q)) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (q == 1) {
    double s = 0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0) return 0;
  double s = 0;
  if (q == 2) {
    for (double x : v) {
      double t = x / m;
      s += t * t;
    }
    return m * std::sqrt(s);
  }
  for (double x : v) s += std::pow(std::abs(x) / m, q);
  return m * std::pow(s, 1.0 / q);
}

double lp_norm(const Signal& f, double p, const Weight* spatial_weight) {
  if (p < 1) throw Error("exponent must be >= 1");
  std::vector<double> a(f.values.size());
  simd::weighted_abs(f.values.data(), nullptr, a.data(), a.size());
  if (spatial_weight) {
    for (std::size_t j = 0; j < a.size(); ++j)
      a[j] *= spatial_weight->at_real(centered_position(f.grid, j));
  }
  double s = lq_sum(a, p);
  if (std::isinf(p)) return s;
  return s * std::pow(f.grid.cell(), 1.0 / p);
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf" || s == "∞") return kInf;
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw Error("bad exponent: " + s);
  if (v < 1) throw Error("exponent must be >= 1: " + s);
  return v;
}

std::string format_exponent(double q) {
  if (std::isinf(q)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << q;
  return os.str();
}

double conjugate(double q) {
  if (q < 1) throw Error("exponent must be >= 1");
  if (q == 1) return kInf;
  if (std::isinf(q)) return 1;
  return q / (q - 1);
}

}  // namespace flw
