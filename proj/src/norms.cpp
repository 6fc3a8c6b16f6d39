#include "flw/norms.hpp"

#include <cmath>

#include "flw/simd.hpp"

namespace flw {

namespace {

void check_q(double q) {
  if (!(q >= 1)) throw Error("exponent must be >= 1");
}

std::vector<double> weighted_magnitudes(const Spectrum& F, const Weight& w) {
  std::vector<double> wl = w.on_lattice(F.grid);
  std::vector<double> a(F.coeffs.size());
  simd::weighted_abs(F.coeffs.data(), wl.data(), a.data(), a.size());
  return a;
}

}  // namespace

double fl_norm(const Spectrum& F, const FLNormSpec& spec) {
  check_q(spec.q);
  return lq_sum(weighted_magnitudes(F, spec.weight), spec.q);
}

double fl_norm(const Signal& f, const FLNormSpec& spec) {
  check_q(spec.q);
  return fl_norm(forward_transform(f), spec);
}

double local_fl_norm(const Signal& f, const Signal& cutoff, const FLNormSpec& spec) {
  if (!(f.grid == cutoff.grid)) throw Error("grid mismatch");
  return fl_norm(pointwise_product(cutoff, f), spec);
}

double cone_seminorm(const Spectrum& F, const Cone& cone, const FLNormSpec& spec) {
  check_q(spec.q);
  if (cone.dim() != F.grid.d) throw Error("cone dimension mismatch");
  if (!(cone.aperture > 0)) throw Error("empty cone (aperture <= 0)");
  std::vector<double> a = weighted_magnitudes(F, spec.weight);
  const FrequencyLattice& L = lattice(F.grid);
  std::vector<double> kept;
  kept.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (cone.contains(L.k(i))) kept.push_back(a[i]);
  return lq_sum(kept, spec.q);
}

double cone_seminorm(const Signal& f, const Cone& cone, const FLNormSpec& spec) {
  return cone_seminorm(forward_transform(f), cone, spec);
}

KernelGrid KernelGrid::zeros(const TorusGrid& g) {
  if (g.size() > kMaxPoints) throw Error("kernel grid exceeds 4096 lattice points");
  return KernelGrid{g, std::vector<cplx>(g.size() * g.size())};
}

double mixed_norm(const KernelGrid& F, double p, double q, int order) {
  check_q(p);
  check_q(q);
  if (order != 1 && order != 2) throw Error("mixed norm order must be 1 or 2");
  std::size_t m = F.points();
  std::vector<double> col(m), outer(m);
  if (order == 1) {
    for (std::size_t l = 0; l < m; ++l) {
      for (std::size_t k = 0; k < m; ++k) col[k] = std::abs(F.at(k, l));
      outer[l] = lq_sum(col, p);
    }
    return lq_sum(outer, q);
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) col[l] = std::abs(F.at(k, l));
    outer[k] = lq_sum(col, q);
  }
  return lq_sum(outer, p);
}

}  // namespace flw
