#include "flw/cone.hpp"

#include <cmath>
#include <sstream>

namespace flw {

Cone Cone::make(std::vector<double> axis, double aperture) {
  if (axis.empty()) throw Error("cone axis must be non-empty");
  if (!(aperture > 0)) throw Error("empty cone (aperture <= 0)");
  if (aperture > kPi) throw Error("cone aperture exceeds pi");
  double r2 = 0;
  for (double c : axis) r2 += c * c;
  if (!(r2 > 0) || !std::isfinite(r2)) throw Error("cone axis must be a nonzero vector");
  double r = std::sqrt(r2);
  for (double& c : axis) c /= r;
  return Cone{std::move(axis), aperture};
}

Cone Cone::full(int d) {
  std::vector<double> a(d, 0.0);
  a[0] = 1;
  return Cone{std::move(a), kPi};
}

Cone Cone::from_angle(double theta, double aperture) {
  return make({std::cos(theta), std::sin(theta)}, aperture);
}

double Cone::angle_to(std::span<const double> k) const {
  double dot = 0, k2 = 0;
  for (std::size_t a = 0; a < axis.size(); ++a) {
    dot += axis[a] * k[a];
    k2 += k[a] * k[a];
  }
  double perp2 = k2 - dot * dot;
  double perp = perp2 > 0 ? std::sqrt(perp2) : 0.0;
  return std::atan2(perp, dot);
}

bool Cone::contains_real(std::span<const double> k) const {
  if (static_cast<int>(k.size()) != dim()) throw Error("cone dimension mismatch");
  bool zero = true;
  for (double c : k) zero = zero && c == 0;
  if (zero) return false;
  if (aperture >= kPi) return true;
  return angle_to(k) < aperture - 1e-12;
}

bool Cone::contains(std::span<const int> k) const {
  double buf[8];
  std::vector<double> heap;
  double* p = buf;
  if (k.size() > 8) {
    heap.resize(k.size());
    p = heap.data();
  }
  for (std::size_t a = 0; a < k.size(); ++a) p[a] = k[a];
  return contains_real({p, k.size()});
}

Cone parse_cone(const std::string& spec, int d, double aperture) {
  if (spec.rfind("dir:", 0) == 0) {
    if (d != 2) throw Error("dir:θ requires d = 2");
    return Cone::from_angle(std::stod(spec.substr(4)), aperture);
  }
  if (spec.rfind("axis:", 0) == 0) {
    std::vector<double> a;
    std::stringstream ss(spec.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ',')) a.push_back(std::stod(tok));
    if (static_cast<int>(a.size()) != d) throw Error("axis dimension mismatch");
    return Cone::make(std::move(a), aperture);
  }
  throw Error("unknown direction spec: " + spec);
}

void check_omega_params(double delta, double R) {
  if (!(delta > 0 && delta < 1)) throw Error("region parameters require 0 < delta < 1");
  if (!(R >= 4 / delta)) throw Error("region parameters require R >= 4/delta");
}

std::array<bool, 5> omega_tests(std::span<const double> xi, std::span<const double> eta,
                                double delta, double R) {
  double x2 = 0, e2 = 0, m2 = 0;
  for (std::size_t a = 0; a < xi.size(); ++a) {
    x2 += xi[a] * xi[a];
    e2 += eta[a] * eta[a];
    double m = xi[a] - eta[a];
    m2 += m * m;
  }
  double bx = std::sqrt(1 + x2), be = std::sqrt(1 + e2), bm = std::sqrt(1 + m2);
  double ax = std::sqrt(x2);
  std::array<bool, 5> r{};
  r[0] = be < delta * bx;
  r[1] = bm < delta * bx;
  r[2] = delta * bx <= std::min(be, bm) && ax <= R;
  r[3] = delta * bx <= bm && bm <= be && ax > R;
  r[4] = delta * bx <= be && be <= bm && ax > R;
  return r;
}

int omega_label(std::span<const double> xi, std::span<const double> eta, double delta, double R) {
  auto t = omega_tests(xi, eta, delta, R);
  for (int j = 0; j < 5; ++j)
    if (t[j]) return j + 1;
  return 0;
}

std::size_t RegionMask::count(int region) const {
  std::size_t c = 0;
  for (auto v : masks[region - 1]) c += v;
  return c;
}

RegionMask omega_masks(const TorusGrid& g, double delta, double R, bool disjoint) {
  check_omega_params(delta, R);
  const FrequencyLattice& L = lattice(g);
  std::size_t m = L.size();
  RegionMask rm;
  rm.grid = g;
  rm.delta = delta;
  rm.R = R;
  rm.disjoint = disjoint;
  for (auto& v : rm.masks) v.assign(m * m, 0);
  std::vector<double> xi(g.d), eta(g.d);
  for (std::size_t k = 0; k < m; ++k) {
    for (int a = 0; a < g.d; ++a) xi[a] = L.k(k)[a];
    for (std::size_t l = 0; l < m; ++l) {
      for (int a = 0; a < g.d; ++a) eta[a] = L.k(l)[a];
      auto t = omega_tests(xi, eta, delta, R);
      if (disjoint) {
        // Ties between regions go to the lower index.
        for (int j = 0; j < 5; ++j)
          if (t[j]) {
            rm.masks[j][k * m + l] = 1;
            break;
          }
      } else {
        for (int j = 0; j < 5; ++j) rm.masks[j][k * m + l] = t[j];
      }
    }
  }
  return rm;
}

}  // namespace flw
