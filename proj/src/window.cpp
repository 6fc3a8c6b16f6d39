#include "flw/window.hpp"

#include <cmath>
#include <vector>

namespace flw {

namespace {

constexpr int kDegree = 11;

// Cardinal B-spline of degree p on [0, p+1], evaluated from the nearer end to
// keep the truncated-power sum well conditioned.
double bspline(double t, int p) {
  if (t <= 0 || t >= p + 1) return 0;
  double u = std::min(t, p + 1 - t);
  double sum = 0, binom = 1, fact = 1;
  for (int i = 1; i <= p; ++i) fact *= i;
  for (int i = 0; i <= p + 1; ++i) {
    double x = u - i;
    if (x <= 0) break;
    sum += (i % 2 ? -1 : 1) * binom * std::pow(x, p);
    binom = binom * (p + 1 - i) / (i + 1);
  }
  return sum / fact;
}

const double kCenter = bspline(0.5 * (kDegree + 1), kDegree);

// Integral of the degree-p B-spline from 0 to x, as a sum of shifted
// degree-(p+1) splines; rises from 0 at x <= 0 to 1 at x >= p+2.
double smooth_step(double x, int p) {
  if (x <= 0) return 0;
  if (x >= p + 2) return 1;
  double s = 0;
  for (int j = 0; j <= p + 1; ++j) s += bspline(x - j, p + 1);
  return s;
}

}  // namespace

WindowShape parse_window_shape(const std::string& s) {
  if (s == "bspline") return WindowShape::bspline;
  if (s == "hann") return WindowShape::hann;
  if (s == "gaussian") return WindowShape::gaussian;
  if (s == "plateau") return WindowShape::plateau;
  throw Error("unknown window shape: " + s);
}

const char* window_shape_name(WindowShape s) {
  switch (s) {
    case WindowShape::bspline: return "bspline";
    case WindowShape::hann: return "hann";
    case WindowShape::gaussian: return "gaussian";
    case WindowShape::plateau: return "plateau";
  }
  return "?";
}

double window_profile(const WindowSpec& w, double r) {
  double half = 0.5 * w.width;
  r = std::abs(r);
  if (r >= half) return 0;
  switch (w.shape) {
    case WindowShape::bspline: {
      double t = (r / half + 1) * 0.5 * (kDegree + 1);
      return bspline(t, kDegree) / kCenter;
    }
    case WindowShape::hann:
      return 0.5 * (1 + std::cos(kPi * r / half));
    case WindowShape::gaussian: {
      // exp(-half²/(2σ²)) = 1e-16 at the support edge
      double sigma2 = half * half / (2 * 16 * std::log(10.0));
      return std::exp(-r * r / (2 * sigma2));
    }
    case WindowShape::plateau: {
      double flat = 0.5 * w.flat;
      if (r <= flat) return 1;
      return smooth_step((half - r) / (half - flat) * (kDegree + 2), kDegree);
    }
  }
  return 0;
}

Signal make_window(const TorusGrid& g, std::span<const int> center, const WindowSpec& w) {
  if (w.width < 4) throw Error("window width must be >= 4 cells");
  if (w.width > g.n) throw Error("window larger than torus");
  if (w.shape == WindowShape::plateau && (w.flat < 0 || w.flat >= w.width))
    throw Error("plateau must be narrower than the window");
  std::vector<std::vector<double>> axis(g.d, std::vector<double>(g.n));
  for (int a = 0; a < g.d; ++a)
    for (int j = 0; j < g.n; ++j) {
      int dj = wrap(j - center[a], g.n);
      if (dj > g.n / 2) dj -= g.n;
      axis[a][j] = window_profile(w, dj);
    }
  Signal out = Signal::zeros(g);
  std::vector<int> idx(g.d);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    unravel(g, i, idx);
    double v = 1;
    for (int a = 0; a < g.d; ++a) v *= axis[a][idx[a]];
    out.values[i] = v;
  }
  return out;
}

Signal apply_window(const Signal& f, std::span<const int> center, const WindowSpec& w) {
  return pointwise_product(make_window(f.grid, center, w), f);
}

}  // namespace flw
