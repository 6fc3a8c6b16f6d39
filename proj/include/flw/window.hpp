#pragma once

#include <span>
#include <string>

#include "flw/grid.hpp"

namespace flw {

enum class WindowShape { bspline, hann, gaussian, plateau };

// Compactly supported cutoff of full width W cells (half-width W/2).
// bspline: degree-11 cardinal B-spline, the estimator default;
// gaussian: periodized Gaussian reaching 1e-16 at the support edge;
// plateau: identically 1 on a centered flat part of `flat` cells, with a
// degree-12 spline taper down to the support edge.
struct WindowSpec {
  WindowShape shape = WindowShape::bspline;
  int width = 64;
  int flat = 0;
};

WindowShape parse_window_shape(const std::string& s);
const char* window_shape_name(WindowShape s);

// 1-D profile at distance r cells from the center, value 1 at r = 0.
double window_profile(const WindowSpec& w, double r);

// Tensor-product window on the torus centered at grid index `center`.
Signal make_window(const TorusGrid& g, std::span<const int> center, const WindowSpec& w);
// Multiplies f by the window centered at `center`; the window must fit.
Signal apply_window(const Signal& f, std::span<const int> center, const WindowSpec& w);

}  // namespace flw
