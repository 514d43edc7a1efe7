#ifndef VSWAP_VG_QUADRATURE_HPP
#define VSWAP_VG_QUADRATURE_HPP

#include <functional>

#include "vswap/levy_vg.hpp"

namespace vswap {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  // innermost panel boundary next to the x = 0 singularity
  double first_panel_width = 1e-8;
  // integrand values below peak * tail_cutoff terminate the geometric march
  double tail_cutoff = 1e-16;
  int max_panels = 40000;
};

// Adaptive quadrature of  int f(x) nu(dx)  over (-inf,0) U (0,inf) for the
// VG kernel, split at the origin with geometric panels toward it.  This is
// the independent oracle for the closed forms routed through char_exponent;
// it never calls them.  Throws NumericalError(QuadratureNonConvergent) when
// the panel budget is exhausted before the tolerance is met.
double levy_integral(const std::function<double(double)>& f, const VgParams& p,
                     const QuadratureOptions& opts = {});

}  // namespace vswap

#endif
