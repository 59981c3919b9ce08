#pragma once

#include "lnc/geometry.hpp"

namespace lnc {

/// Positive bounded coefficient field used for inhomogeneous media:
/// a(x) in the local term, and the symmetric pair modulation
/// b(x,y) := value at the pair midpoint for the nonlocal term.
struct Coefficient {
  enum class Kind { Constant, PiecewiseRegion, Radial };
  Kind kind = Kind::Constant;
  double value = 1.0;       // Constant
  double local = 1.0;       // PiecewiseRegion: value on local cells
  double nonlocal = 1.0;    // PiecewiseRegion: value on nonlocal cells
  double base = 1.0;        // Radial: base + amp*exp(-|x-center|^2/width^2)
  double amp = 0.0;
  Point center{0, 0};
  double width = 1.0;
};

double eval_coefficient(const Coefficient& c, const Point& x, Label region);
// symmetric pair value b(x,y) = b(y,x)
double eval_coefficient_pair(const Coefficient& c, const Point& x, const Point& y);

enum class KernelKind { TopHat, TruncGaussian, TruncFractional };

/// Radial volumetric interaction kernel with compact support of radius
/// rho (the horizon). The connectivity scale used by admissibility checks
/// is delta = rho/2, so positivity on the 2*delta ball holds on the whole
/// support.
struct KernelSpec {
  KernelKind kind = KernelKind::TopHat;
  double rho = 1.0;  // horizon, J(z) = 0 for |z| > rho
  double c = 1.0;    // amplitude
  double s = 0.5;    // TruncFractional only, in (0,1)
  double eps = 0.1;  // TruncFractional regularization, > 0
  Coefficient coefficient;  // optional symmetric modulation b(x,y)

  double delta() const { return 0.5 * rho; }
};

/// Surface coupling kernel on pairs (facet point on Gamma, nonlocal cell).
struct SurfaceKernelSpec {
  KernelKind kind = KernelKind::TopHat;  // TopHat or TruncGaussian
  double rho = 1.0;
  double c = 1.0;
};

// radial evaluation; dim enters the fractional exponent N+2s
double eval_kernel_radial(const KernelSpec& spec, double r, int dim);
double eval_kernel(const KernelSpec& spec, const Point& z, int dim);
double eval_surface_kernel(const SurfaceKernelSpec& spec, const Point& facet_point,
                           const Point& cell_center);

struct J1Check {
  bool holds = false;
  double c_est = 0;  // smallest sampled kernel value on [0, 2*delta]
};

/// Sample J on a uniform radial grid of [0, 2*delta]; (J1) holds when every
/// sample is strictly positive.
J1Check check_J1(const KernelSpec& spec, double delta, int samples, int dim);

/// Midpoint-quadrature mass sum_{cells labeled `region`} J(x - center) h^N.
/// This is the absorption weight against the exterior datum when region is
/// Exterior. Throws when the padding cannot contain the horizon.
double exterior_mass(const KernelSpec& spec, const Point& x, const GridDomain& grid, Label region);

}  // namespace lnc
