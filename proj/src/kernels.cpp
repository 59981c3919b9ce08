#include "lnc/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace lnc {

double eval_coefficient(const Coefficient& c, const Point& x, Label region) {
  switch (c.kind) {
    case Coefficient::Kind::Constant: return c.value;
    case Coefficient::Kind::PiecewiseRegion:
      return region == Label::Local ? c.local : c.nonlocal;
    case Coefficient::Kind::Radial: {
      const double d = distance(x, c.center);
      return c.base + c.amp * std::exp(-(d * d) / (c.width * c.width));
    }
  }
  return 1.0;
}

double eval_coefficient_pair(const Coefficient& c, const Point& x, const Point& y) {
  if (c.kind == Coefficient::Kind::Constant) return c.value;
  const Point mid{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])};
  if (c.kind == Coefficient::Kind::PiecewiseRegion) {
    // midpoint has no region; fall back to the geometric mean of the two
    // region values, which keeps b symmetric, positive and bounded
    return std::sqrt(c.local * c.nonlocal);
  }
  return eval_coefficient(c, mid, Label::Nonlocal);
}

double eval_kernel_radial(const KernelSpec& spec, double r, int dim) {
  r = std::abs(r);
  if (r > spec.rho) return 0.0;
  switch (spec.kind) {
    case KernelKind::TopHat: return spec.c;
    case KernelKind::TruncGaussian:
      return spec.c * std::exp(-(r * r) / (spec.rho * spec.rho));
    case KernelKind::TruncFractional:
      return spec.c / std::pow(r + spec.eps, dim + 2.0 * spec.s);
  }
  return 0.0;
}

double eval_kernel(const KernelSpec& spec, const Point& z, int dim) {
  return eval_kernel_radial(spec, std::sqrt(z[0] * z[0] + z[1] * z[1]), dim);
}

double eval_surface_kernel(const SurfaceKernelSpec& spec, const Point& facet_point,
                           const Point& cell_center) {
  const double r = distance(facet_point, cell_center);
  if (r > spec.rho) return 0.0;
  if (spec.kind == KernelKind::TruncGaussian)
    return spec.c * std::exp(-(r * r) / (spec.rho * spec.rho));
  return spec.c;
}

J1Check check_J1(const KernelSpec& spec, double delta, int samples, int dim) {
  if (!(delta > 0)) throw std::invalid_argument("check_J1: delta must be positive");
  if (samples < 1) throw std::invalid_argument("check_J1: samples must be >= 1");
  J1Check out;
  double min_val = 0;
  if (samples == 1) {
    min_val = eval_kernel_radial(spec, 2.0 * delta, dim);
  } else {
    for (int k = 0; k < samples; ++k) {
      const double r = 2.0 * delta * k / (samples - 1);
      const double v = eval_kernel_radial(spec, r, dim);
      if (k == 0 || v < min_val) min_val = v;
    }
  }
  out.c_est = min_val;
  out.holds = min_val > 0;
  return out;
}

double exterior_mass(const KernelSpec& spec, const Point& x, const GridDomain& grid, Label region) {
  if (grid.pad() * grid.h() < spec.rho - 1e-12)
    throw std::invalid_argument("exterior_mass: pad*h must cover the kernel horizon");
  const double cell_vol = std::pow(grid.h(), grid.dim());
  double sum = 0;
  for (int cell : grid.cells_with(region)) {
    const Point pc = grid.cell_center(cell);
    const Point z{x[0] - pc[0], x[1] - pc[1]};
    sum += eval_kernel(spec, z, grid.dim()) * cell_vol;
  }
  return sum;
}

}  // namespace lnc
