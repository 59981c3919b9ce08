#pragma once

// Internal: deterministic enumeration of interacting cell pairs. Unordered
// pairs are visited once, ascending in the first index, window offsets in
// row-major order; the multiplicity says how often the ordered pair occurs
// in the mode's index set.

#include <cmath>
#include <stdexcept>

#include "lnc/scalar_models.hpp"

namespace lnc::detail {

struct PairInfo {
  int cell_a;         // lower cell index
  int cell_b;         // higher cell index
  Label label_a;
  Label label_b;
  int multiplicity;   // 1 or 2
  double j_value;     // kernel value including the pair coefficient
};

template <class F>
void for_each_kernel_pair(const GridDomain& grid, const KernelSpec& J, NonlocalMode mode,
                          const AssemblyOptions& opt, F&& visit) {
  const int dim = grid.dim();
  const double h = grid.h();
  // no pairs exist without nonlocal cells unless the full variant pairs the
  // exterior with the local region
  if (grid.cells_with(Label::Nonlocal).empty() && mode != NonlocalMode::SourceFull) return;
  if (opt.include_exterior && grid.pad() * h < J.rho - 1e-12)
    throw std::invalid_argument("assemble_nonlocal: pad*h must cover the kernel horizon");

  const int w = static_cast<int>(std::ceil(J.rho / h));
  const int wy = dim > 1 ? w : 0;
  const int total = grid.cell_count();
  for (int a = 0; a < total; ++a) {
    const Label la = grid.label(a);
    const auto [ax, ay] = grid.cell_coords(a);
    const Point pa = grid.cell_center(a);
    for (int oy = -wy; oy <= wy; ++oy) {
      for (int ox = -w; ox <= w; ++ox) {
        const int bx = ax + ox, by = ay + oy;
        if (bx < 0 || bx >= grid.extent(0)) continue;
        if (dim > 1 && (by < 0 || by >= grid.extent(1))) continue;
        const int b = grid.cell_index(bx, dim > 1 ? by : 0);
        if (b <= a) continue;  // each unordered pair once
        const Label lb = grid.label(b);

        const int m = (in_index_set(mode, la, lb) ? 1 : 0) + (in_index_set(mode, lb, la) ? 1 : 0);
        if (m == 0) continue;

        const bool has_exterior = la == Label::Exterior || lb == Label::Exterior;
        const bool has_local = la == Label::Local || lb == Label::Local;
        if (has_exterior && !opt.include_exterior) continue;
        if (has_local && !has_exterior && !opt.include_coupling) continue;

        const Point pb = grid.cell_center(b);
        const Point z{pa[0] - pb[0], pa[1] - pb[1]};
        double jv = eval_kernel(J, z, dim);
        if (jv == 0.0) continue;
        jv *= eval_coefficient_pair(J.coefficient, pa, pb);

        visit(PairInfo{a, b, la, lb, m, jv});
      }
    }
  }
}

}  // namespace lnc::detail
