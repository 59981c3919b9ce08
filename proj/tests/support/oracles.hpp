#pragma once

// Test-only oracles, kept independent of the assembly code paths: the
// energies are re-derived with plain full loops over cells and pairs, and
// connectivity with a transitive closure over all pairwise distances.

#include <cmath>
#include <random>
#include <vector>

#include "lnc/elastic_models.hpp"
#include "lnc/scalar_models.hpp"

namespace lnc::test {

// value of the discrete field at a cell used as quadrature point
inline double field_at_cell(const GridDomain& grid, const DofMap& map,
                            const std::vector<double>& u, int cell, int comp,
                            const ExteriorDatum& datum) {
  const Label l = grid.label(cell);
  if (l == Label::Exterior) return comp == 0 ? datum.eval(grid.cell_center(cell)) : 0.0;
  if (l == Label::Nonlocal) return u[map.dof(map.cell_slot[cell], comp)];
  // local: average the cell's corner vertex values, eliminated corners = 0
  const auto [ix, iy] = grid.cell_coords(cell);
  const int corners = grid.dim() == 1 ? 2 : 4;
  double acc = 0;
  for (int k = 0; k < corners; ++k) {
    const int vx = ix + (k & 1), vy = iy + (k >> 1);
    const int slot = map.vertex_slot[grid.vertex_index(vx, grid.dim() > 1 ? vy : 0)];
    if (slot >= 0) acc += u[map.dof(slot, comp)];
  }
  return acc / corners;
}

// scalar |grad u|^2 integral over one local cell, re-derived by quadrature
// over a fine fixed sub-grid (exact would need the element integrals; a
// 6x6 midpoint rule on a bilinear integrand is used with its known error
// subtracted analytically via Richardson -- instead we integrate exactly:
// the integrand is polynomial, use 3x3 Gauss which is exact as well)
inline double local_cell_energy(const GridDomain& grid, const DofMap& map,
                                const std::vector<double>& u, int cell, double a) {
  const double h = grid.h();
  const auto [ix, iy] = grid.cell_coords(cell);
  auto vval = [&](int ox, int oy) {
    const int slot = map.vertex_slot[grid.vertex_index(ix + ox, grid.dim() > 1 ? iy + oy : 0)];
    return slot >= 0 ? u[map.dof(slot, 0)] : 0.0;
  };
  if (grid.dim() == 1) {
    const double du = (vval(1, 0) - vval(0, 0)) / h;
    return 0.5 * a * du * du * h;
  }
  // 3-point Gauss per axis, exact for the degree-2 integrand
  const double gp[3] = {0.5 * (1 - std::sqrt(3.0 / 5.0)), 0.5, 0.5 * (1 + std::sqrt(3.0 / 5.0))};
  const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const double v00 = vval(0, 0), v10 = vval(1, 0), v01 = vval(0, 1), v11 = vval(1, 1);
  double acc = 0;
  for (int qa = 0; qa < 3; ++qa) {
    for (int qb = 0; qb < 3; ++qb) {
      const double xi = gp[qa], eta = gp[qb], w = gw[qa] * gw[qb] * h * h;
      const double gx = ((v10 - v00) * (1 - eta) + (v11 - v01) * eta) / h;
      const double gy = ((v01 - v00) * (1 - xi) + (v11 - v10) * xi) / h;
      acc += 0.5 * a * (gx * gx + gy * gy) * w;
    }
  }
  return acc;
}

// full scalar model energy by direct summation (no assembled matrix)
inline double direct_scalar_energy(const GridDomain& grid, const DofMap& map,
                                   const ScalarModelDef& def, const FacetSet* gamma,
                                   const std::vector<double>& u) {
  const int dim = grid.dim();
  const double cell_vol = std::pow(grid.h(), dim);
  double e = 0;

  if (def.options.include_local) {
    for (int c : grid.cells_with(Label::Local))
      e += local_cell_energy(grid, map, u, c,
                             eval_coefficient(def.local_coeff, grid.cell_center(c), Label::Local));
  }

  // ordered double sum over every cell pair in the index set
  const int total = grid.cell_count();
  for (int x = 0; x < total; ++x) {
    const Label lx = grid.label(x);
    for (int y = 0; y < total; ++y) {
      if (y == x) continue;
      const Label ly = grid.label(y);
      if (!in_index_set(def.mode, lx, ly)) continue;
      const bool has_ext = lx == Label::Exterior || ly == Label::Exterior;
      const bool has_loc = lx == Label::Local || ly == Label::Local;
      if (has_ext && !def.options.include_exterior) continue;
      if (has_loc && !has_ext && !def.options.include_coupling) continue;
      const Point px = grid.cell_center(x), py = grid.cell_center(y);
      const Point z{px[0] - py[0], px[1] - py[1]};
      double jv = eval_kernel(def.kernel, z, dim);
      if (jv == 0.0) continue;
      jv *= eval_coefficient_pair(def.kernel.coefficient, px, py);
      const double ux = field_at_cell(grid, map, u, x, 0, def.dirichlet);
      const double uy = field_at_cell(grid, map, u, y, 0, def.dirichlet);
      e += 0.5 * jv * (uy - ux) * (uy - ux) * cell_vol * cell_vol;
    }
  }

  if (def.use_gamma && def.options.include_gamma && gamma != nullptr) {
    for (const Facet& f : gamma->facets) {
      const TraceStencil t = facet_trace(grid, map, f);
      double uz = 0;
      for (int k = 0; k < t.count; ++k) uz += t.weight[k] * u[map.dof(t.slot[k], 0)];
      for (int c : grid.cells_with(Label::Nonlocal)) {
        const double g = eval_surface_kernel(def.gkernel, f.center, grid.cell_center(c));
        if (g == 0.0) continue;
        const double uc = u[map.dof(map.cell_slot[c], 0)];
        e += 0.5 * g * (uc - uz) * (uc - uz) * f.measure * cell_vol;
      }
    }
  }

  const std::vector<double> mass = lumped_mass(grid, map);
  for (int slot = 0; slot < map.entity_count(); ++slot)
    e -= eval_source(def.source, map.entities[slot].coord, dim) * mass[slot] * u[slot];
  return e;
}

// full elastic model energy by direct summation
inline double direct_elastic_energy(const GridDomain& grid, const DofMap& map,
                                    const ElasticModelDef& def, const FacetSet* gamma,
                                    const std::vector<double>& u) {
  const int dim = grid.dim();
  const double cell_vol = std::pow(grid.h(), dim);
  const double h = grid.h();
  const ExteriorDatum zero{};
  double e = 0;

  if (def.options.include_local) {
    const double gp[3] = {0.5 * (1 - std::sqrt(3.0 / 5.0)), 0.5, 0.5 * (1 + std::sqrt(3.0 / 5.0))};
    const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    for (int c : grid.cells_with(Label::Local)) {
      const auto [ix, iy] = grid.cell_coords(c);
      auto vval = [&](int ox, int oy, int comp) {
        const int slot = map.vertex_slot[grid.vertex_index(ix + ox, dim > 1 ? iy + oy : 0)];
        return slot >= 0 ? u[map.dof(slot, comp)] : 0.0;
      };
      if (dim == 1) {
        const double du = (vval(1, 0, 0) - vval(0, 0, 0)) / h;
        e += (def.params.mu + 0.5 * def.params.lambda) * du * du * h;
        continue;
      }
      for (int qa = 0; qa < 3; ++qa) {
        for (int qb = 0; qb < 3; ++qb) {
          const double xi = gp[qa], eta = gp[qb], w = gw[qa] * gw[qb] * h * h;
          auto grad = [&](int comp, int axis) {
            const double v00 = vval(0, 0, comp), v10 = vval(1, 0, comp);
            const double v01 = vval(0, 1, comp), v11 = vval(1, 1, comp);
            if (axis == 0) return ((v10 - v00) * (1 - eta) + (v11 - v01) * eta) / h;
            return ((v01 - v00) * (1 - xi) + (v11 - v10) * xi) / h;
          };
          const double e11 = grad(0, 0), e22 = grad(1, 1);
          const double e12 = 0.5 * (grad(0, 1) + grad(1, 0));
          const double div = e11 + e22;
          e += (def.params.mu * (e11 * e11 + e22 * e22 + 2 * e12 * e12) +
                0.5 * def.params.lambda * div * div) *
               w;
        }
      }
    }
  }

  const int total = grid.cell_count();
  for (int x = 0; x < total; ++x) {
    const Label lx = grid.label(x);
    for (int y = 0; y < total; ++y) {
      if (y == x) continue;
      const Label ly = grid.label(y);
      if (!in_index_set(def.mode, lx, ly)) continue;
      const bool has_ext = lx == Label::Exterior || ly == Label::Exterior;
      const bool has_loc = lx == Label::Local || ly == Label::Local;
      if (has_ext && !def.options.include_exterior) continue;
      if (has_loc && !has_ext && !def.options.include_coupling) continue;
      const Point px = grid.cell_center(x), py = grid.cell_center(y);
      const Point z{px[0] - py[0], px[1] - py[1]};
      double jv = eval_kernel(def.kernel, z, dim);
      if (jv == 0.0) continue;
      jv *= eval_coefficient_pair(def.kernel.coefficient, px, py);
      double bond = 0;
      for (int comp = 0; comp < dim; ++comp) {
        const double ux = field_at_cell(grid, map, u, x, comp, zero);
        const double uy = field_at_cell(grid, map, u, y, comp, zero);
        bond += z[comp] * (ux - uy);  // (x-y).(U(x)-U(y))
      }
      e += 0.5 * jv * bond * bond * cell_vol * cell_vol;
    }
  }

  if (def.use_gamma && def.options.include_gamma && gamma != nullptr) {
    for (const Facet& f : gamma->facets) {
      const TraceStencil t = facet_trace(grid, map, f);
      for (int c : grid.cells_with(Label::Nonlocal)) {
        const Point pc = grid.cell_center(c);
        const double g = eval_surface_kernel(def.gkernel, f.center, pc);
        if (g == 0.0) continue;
        double bond = 0;
        for (int comp = 0; comp < dim; ++comp) {
          double uz = 0;
          for (int k = 0; k < t.count; ++k) uz += t.weight[k] * u[map.dof(t.slot[k], comp)];
          const double uc = u[map.dof(map.cell_slot[c], comp)];
          bond += (pc[comp] - f.center[comp]) * (uc - uz);
        }
        e += 0.5 * g * bond * bond * f.measure * cell_vol;
      }
    }
  }

  const std::vector<double> mass = lumped_mass(grid, map);
  for (int slot = 0; slot < map.entity_count(); ++slot)
    for (int comp = 0; comp < dim; ++comp)
      e -= eval_force(def.force, map.entities[slot].coord, dim, comp) * mass[map.dof(slot, comp)] *
           u[map.dof(slot, comp)];
  return e;
}

// brute-force delta components: transitive closure over pairwise distances
inline int brute_force_component_count(const std::vector<Point>& pts, double delta) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (distance(pts[i], pts[j]) < delta && comp[j] != comp[i]) {
          const int lo = std::min(comp[i], comp[j]);
          comp[i] = comp[j] = lo;
          changed = true;
        }
  }
  std::vector<int> vals = comp;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return static_cast<int>(vals.size());
}

inline std::vector<double> random_vector(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace lnc::test
