#include "lnc/elastic_models.hpp"

#include <cmath>
#include <stdexcept>

#include "pair_loop.hpp"

namespace lnc {

namespace {

constexpr double kGaussLo = 0.5 - 0.28867513459481287;
constexpr double kGaussHi = 0.5 + 0.28867513459481287;

void bilinear_gradients(double xi, double eta, double dxi[4], double deta[4]) {
  dxi[0] = -(1 - eta); dxi[1] = (1 - eta); dxi[2] = -eta; dxi[3] = eta;
  deta[0] = -(1 - xi); deta[1] = -xi; deta[2] = (1 - xi); deta[3] = xi;
}

// bond functional (x-y).(U(b)-U(a)) accumulated over block components
struct BondFunctional {
  LinTerm terms[12];
  int count = 0;
  double constant = 0;

  void add_side(const GridDomain& grid, const DofMap& map, int cell, Label label, double sign,
                const Point& dir) {
    const int block = map.block;
    if (label == Label::Nonlocal) {
      const int slot = map.cell_slot[cell];
      for (int c = 0; c < block; ++c)
        if (dir[c] != 0.0) terms[count++] = {map.dof(slot, c), sign * dir[c]};
    } else if (label == Label::Local) {
      const TraceStencil t = cell_trace(grid, map, cell);
      for (int k = 0; k < t.count; ++k)
        for (int c = 0; c < block; ++c)
          if (dir[c] != 0.0) terms[count++] = {map.dof(t.slot[k], c), sign * t.weight[k] * dir[c]};
    }
    // exterior side: homogeneous datum, contributes nothing
  }
};

}  // namespace

void assemble_elastic_local(const GridDomain& grid, const DofMap& map, const ElasticParams& params,
                            SystemAssembler& out) {
  const auto& local = grid.cells_with(Label::Local);
  if (local.empty()) return;
  const double h = grid.h();

  if (grid.dim() == 1) {
    // strain = u', |E|^2 and div^2 coincide: (mu + lambda/2) * (du/h)^2 * h
    for (int c : local) {
      int slots[4];
      cell_corner_slots(grid, map, c, slots);
      LinTerm t[2];
      int n = 0;
      if (slots[1] >= 0) t[n++] = {map.dof(slots[1], 0), 1.0};
      if (slots[0] >= 0) t[n++] = {map.dof(slots[0], 0), -1.0};
      out.add_square((params.mu + 0.5 * params.lambda) / h, t, n);
    }
    return;
  }

  const double wq = 0.25 * h * h;
  for (int c : local) {
    int slots[4];
    cell_corner_slots(grid, map, c, slots);
    for (double eta : {kGaussLo, kGaussHi}) {
      for (double xi : {kGaussLo, kGaussHi}) {
        double dxi[4], deta[4];
        bilinear_gradients(xi, eta, dxi, deta);
        // linear functionals of the strain entries at the Gauss point
        LinTerm e11[4], e22[4], e12[8], div[8];
        int n11 = 0, n22 = 0, n12 = 0, ndiv = 0;
        for (int v = 0; v < 4; ++v) {
          if (slots[v] < 0) continue;
          const double gx = dxi[v] / h, gy = deta[v] / h;
          const int d0 = map.dof(slots[v], 0), d1 = map.dof(slots[v], 1);
          if (gx != 0.0) {
            e11[n11++] = {d0, gx};          // d(U_x)/dx
            div[ndiv++] = {d0, gx};
            e12[n12++] = {d1, 0.5 * gx};    // d(U_y)/dx
          }
          if (gy != 0.0) {
            e22[n22++] = {d1, gy};          // d(U_y)/dy
            div[ndiv++] = {d1, gy};
            e12[n12++] = {d0, 0.5 * gy};    // d(U_x)/dy
          }
        }
        // mu*(E11^2 + E22^2 + 2*E12^2) + lambda/2*(div U)^2
        out.add_square(params.mu * wq, e11, n11);
        out.add_square(params.mu * wq, e22, n22);
        out.add_square(2.0 * params.mu * wq, e12, n12);
        out.add_square(0.5 * params.lambda * wq, div, ndiv);
      }
    }
  }
}

void assemble_bond(const GridDomain& grid, const DofMap& map, const KernelSpec& J,
                   NonlocalMode mode, const AssemblyOptions& opt, SystemAssembler& out) {
  const double hw = std::pow(grid.h(), 2 * grid.dim());
  detail::for_each_kernel_pair(grid, J, mode, opt, [&](const detail::PairInfo& p) {
    if (p.label_a == Label::Exterior && p.label_b == Label::Exterior) return;
    const Point pa = grid.cell_center(p.cell_a);
    const Point pb = grid.cell_center(p.cell_b);
    const Point dir{pa[0] - pb[0], pa[1] - pb[1]};
    BondFunctional f;
    f.add_side(grid, map, p.cell_b, p.label_b, 1.0, dir);
    f.add_side(grid, map, p.cell_a, p.label_a, -1.0, dir);
    out.add_square(0.5 * p.multiplicity * p.j_value * hw, f.terms, f.count, f.constant);
  });
}

void assemble_bond_gamma(const GridDomain& grid, const FacetSet& gamma, const DofMap& map,
                         const SurfaceKernelSpec& G, SystemAssembler& out) {
  const double cell_vol = std::pow(grid.h(), grid.dim());
  const int block = map.block;
  for (const Facet& facet : gamma.facets) {
    const TraceStencil trace = facet_trace(grid, map, facet);
    for (int c : grid.cells_with(Label::Nonlocal)) {
      const Point pc = grid.cell_center(c);
      const double g = eval_surface_kernel(G, facet.center, pc);
      if (g == 0.0) continue;
      const Point dir{pc[0] - facet.center[0], pc[1] - facet.center[1]};
      LinTerm t[12];
      int n = 0;
      const int slot = map.cell_slot[c];
      for (int comp = 0; comp < block; ++comp)
        if (dir[comp] != 0.0) t[n++] = {map.dof(slot, comp), dir[comp]};
      for (int k = 0; k < trace.count; ++k)
        for (int comp = 0; comp < block; ++comp)
          if (dir[comp] != 0.0)
            t[n++] = {map.dof(trace.slot[k], comp), -trace.weight[k] * dir[comp]};
      out.add_square(0.5 * g * facet.measure * cell_vol, t, n);
    }
  }
}

void assemble_vector_load(const GridDomain& grid, const DofMap& map, const VectorPreset& force,
                          SystemAssembler& out) {
  const std::vector<double> mass = lumped_mass(grid, map);
  for (int slot = 0; slot < map.entity_count(); ++slot) {
    for (int comp = 0; comp < map.block; ++comp) {
      const int dof = map.dof(slot, comp);
      out.add_load(dof, eval_force(force, map.entities[slot].coord, grid.dim(), comp) * mass[dof]);
    }
  }
}

QuadraticSystem assemble_elastic_model(const GridDomain& grid, const DofMap& map,
                                       const ElasticModelDef& def, const FacetSet* gamma) {
  if (map.block != grid.dim())
    throw std::invalid_argument("assemble_elastic_model: dofmap block must equal grid dim");
  SystemAssembler asmb(map);
  if (def.options.include_local) assemble_elastic_local(grid, map, def.params, asmb);
  assemble_bond(grid, map, def.kernel, def.mode, def.options, asmb);
  if (def.use_gamma && def.options.include_gamma) {
    if (gamma == nullptr || gamma->empty())
      throw std::invalid_argument("assemble_elastic_model: flux model needs a nonempty gamma");
    assemble_bond_gamma(grid, *gamma, map, def.gkernel, asmb);
  }
  assemble_vector_load(grid, map, def.force, asmb);
  return asmb.finish(grid);
}

std::vector<std::vector<double>> rigid_motion_fields(const std::vector<std::array<double, 3>>& coords,
                                                     int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("rigid_motion_fields: dim must be 1..3");
  const int n = static_cast<int>(coords.size());
  std::vector<std::vector<double>> fields;

  for (int t = 0; t < dim; ++t) {
    std::vector<double> f(static_cast<std::size_t>(n) * dim, 0.0);
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i) * dim + t] = 1.0;
    fields.push_back(std::move(f));
  }
  // one rotation generator per coordinate plane (a,b): U = (-x_b, x_a)
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      std::vector<double> f(static_cast<std::size_t>(n) * dim, 0.0);
      for (int i = 0; i < n; ++i) {
        f[static_cast<std::size_t>(i) * dim + a] = -coords[i][b];
        f[static_cast<std::size_t>(i) * dim + b] = coords[i][a];
      }
      fields.push_back(std::move(f));
    }
  }
  return fields;
}

RigidMotionBasis rigid_motion_basis(const DofMap& map) {
  std::vector<std::array<double, 3>> coords;
  coords.reserve(map.entities.size());
  for (const DofEntity& e : map.entities) coords.push_back({e.coord[0], e.coord[1], 0.0});
  RigidMotionBasis basis;
  basis.fields = rigid_motion_fields(coords, map.block);
  return basis;
}

}  // namespace lnc
