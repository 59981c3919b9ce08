#include "lnc/scalar_models.hpp"

#include <cmath>
#include <stdexcept>

#include "pair_loop.hpp"

namespace lnc {

namespace {

// 2x2 Gauss abscissae on the unit interval
constexpr double kGaussLo = 0.5 - 0.28867513459481287;
constexpr double kGaussHi = 0.5 + 0.28867513459481287;

// gradients of the bilinear shape functions at (xi, eta), corner order
// x-fastest: (0,0) (1,0) (0,1) (1,1)
void bilinear_gradients(double xi, double eta, double dxi[4], double deta[4]) {
  dxi[0] = -(1 - eta); dxi[1] = (1 - eta); dxi[2] = -eta; dxi[3] = eta;
  deta[0] = -(1 - xi); deta[1] = -xi; deta[2] = (1 - xi); deta[3] = xi;
}

// linear terms of u(y)-u(x) for one pair side; sign +1 for the y side,
// -1 for the x side; exterior sides contribute to the constant instead
struct PairFunctional {
  LinTerm terms[10];
  int count = 0;
  double constant = 0;

  void add_side(const GridDomain& grid, const DofMap& map, int cell, Label label, double sign,
                const ExteriorDatum& datum) {
    if (label == Label::Nonlocal) {
      terms[count++] = {map.dof(map.cell_slot[cell], 0), sign};
    } else if (label == Label::Local) {
      const TraceStencil t = cell_trace(grid, map, cell);
      for (int k = 0; k < t.count; ++k) terms[count++] = {map.dof(t.slot[k], 0), sign * t.weight[k]};
    } else {
      constant += sign * datum.eval(grid.cell_center(cell));
    }
  }
};

}  // namespace

bool in_index_set(NonlocalMode mode, Label x, Label y) {
  switch (mode) {
    case NonlocalMode::Source: return x == Label::Nonlocal;
    case NonlocalMode::SourceFull: return x != Label::Local;
    case NonlocalMode::Flux: return x == Label::Nonlocal && y != Label::Local;
    case NonlocalMode::SourceInterior: return x == Label::Nonlocal && y != Label::Exterior;
  }
  return false;
}

bool model_is_elastic(ModelKind k) {
  return k == ModelKind::ElasticSource || k == ModelKind::ElasticFlux;
}

bool model_uses_gamma(ModelKind k) {
  return k == ModelKind::ScalarFlux || k == ModelKind::ElasticFlux;
}

NonlocalMode model_mode(ModelKind k) {
  switch (k) {
    case ModelKind::ScalarSourceFull: return NonlocalMode::SourceFull;
    case ModelKind::ScalarFlux:
    case ModelKind::ElasticFlux: return NonlocalMode::Flux;
    case ModelKind::Nonlinear: return NonlocalMode::SourceInterior;
    default: return NonlocalMode::Source;
  }
}

void assemble_local_stiffness(const GridDomain& grid, const DofMap& map,
                              const Coefficient& a_coeff, SystemAssembler& out) {
  const auto& local = grid.cells_with(Label::Local);
  if (local.empty()) throw std::invalid_argument("assemble_local_stiffness: no local cells");
  if (map.vertex_entity_count() == 0)
    throw std::invalid_argument("assemble_local_stiffness: no active vertex unknowns");

  const double h = grid.h();
  for (int c : local) {
    const double a = eval_coefficient(a_coeff, grid.cell_center(c), Label::Local);
    int slots[4];
    cell_corner_slots(grid, map, c, slots);

    if (grid.dim() == 1) {
      // integral over the cell of a*|u'|^2/2 = (a/2h)*(u_r - u_l)^2
      LinTerm t[2];
      int n = 0;
      if (slots[1] >= 0) t[n++] = {map.dof(slots[1], 0), 1.0};
      if (slots[0] >= 0) t[n++] = {map.dof(slots[0], 0), -1.0};
      out.add_square(0.5 * a / h, t, n);
      continue;
    }

    // 2x2 Gauss integrates the bilinear gradient squares exactly
    const double wq = 0.25 * h * h;
    for (double eta : {kGaussLo, kGaussHi}) {
      for (double xi : {kGaussLo, kGaussHi}) {
        double dxi[4], deta[4];
        bilinear_gradients(xi, eta, dxi, deta);
        for (int axis = 0; axis < 2; ++axis) {
          LinTerm t[4];
          int n = 0;
          for (int v = 0; v < 4; ++v) {
            if (slots[v] < 0) continue;
            const double g = (axis == 0 ? dxi[v] : deta[v]) / h;
            if (g != 0.0) t[n++] = {map.dof(slots[v], 0), g};
          }
          out.add_square(0.5 * a * wq, t, n);
        }
      }
    }
  }
}

void assemble_nonlocal(const GridDomain& grid, const DofMap& map, const KernelSpec& J,
                       NonlocalMode mode, const AssemblyOptions& opt,
                       const ExteriorDatum& datum, SystemAssembler& out) {
  const double hw = std::pow(grid.h(), 2 * grid.dim());
  detail::for_each_kernel_pair(grid, J, mode, opt, [&](const detail::PairInfo& p) {
    if (p.label_a == Label::Exterior && p.label_b == Label::Exterior && datum.homogeneous())
      return;  // constant-only term vanishes for homogeneous data
    PairFunctional f;
    f.add_side(grid, map, p.cell_b, p.label_b, 1.0, datum);
    f.add_side(grid, map, p.cell_a, p.label_a, -1.0, datum);
    out.add_square(0.5 * p.multiplicity * p.j_value * hw, f.terms, f.count, f.constant);
  });
}

void assemble_gamma_coupling(const GridDomain& grid, const FacetSet& gamma, const DofMap& map,
                             const SurfaceKernelSpec& G, SystemAssembler& out) {
  const double cell_vol = std::pow(grid.h(), grid.dim());
  for (const Facet& facet : gamma.facets) {
    const TraceStencil trace = facet_trace(grid, map, facet);
    for (int c : grid.cells_with(Label::Nonlocal)) {
      const double g = eval_surface_kernel(G, facet.center, grid.cell_center(c));
      if (g == 0.0) continue;
      // (u(x) - u(z))^2 with x the cell and z the facet trace; a facet with
      // all vertices eliminated is assembled against the datum value 0
      LinTerm t[5];
      int n = 0;
      t[n++] = {map.dof(map.cell_slot[c], 0), 1.0};
      for (int k = 0; k < trace.count; ++k) t[n++] = {map.dof(trace.slot[k], 0), -trace.weight[k]};
      out.add_square(0.5 * g * facet.measure * cell_vol, t, n);
    }
  }
}

void assemble_load(const GridDomain& grid, const DofMap& map, const ScalarPreset& f,
                   SystemAssembler& out) {
  const std::vector<double> mass = lumped_mass(grid, map);
  for (int slot = 0; slot < map.entity_count(); ++slot) {
    const int dof = map.dof(slot, 0);
    out.add_load(dof, eval_source(f, map.entities[slot].coord, grid.dim()) * mass[dof]);
  }
}

QuadraticSystem assemble_scalar_model(const GridDomain& grid, const DofMap& map,
                                      const ScalarModelDef& def, const FacetSet* gamma) {
  SystemAssembler asmb(map);
  if (def.options.include_local && !grid.cells_with(Label::Local).empty())
    assemble_local_stiffness(grid, map, def.local_coeff, asmb);
  assemble_nonlocal(grid, map, def.kernel, def.mode, def.options, def.dirichlet, asmb);
  if (def.use_gamma && def.options.include_gamma) {
    if (gamma == nullptr || gamma->empty())
      throw std::invalid_argument("assemble_scalar_model: flux model needs a nonempty gamma");
    assemble_gamma_coupling(grid, *gamma, map, def.gkernel, asmb);
  }
  assemble_load(grid, map, def.source, asmb);
  return asmb.finish(grid);
}

QuadraticSystem apply_exterior_shift(const GridDomain& grid, const DofMap& map,
                                     const ScalarModelDef& def, const FacetSet* gamma,
                                     const ExteriorDatum& g_d) {
  ScalarModelDef shifted = def;
  shifted.dirichlet = g_d;
  return assemble_scalar_model(grid, map, shifted, gamma);
}

double eval_source(const ScalarPreset& f, const Point& x, int dim) {
  switch (f.kind) {
    case ScalarPreset::Kind::Constant: return f.value;
    case ScalarPreset::Kind::GaussianBump: {
      const double d = distance(x, f.center);
      return f.value * std::exp(-(d * d) / (f.width * f.width));
    }
    case ScalarPreset::Kind::SeparableSine: {
      double v = f.value * std::sin(f.freq[0] * M_PI * x[0]);
      if (dim > 1) v *= std::sin(f.freq[1] * M_PI * x[1]);
      return v;
    }
  }
  return 0.0;
}

double eval_force(const VectorPreset& f, const Point& x, int dim, int comp) {
  ScalarPreset shape = f.shape;
  shape.value = f.amp[comp];
  return eval_source(shape, x, dim);
}

}  // namespace lnc
