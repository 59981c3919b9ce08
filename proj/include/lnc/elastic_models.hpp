#pragma once

#include "lnc/scalar_models.hpp"

namespace lnc {

struct ElasticParams {
  double mu = 1.0;
  double lambda = 1.0;  // both Lame coefficients assumed positive
};

/// Translations and rotation generators evaluated at the DOF coordinates;
/// dim*(dim+1)/2 fields, each of the form M x + p with skew M.
struct RigidMotionBasis {
  std::vector<std::vector<double>> fields;
};

struct ElasticModelDef {
  NonlocalMode mode = NonlocalMode::Source;  // Source or Flux
  KernelSpec kernel;
  SurfaceKernelSpec gkernel;
  bool use_gamma = false;
  ElasticParams params;
  VectorPreset force;
  AssemblyOptions options;
};

// quadratic strain energy mu*|E(U)|^2 + lambda/2*(div U)^2, exact
// integration of the multilinear element
void assemble_elastic_local(const GridDomain& grid, const DofMap& map, const ElasticParams& params,
                            SystemAssembler& out);
// bond term J(x-y) |(x-y).(U(y)-U(x))|^2 over the mode's index set
void assemble_bond(const GridDomain& grid, const DofMap& map, const KernelSpec& J,
                   NonlocalMode mode, const AssemblyOptions& opt, SystemAssembler& out);
// surface bond term G(x,y) |(x-y).(U(y)-U(x))|^2 over Omega_nl x Gamma
void assemble_bond_gamma(const GridDomain& grid, const FacetSet& gamma, const DofMap& map,
                         const SurfaceKernelSpec& G, SystemAssembler& out);
void assemble_vector_load(const GridDomain& grid, const DofMap& map, const VectorPreset& force,
                          SystemAssembler& out);

QuadraticSystem assemble_elastic_model(const GridDomain& grid, const DofMap& map,
                                       const ElasticModelDef& def, const FacetSet* gamma);

RigidMotionBasis rigid_motion_basis(const DofMap& map);
// lower-level builder used for the dim=3 case, where no grid exists
std::vector<std::vector<double>> rigid_motion_fields(const std::vector<std::array<double, 3>>& coords,
                                                     int dim);

}  // namespace lnc
