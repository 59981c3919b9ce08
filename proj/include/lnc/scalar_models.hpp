#pragma once

#include "lnc/kernels.hpp"
#include "lnc/presets.hpp"
#include "lnc/system.hpp"

namespace lnc {

/// Ordered index set of the nonlocal double integral.
///   Source:        Omega_nl x R^N                (source-coupled energy)
///   SourceFull:    (R^N \ Omega_l) x R^N         (full variant)
///   Flux:          Omega_nl x (R^N \ Omega_l)    (flux-coupled energy)
///   SourceInterior:Omega_nl x Omega              (nonlinear r-term)
enum class NonlocalMode { Source, SourceFull, Flux, SourceInterior };

bool in_index_set(NonlocalMode mode, Label x, Label y);

/// Term toggles. The defaults assemble the full model; tests switch parts
/// off to expose the structural properties of individual operators
/// (pure nonlocal blocks, unconstrained systems).
struct AssemblyOptions {
  bool include_local = true;
  bool include_coupling = true;   // pairs joining the nonlocal cells to the local field
  bool include_exterior = true;   // pairs with exterior partners (absorption)
  bool include_gamma = true;
  bool eliminate_boundary = true;
};

enum class ModelKind {
  ScalarSource,
  ScalarSourceFull,
  ScalarFlux,
  ElasticSource,
  ElasticFlux,
  Nonlinear
};

bool model_is_elastic(ModelKind k);
bool model_uses_gamma(ModelKind k);
NonlocalMode model_mode(ModelKind k);

struct ScalarModelDef {
  NonlocalMode mode = NonlocalMode::Source;
  KernelSpec kernel;
  SurfaceKernelSpec gkernel;
  bool use_gamma = false;
  Coefficient local_coeff;
  ScalarPreset source;
  ExteriorDatum dirichlet;
  AssemblyOptions options;
};

// individual contributions; all operate on one accumulating assembler
void assemble_local_stiffness(const GridDomain& grid, const DofMap& map,
                              const Coefficient& a_coeff, SystemAssembler& out);
void assemble_nonlocal(const GridDomain& grid, const DofMap& map, const KernelSpec& J,
                       NonlocalMode mode, const AssemblyOptions& opt,
                       const ExteriorDatum& datum, SystemAssembler& out);
void assemble_gamma_coupling(const GridDomain& grid, const FacetSet& gamma, const DofMap& map,
                             const SurfaceKernelSpec& G, SystemAssembler& out);
void assemble_load(const GridDomain& grid, const DofMap& map, const ScalarPreset& f,
                   SystemAssembler& out);

/// Full model assembly: local + nonlocal + (optional) gamma + load, with
/// the exterior datum folded into b and the energy offset.
QuadraticSystem assemble_scalar_model(const GridDomain& grid, const DofMap& map,
                                      const ScalarModelDef& def, const FacetSet* gamma);

/// Re-assemble with the given exterior datum. The solution of the returned
/// system is w = u - g (g extended by zero on the closure of Omega); the
/// matrix is unchanged, b gains the cross terms and offset the squares.
QuadraticSystem apply_exterior_shift(const GridDomain& grid, const DofMap& map,
                                     const ScalarModelDef& def, const FacetSet* gamma,
                                     const ExteriorDatum& g_d);

}  // namespace lnc
