#include <doctest.h>

#include <stdexcept>

#include "lnc/elastic_models.hpp"
#include "lnc/verify.hpp"
#include "support/oracles.hpp"

using namespace lnc;

namespace {

std::vector<double> eval_on_dofs(const DofMap& map,
                                 const std::function<double(const Point&, int)>& f) {
  std::vector<double> u(map.size(), 0.0);
  for (int slot = 0; slot < map.entity_count(); ++slot)
    for (int comp = 0; comp < map.block; ++comp)
      u[map.dof(slot, comp)] = f(map.entities[slot].coord, comp);
  return u;
}

}  // namespace

TEST_CASE("elastic local energy on one unit cell") {
  const GridDomain g = build_grid(
      2, {{{0, 1}, {0, 1}}}, 1.0, [](const Point&) { return Label::Local; }, 0);
  const DofMap map = build_dofmap(g, 2, false);
  REQUIRE(map.size() == 8);
  ElasticParams params;
  params.mu = 1.3;
  params.lambda = 0.7;
  SystemAssembler asmb(map);
  assemble_elastic_local(g, map, params, asmb);
  const QuadraticSystem sys = asmb.finish(g);

  // U = (x, 0): strain diag(1,0), div = 1 -> density mu + lambda/2
  const auto stretch = eval_on_dofs(map, [](const Point& x, int c) { return c == 0 ? x[0] : 0.0; });
  CHECK(0.5 * lnc::dot(stretch, sys.A.multiply(stretch)) ==
        doctest::Approx(params.mu + 0.5 * params.lambda).epsilon(1e-13));

  // translations and the linearized rotation (-y, x) carry no energy
  const auto translation = eval_on_dofs(map, [](const Point&, int c) { return c == 0 ? 1.0 : 2.0; });
  CHECK(0.5 * lnc::dot(translation, sys.A.multiply(translation)) ==
        doctest::Approx(0.0).epsilon(1e-14));
  const auto rotation =
      eval_on_dofs(map, [](const Point& x, int c) { return c == 0 ? -x[1] : x[0]; });
  CHECK(std::abs(0.5 * lnc::dot(rotation, sys.A.multiply(rotation))) < 1e-14);
}

TEST_CASE("bond projector kills transverse differences") {
  // two nonlocal cells along the x axis; a displacement difference purely
  // in y is orthogonal to the bond
  const GridDomain g = build_grid(
      2, {{{0, 1}, {0, 0.5}}}, 0.5, [](const Point&) { return Label::Nonlocal; }, 1);
  const DofMap map = build_dofmap(g, 2);
  REQUIRE(map.entity_count() == 2);
  KernelSpec J;
  J.rho = 0.6;
  AssemblyOptions opt;
  opt.include_exterior = false;
  SystemAssembler asmb(map);
  assemble_bond(g, map, J, NonlocalMode::Source, opt, asmb);
  const QuadraticSystem sys = asmb.finish(g);

  std::vector<double> transverse(map.size(), 0.0);
  transverse[map.dof(1, 1)] = 1.0;  // y-displacement on the second cell
  CHECK(0.5 * lnc::dot(transverse, sys.A.multiply(transverse)) == doctest::Approx(0.0));

  // aligned difference: energy 1/2 * J * d^2 * (u2-u1)^2 * h^(2N) * 2
  std::vector<double> aligned(map.size(), 0.0);
  aligned[map.dof(1, 0)] = 1.0;
  const double d = 0.5, hw = std::pow(0.5, 4);
  CHECK(0.5 * lnc::dot(aligned, sys.A.multiply(aligned)) ==
        doctest::Approx(0.5 * 1.0 * d * d * 1.0 * hw * 2.0).epsilon(1e-13));
}

TEST_CASE("1D bond pair energy by hand") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.5, [](const Point&) { return Label::Nonlocal; }, 2);
  const DofMap map = build_dofmap(g, 1);
  KernelSpec J;
  J.rho = 1.0;
  AssemblyOptions opt;
  opt.include_exterior = false;
  SystemAssembler asmb(map);
  assemble_bond(g, map, J, NonlocalMode::Source, opt, asmb);
  const QuadraticSystem sys = asmb.finish(g);
  std::vector<double> u{0.0, 1.0};
  const double d = 0.5, h2 = 0.25;
  CHECK(0.5 * lnc::dot(u, sys.A.multiply(u)) ==
        doctest::Approx(0.5 * d * d * 1.0 * h2 * 2.0).epsilon(1e-13));
}

TEST_CASE("rigid motions annihilate the unconstrained coupled system") {
  const GridDomain g = build_grid(
      2, {{{0, 1}, {0, 1}}}, 0.125,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 0);
  const DofMap map = build_dofmap(g, 2, false);
  ElasticModelDef def;
  def.mode = NonlocalMode::Source;
  def.kernel.rho = 0.3;
  def.options.include_exterior = false;
  def.options.eliminate_boundary = false;
  const QuadraticSystem sys = assemble_elastic_model(g, map, def, nullptr);

  const RigidMotionBasis basis = rigid_motion_basis(map);
  REQUIRE(basis.fields.size() == 3);
  for (const auto& r : basis.fields) {
    const auto Ar = sys.A.multiply(r);
    double worst = 0;
    for (double v : Ar) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 1e-10 * sys.A.max_abs());
  }

  const auto rep = nullspace_characterization(sys, basis.fields, 1e-10, EigMethod::Dense);
  CHECK(rep.dimension == 3);
  CHECK(rep.matched);
}

TEST_CASE("bond gamma coupling: aligned pair expands by hand") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.25,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 0);
  const DofMap map = build_dofmap(g, 1, false);
  const FacetSet gamma = extract_gamma(g);
  REQUIRE(gamma.size() == 1);
  SurfaceKernelSpec G;
  G.rho = 0.2;  // reaches the first nonlocal cell at 0.625 only
  G.c = 3.0;
  SystemAssembler asmb(map);
  assemble_bond_gamma(g, gamma, map, G, asmb);
  const QuadraticSystem sys = asmb.finish(g);

  // u = 1 on that cell, 0 elsewhere: energy 1/2 G d^2 * measure * h
  std::vector<double> u(map.size(), 0.0);
  const int cell = g.cells_with(Label::Nonlocal)[0];
  u[map.dof(map.cell_slot[cell], 0)] = 1.0;
  const double d = 0.125;
  CHECK(0.5 * lnc::dot(u, sys.A.multiply(u)) ==
        doctest::Approx(0.5 * 3.0 * d * d * 1.0 * 0.25).epsilon(1e-13));

  // zero kernel gives nothing
  SurfaceKernelSpec zero;
  zero.c = 0.0;
  SystemAssembler z(map);
  assemble_bond_gamma(g, gamma, map, zero, z);
  CHECK(z.finish(g).A.nonzeros() == 0);
}

TEST_CASE("2D bond gamma: transverse difference carries no energy") {
  const GridDomain g = build_grid(
      2, {{{0, 1}, {0, 0.5}}}, 0.5,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 0);
  const DofMap map = build_dofmap(g, 2, false);
  const FacetSet gamma = extract_gamma(g);
  REQUIRE(gamma.size() == 1);
  SurfaceKernelSpec G;
  G.rho = 0.3;
  SystemAssembler asmb(map);
  assemble_bond_gamma(g, gamma, map, G, asmb);
  const QuadraticSystem sys = asmb.finish(g);
  // facet center (0.5, 0.25), cell center (0.75, 0.25): bond along x
  std::vector<double> u(map.size(), 0.0);
  const int cell = g.cells_with(Label::Nonlocal)[0];
  u[map.dof(map.cell_slot[cell], 1)] = 1.0;
  CHECK(0.5 * lnc::dot(u, sys.A.multiply(u)) == doctest::Approx(0.0));
}

TEST_CASE("rigid motion basis counts") {
  std::vector<std::array<double, 3>> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.3, 0.7, 0.2}};
  CHECK(rigid_motion_fields(pts, 1).size() == 1);
  CHECK(rigid_motion_fields(pts, 2).size() == 3);
  CHECK(rigid_motion_fields(pts, 3).size() == 6);

  // independence on a generic point set: Gram matrix is nonsingular
  const auto fields = rigid_motion_fields(pts, 3);
  const int m = static_cast<int>(fields.size());
  std::vector<double> gram(m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram[i * m + j] = lnc::dot(fields[i], fields[j]);
  // crude determinant via Gaussian elimination
  double det = 1.0;
  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int r = k + 1; r < m; ++r)
      if (std::abs(gram[r * m + k]) > std::abs(gram[piv * m + k])) piv = r;
    for (int c = 0; c < m; ++c) std::swap(gram[k * m + c], gram[piv * m + c]);
    if (piv != k) det = -det;
    det *= gram[k * m + k];
    REQUIRE(gram[k * m + k] != 0.0);
    for (int r = k + 1; r < m; ++r) {
      const double f = gram[r * m + k] / gram[k * m + k];
      for (int c = k; c < m; ++c) gram[r * m + c] -= f * gram[k * m + c];
    }
  }
  CHECK(std::abs(det) > 1e-6);
}

TEST_CASE("elastic energy identity against direct summation") {
  const GridDomain g = build_grid(
      2, {{{0, 1}, {0, 1}}}, 0.25,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 2);
  const DofMap map = build_dofmap(g, 2);
  const FacetSet gamma = extract_gamma(g);
  for (NonlocalMode mode : {NonlocalMode::Source, NonlocalMode::Flux}) {
    ElasticModelDef def;
    def.mode = mode;
    def.kernel.rho = 0.5;
    def.use_gamma = mode == NonlocalMode::Flux;
    def.gkernel.rho = 0.5;
    def.force.amp = {1.0, -0.5};
    const QuadraticSystem sys = assemble_elastic_model(g, map, def, &gamma);
    CHECK(sys.A.symmetry_error() == 0.0);
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> u = lnc::test::random_vector(sys.size(), 900 + trial);
      CHECK(sys.energy(u) ==
            doctest::Approx(lnc::test::direct_elastic_energy(g, map, def, &gamma, u))
                .epsilon(1e-12));
    }
  }
}
