#include <doctest.h>

#include <stdexcept>

#include "lnc/solvers.hpp"
#include "lnc/verify.hpp"
#include "support/oracles.hpp"

using namespace lnc;

namespace {

GridDomain poisson_grid(double h) {
  return build_grid(
      1, {{{0, 1}, {0, 0}}}, h, [](const Point&) { return Label::Local; }, 1);
}

QuadraticSystem poisson_system(const GridDomain& g, const DofMap& map) {
  ScalarModelDef def;
  def.kernel.rho = 0.5 * g.h();  // no nonlocal pairs on an all-local grid
  def.source.kind = ScalarPreset::Kind::SeparableSine;
  def.source.value = M_PI * M_PI;
  def.source.freq = {1.0, 1.0};
  return assemble_scalar_model(g, map, def, nullptr);
}

QuadraticSystem diag_system(std::vector<double> d) {
  const int n = static_cast<int>(d.size());
  DofMap map;
  map.dim = 1;
  map.block = 1;
  map.vertex_slot.assign(2, -1);
  map.cell_slot.assign(1, -1);
  for (int i = 0; i < n; ++i) map.entities.push_back({DofKind::Cell, i, {0.1 * i, 0}});
  SystemAssembler asmb(map);
  for (int i = 0; i < n; ++i) {
    LinTerm t{i, 1.0};
    asmb.add_square(0.5 * d[i], &t, 1);
  }
  GridDomain dummy = build_grid(
      1, {{{0, 1}, {0, 0}}}, 1.0, [](const Point&) { return Label::Nonlocal; }, 0);
  QuadraticSystem sys = asmb.finish(dummy);
  sys.M.assign(n, 1.0);
  return sys;
}

}  // namespace

TEST_CASE("cg solves the identity") {
  QuadraticSystem sys = diag_system({1.0, 1.0, 1.0});
  sys.b = {1.0, 0.0, 0.0};
  auto [u, rep] = minimize_quadratic(sys, SolveSettings{});
  CHECK(rep.converged);
  CHECK(u.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u.values[1] == doctest::Approx(0.0));
}

TEST_CASE("cg recovers a manufactured solution") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.1,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 3);
  const DofMap map = build_dofmap(g, 1);
  ScalarModelDef def;
  def.kernel.rho = 0.25;
  QuadraticSystem sys = assemble_scalar_model(g, map, def, nullptr);
  const std::vector<double> target = lnc::test::random_vector(sys.size(), 4);
  sys.b = sys.A.multiply(target);
  auto [u, rep] = minimize_quadratic(sys, SolveSettings{});
  REQUIRE(rep.converged);
  for (int i = 0; i < sys.size(); ++i)
    CHECK(u.values[i] == doctest::Approx(target[i]).epsilon(1e-7));
}

TEST_CASE("cg energy never increases") {
  const GridDomain g = poisson_grid(1.0 / 64);
  const DofMap map = build_dofmap(g, 1);
  const QuadraticSystem sys = poisson_system(g, map);
  double prev = std::numeric_limits<double>::infinity();
  auto [u, rep] = minimize_quadratic(sys, SolveSettings{}, [&](int, double, double e) {
    CHECK(e <= prev + 1e-13 * std::abs(prev));
    prev = e;
  });
  CHECK(rep.converged);
}

TEST_CASE("pure local Poisson hits the analytic solution at second order") {
  double prev_err = 0;
  int level = 0;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const GridDomain g = poisson_grid(h);
    const DofMap map = build_dofmap(g, 1);
    const QuadraticSystem sys = poisson_system(g, map);
    auto [u, rep] = minimize_quadratic(sys, SolveSettings{});
    REQUIRE(rep.converged);
    double err = 0;
    for (int slot = 0; slot < map.entity_count(); ++slot) {
      const double x = map.entities[slot].coord[0];
      err = std::max(err, std::abs(u.values[slot] - std::sin(M_PI * x)));
    }
    CHECK(err <= 2.0 * h * h);
    if (level > 0) {
      const double rate = std::log2(prev_err / err);
      CHECK(rate > 1.8);
      CHECK(rate < 2.2);
    }
    prev_err = err;
    ++level;
  }
}

TEST_CASE("jacobi preconditioner reaches the same answer") {
  const GridDomain g = poisson_grid(1.0 / 32);
  const DofMap map = build_dofmap(g, 1);
  const QuadraticSystem sys = poisson_system(g, map);
  SolveSettings plain;
  SolveSettings jacobi;
  jacobi.precond = Preconditioner::Jacobi;
  auto [u1, r1] = minimize_quadratic(sys, plain);
  auto [u2, r2] = minimize_quadratic(sys, jacobi);
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  for (int i = 0; i < sys.size(); ++i)
    CHECK(u1.values[i] == doctest::Approx(u2.values[i]).epsilon(1e-8));
}

TEST_CASE("solver reports non-convergence without crashing") {
  QuadraticSystem sys = diag_system({1.0, 1.0});
  // singular system with incompatible load
  SystemAssembler asmb(sys.dofmap);
  LinTerm t[2] = {{0, 1.0}, {1, -1.0}};
  asmb.add_square(0.5, t, 2);
  GridDomain dummy = build_grid(
      1, {{{0, 1}, {0, 0}}}, 1.0, [](const Point&) { return Label::Nonlocal; }, 0);
  QuadraticSystem singular = asmb.finish(dummy);
  singular.M.assign(2, 1.0);
  singular.b = {1.0, 1.0};  // not orthogonal to the constant kernel
  SolveSettings s;
  s.max_iter = 50;
  auto [u, rep] = minimize_quadratic(singular, s);
  CHECK_FALSE(rep.converged);
}

TEST_CASE("coercivity estimate on a diagonal system") {
  const QuadraticSystem sys = diag_system({1.0, 2.0, 3.0});
  EigSettings eig;
  const CoercivityReport rep = coercivity_estimate(sys, eig);
  CHECK(rep.lambda_min == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.residual <= eig.tol);
}

TEST_CASE("coercivity estimate matches the dense oracle on a desk config") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.05,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 4);
  const DofMap map = build_dofmap(g, 1);
  ScalarModelDef def;
  def.kernel.rho = 0.2;
  const QuadraticSystem sys = assemble_scalar_model(g, map, def, nullptr);
  const double dense = dense_lambda_min(sys);
  EigSettings eig;
  eig.tol = 1e-10;
  const CoercivityReport rep = coercivity_estimate(sys, eig);
  CHECK(dense > 0.0);
  CHECK(rep.lambda_min == doctest::Approx(dense).epsilon(1e-6));
}

TEST_CASE("decoupled configuration reports a vanishing eigenvalue") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.05,
      [](const Point& x) {
        if (x[0] < 0.3) return Label::Local;
        if (x[0] > 0.7) return Label::Nonlocal;
        return Label::Exterior;
      },
      4);
  const DofMap map = build_dofmap(g, 1);
  ScalarModelDef def;
  def.kernel.rho = 0.2;
  def.options.include_exterior = false;
  const QuadraticSystem sys = assemble_scalar_model(g, map, def, nullptr);
  std::vector<double> vec;
  const CoercivityReport rep = coercivity_estimate(sys, EigSettings{}, nullptr, &vec);
  CHECK(rep.lambda_min <= 1e-8);
  CHECK(dense_lambda_min(sys) <= 1e-8);
  // the near-null vector concentrates on the decoupled nonlocal block
  double on_cells = 0, on_vertices = 0;
  for (int slot = 0; slot < map.entity_count(); ++slot) {
    const double v = std::abs(vec[slot]);
    if (map.entities[slot].kind == DofKind::Cell) on_cells = std::max(on_cells, v);
    else on_vertices = std::max(on_vertices, v);
  }
  CHECK(on_cells > 100.0 * on_vertices);
}

TEST_CASE("eigen bracketing: estimate below any probe Rayleigh quotient") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.1,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 3);
  const DofMap map = build_dofmap(g, 1);
  ScalarModelDef def;
  def.kernel.rho = 0.25;
  const QuadraticSystem sys = assemble_scalar_model(g, map, def, nullptr);
  const CoercivityReport rep = coercivity_estimate(sys, EigSettings{});
  CHECK(rep.lambda_min >= 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> u = lnc::test::random_vector(sys.size(), 40 + trial);
    const auto Au = sys.A.multiply(u);
    double num = lnc::dot(u, Au), den = 0;
    for (int i = 0; i < sys.size(); ++i) den += u[i] * sys.M[i] * u[i];
    CHECK(rep.lambda_min <= num / den + 1e-10);
  }
}

TEST_CASE("deflation finds the second eigenvalue") {
  const QuadraticSystem sys = diag_system({1.0, 2.0, 3.0});
  std::vector<std::vector<double>> deflate{{1.0, 0.0, 0.0}};
  const CoercivityReport rep = coercivity_estimate(sys, EigSettings{}, &deflate);
  CHECK(rep.lambda_min == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("nonlinear at p=r=2 matches the quadratic solve") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 1.0 / 16,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 4);
  const DofMap map = build_dofmap(g, 1);
  NonlinearDef def;
  def.p = 2.0;
  def.r = 2.0;
  def.kernel.rho = 0.25;
  def.source.value = 1.0;

  const QuadraticSystem sys = assemble_nonlinear_quadratic(g, map, def);
  auto [uq, rq] = minimize_quadratic(sys, SolveSettings{});
  REQUIRE(rq.converged);

  auto [un, rn] = minimize_nonlinear(g, map, def, 1e-12, 200000);
  REQUIRE(rn.converged);

  double diff_m = 0;
  for (int i = 0; i < sys.size(); ++i) {
    const double d = un.values[i] - uq.values[i];
    diff_m += d * sys.M[i] * d;
  }
  CHECK(std::sqrt(diff_m) <= 1e-8);
}

TEST_CASE("nonlinear gradient matches finite differences at p=4") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 1.0 / 12,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 4);
  const DofMap map = build_dofmap(g, 1);
  NonlinearDef def;
  def.p = 4.0;
  def.r = 2.0;
  def.kernel.rho = 0.3;
  def.source.value = 1.0;
  const NonlinearModel model(g, map, def);

  const std::vector<double> u = lnc::test::random_vector(model.size(), 77);
  const double err = gradient_check(model, u, 20, 1e-5);
  CHECK(err <= 1e-6);
}

TEST_CASE("nonlinear descent decreases the energy at every accepted step") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 1.0 / 12,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 3);
  const DofMap map = build_dofmap(g, 1);
  NonlinearDef def;
  def.p = 4.0;
  def.r = 3.0;
  def.kernel.rho = 0.25;
  def.source.value = 2.0;
  std::vector<double> trace;
  auto [u, rep] = minimize_nonlinear(g, map, def, 1e-8, 100000, &trace);
  REQUIRE(rep.converged);
  REQUIRE(trace.size() >= 2);
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] < trace[k - 1]);
}

TEST_CASE("nonlinear zero source gives the zero minimizer") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.125,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 2);
  const DofMap map = build_dofmap(g, 1);
  NonlinearDef def;
  def.p = 3.0;
  def.r = 2.5;
  def.kernel.rho = 0.25;
  auto [u, rep] = minimize_nonlinear(g, map, def, 1e-10, 1000);
  CHECK(rep.converged);
  for (double v : u.values) CHECK(v == 0.0);
}

TEST_CASE("nonlinear rejects out-of-range exponents") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.25,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 1);
  const DofMap map = build_dofmap(g, 1);
  NonlinearDef def;
  def.p = 1.0;
  def.kernel.rho = 0.25;
  CHECK_THROWS_AS(NonlinearModel(g, map, def), std::invalid_argument);
}

TEST_CASE("solves are deterministic across repeated runs") {
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.05,
      [](const Point& x) { return x[0] < 0.5 ? Label::Local : Label::Nonlocal; }, 4);
  const DofMap map = build_dofmap(g, 1);
  ScalarModelDef def;
  def.kernel.rho = 0.2;
  def.source.value = 1.0;
  const QuadraticSystem s1 = assemble_scalar_model(g, map, def, nullptr);
  const QuadraticSystem s2 = assemble_scalar_model(g, map, def, nullptr);
  REQUIRE(s1.A.values() == s2.A.values());
  REQUIRE(s1.b == s2.b);
  auto [u1, r1] = minimize_quadratic(s1, SolveSettings{});
  auto [u2, r2] = minimize_quadratic(s2, SolveSettings{});
  CHECK(u1.values == u2.values);
  CHECK(r1.iterations == r2.iterations);
}
