#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "lnc/kernels.hpp"

using namespace lnc;

TEST_CASE("top hat evaluation") {
  KernelSpec spec;
  spec.kind = KernelKind::TopHat;
  spec.rho = 0.5;
  spec.c = 1.0;
  CHECK(eval_kernel_radial(spec, 0.25, 1) == 1.0);
  CHECK(eval_kernel_radial(spec, 0.75, 1) == 0.0);
  CHECK(eval_kernel_radial(spec, 0.5, 1) == 1.0);  // support is closed
}

TEST_CASE("truncated fractional evaluation") {
  KernelSpec spec;
  spec.kind = KernelKind::TruncFractional;
  spec.rho = 1.0;
  spec.c = 1.0;
  spec.s = 0.5;
  spec.eps = 0.1;
  // c / (r + eps)^(N + 2s) with N = 1: (0.2)^-2 = 25
  CHECK(eval_kernel_radial(spec, 0.1, 1) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("kernel symmetry and support properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (KernelKind kind : {KernelKind::TopHat, KernelKind::TruncGaussian, KernelKind::TruncFractional}) {
    KernelSpec spec;
    spec.kind = kind;
    spec.rho = 0.7;
    spec.c = 2.0;
    for (int k = 0; k < 200; ++k) {
      const Point z{dist(rng), dist(rng)};
      const Point mz{-z[0], -z[1]};
      const double v = eval_kernel(spec, z, 2);
      CHECK(v == eval_kernel(spec, mz, 2));
      CHECK(v >= 0.0);
      if (std::sqrt(z[0] * z[0] + z[1] * z[1]) > spec.rho) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("check_J1 over the connectivity ball") {
  KernelSpec spec;
  spec.kind = KernelKind::TopHat;
  spec.rho = 1.0;
  spec.c = 3.0;

  const J1Check ok = check_J1(spec, 0.5, 101, 1);
  CHECK(ok.holds);
  CHECK(ok.c_est == 3.0);

  const J1Check bad = check_J1(spec, 0.6, 101, 1);  // 2*delta = 1.2 > rho
  CHECK_FALSE(bad.holds);

  KernelSpec gauss;
  gauss.kind = KernelKind::TruncGaussian;
  gauss.rho = 1.0;
  gauss.c = 1.0;
  const J1Check g = check_J1(gauss, 0.5, 101, 1);
  CHECK(g.holds);
  CHECK(g.c_est == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(check_J1(spec, -1.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(check_J1(spec, 0.5, 0, 1), std::invalid_argument);
}

TEST_CASE("exterior mass by hand enumeration") {
  KernelSpec spec;
  spec.kind = KernelKind::TopHat;
  spec.rho = 0.3;
  spec.c = 1.0;
  const GridDomain g = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.1, [](const Point&) { return Label::Nonlocal; }, 3);

  // reference: direct sum over exterior centers
  const Point x{0.95, 0};
  double expect = 0;
  for (int c : g.cells_with(Label::Exterior)) {
    const double d = std::abs(x[0] - g.cell_center(c)[0]);
    if (d <= spec.rho) expect += 0.1;
  }
  const double mass = exterior_mass(spec, x, g, Label::Exterior);
  CHECK(mass == doctest::Approx(expect).epsilon(1e-14));
  CHECK(mass == doctest::Approx(0.2).epsilon(1e-12));

  // interior point beyond reach of the exterior
  CHECK(exterior_mass(spec, Point{0.5, 0}, g, Label::Exterior) == 0.0);

  // insufficient padding
  const GridDomain thin = build_grid(
      1, {{{0, 1}, {0, 0}}}, 0.1, [](const Point&) { return Label::Nonlocal; }, 1);
  CHECK_THROWS_AS(exterior_mass(spec, x, thin, Label::Exterior), std::invalid_argument);
}

TEST_CASE("coefficient presets stay symmetric and bounded") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 2.0);

  Coefficient radial;
  radial.kind = Coefficient::Kind::Radial;
  radial.base = 0.5;
  radial.amp = 1.5;
  radial.center = {0.5, 0.5};
  radial.width = 0.3;

  Coefficient piecewise;
  piecewise.kind = Coefficient::Kind::PiecewiseRegion;
  piecewise.local = 2.0;
  piecewise.nonlocal = 0.5;

  for (int k = 0; k < 200; ++k) {
    const Point x{dist(rng), dist(rng)};
    const Point y{dist(rng), dist(rng)};
    for (const Coefficient& c : {radial, piecewise}) {
      const double v = eval_coefficient_pair(c, x, y);
      CHECK(v == eval_coefficient_pair(c, y, x));
      CHECK(v > 0.0);
      CHECK(v <= 2.0 + 1e-12);
    }
  }
}
