#pragma once

#include "lnc/geometry.hpp"

namespace lnc {

/// Scalar source term f.
struct ScalarPreset {
  enum class Kind { Constant, GaussianBump, SeparableSine };
  Kind kind = Kind::Constant;
  double value = 0.0;   // Constant amplitude, also scales the other shapes
  Point center{0, 0};   // GaussianBump
  double width = 1.0;   // GaussianBump
  Point freq{1, 1};     // SeparableSine: prod_a sin(freq_a * pi * x_a)
};

double eval_source(const ScalarPreset& f, const Point& x, int dim);

/// Vector force with per-component amplitudes sharing one spatial shape.
struct VectorPreset {
  ScalarPreset shape;       // shape.value is ignored; amplitudes below
  std::array<double, 2> amp{0, 0};
};

double eval_force(const VectorPreset& f, const Point& x, int dim, int comp);

/// Exterior Dirichlet datum g_d, evaluated at padded exterior cells.
struct ExteriorDatum {
  enum class Kind { Zero, Constant };
  Kind kind = Kind::Zero;
  double value = 0.0;

  bool homogeneous() const { return kind == Kind::Zero || value == 0.0; }
  double eval(const Point&) const { return kind == Kind::Zero ? 0.0 : value; }
};

}  // namespace lnc
