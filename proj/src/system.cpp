#include "lnc/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lnc {

void SparseSym::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(n_, 0.0);
  for (int r = 0; r < n_; ++r) {
    double acc = 0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += vals_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

std::vector<double> SparseSym::multiply(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

double SparseSym::coeff(int r, int c) const {
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
    if (cols_[k] == c) return vals_[k];
  return 0.0;
}

std::vector<double> SparseSym::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (int r = 0; r < n_; ++r) d[r] = coeff(r, r);
  return d;
}

double SparseSym::max_abs() const {
  double m = 0;
  for (double v : vals_) m = std::max(m, std::abs(v));
  return m;
}

double SparseSym::symmetry_error() const {
  double m = 0;
  for (int r = 0; r < n_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      m = std::max(m, std::abs(vals_[k] - coeff(cols_[k], r)));
  return m;
}

std::vector<double> SparseSym::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int r = 0; r < n_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d[static_cast<std::size_t>(r) * n_ + cols_[k]] = vals_[k];
  return d;
}

double QuadraticSystem::energy(const std::vector<double>& u) const {
  std::vector<double> Au;
  A.multiply(u, Au);
  return 0.5 * dot(u, Au) - dot(b, u) + offset;
}

std::vector<double> QuadraticSystem::residual(const std::vector<double>& u) const {
  std::vector<double> r = A.multiply(u);
  for (int i = 0; i < A.rows(); ++i) r[i] -= b[i];
  return r;
}

SystemAssembler::SystemAssembler(const DofMap& map)
    : map_(&map), n_(map.size()), b_(map.size(), 0.0) {}

void SystemAssembler::add_square(double w, const LinTerm* terms, int count, double constant) {
  if (w == 0.0) return;
  // w*(c.u + g)^2 -> A += 2w cc^T, b -= 2w g c, offset += w g^2
  for (int i = 0; i < count; ++i) {
    const double tw = 2.0 * w * terms[i].coef;
    for (int j = 0; j < count; ++j) {
      const double v = tw * terms[j].coef;
      if (v != 0.0) triplets_.push_back({terms[i].dof, terms[j].dof, v});
    }
    if (constant != 0.0) b_[terms[i].dof] -= tw * constant;
  }
  if (constant != 0.0) offset_ += w * constant * constant;
}

void SystemAssembler::add_load(int dof, double value) { b_[dof] += value; }

QuadraticSystem SystemAssembler::finish(const GridDomain& grid) {
  // stable sort keeps the per-entry accumulation order equal to the
  // insertion order, so mirrored entries sum identically
  std::stable_sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  QuadraticSystem sys;
  sys.A.n_ = n_;
  sys.A.row_ptr_.assign(n_ + 1, 0);
  std::size_t k = 0;
  while (k < triplets_.size()) {
    const int r = triplets_[k].row;
    const int c = triplets_[k].col;
    double acc = 0;
    while (k < triplets_.size() && triplets_[k].row == r && triplets_[k].col == c)
      acc += triplets_[k++].value;
    sys.A.cols_.push_back(c);
    sys.A.vals_.push_back(acc);
    sys.A.row_ptr_[r + 1]++;
  }
  for (int r = 0; r < n_; ++r) sys.A.row_ptr_[r + 1] += sys.A.row_ptr_[r];

  sys.b = std::move(b_);
  sys.offset = offset_;
  sys.dofmap = *map_;
  sys.M = lumped_mass(grid, sys.dofmap);
  return sys;
}

std::vector<double> lumped_mass(const GridDomain& grid, const DofMap& map) {
  std::vector<double> m(map.size(), 0.0);
  const double cell_vol = std::pow(grid.h(), grid.dim());
  const int corners = grid.dim() == 1 ? 2 : 4;
  const double share = cell_vol / corners;
  for (int c : grid.cells_with(Label::Local)) {
    int slots[4];
    cell_corner_slots(grid, map, c, slots);
    for (int k = 0; k < corners; ++k) {
      if (slots[k] < 0) continue;
      for (int comp = 0; comp < map.block; ++comp) m[map.dof(slots[k], comp)] += share;
    }
  }
  for (int c : grid.cells_with(Label::Nonlocal)) {
    const int slot = map.cell_slot[c];
    if (slot < 0) continue;
    for (int comp = 0; comp < map.block; ++comp) m[map.dof(slot, comp)] += cell_vol;
  }
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace lnc
