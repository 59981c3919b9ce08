#pragma once

#include <cstddef>
#include <vector>

#include "lnc/dofmap.hpp"

namespace lnc {

/// Sparse symmetric matrix in CSR form. Built from triplets; symmetric
/// contributions are inserted pairwise in identical order, so A equals its
/// transpose bit-for-bit.
class SparseSym {
public:
  SparseSym() = default;
  explicit SparseSym(int n) : n_(n), row_ptr_(n + 1, 0) {}

  int rows() const { return n_; }
  std::size_t nonzeros() const { return vals_.size(); }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  double coeff(int r, int c) const;      // 0 when the entry is not stored
  std::vector<double> diagonal() const;
  double max_abs() const;
  // max |A_ij - A_ji|; exactly zero for every assembled system
  double symmetry_error() const;
  // dense row-major copy, for desk-scale oracles
  std::vector<double> to_dense() const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return vals_; }

  friend class SystemAssembler;

private:
  int n_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> cols_;
  std::vector<double> vals_;
};

struct Field {
  std::vector<double> values;
};

/// Assembled discrete energy E(u) = 1/2 u^T A u - b^T u + offset with the
/// diagonal lumped mass M of the DOF layout.
struct QuadraticSystem {
  SparseSym A;
  std::vector<double> b;
  std::vector<double> M;
  DofMap dofmap;
  double offset = 0;

  int size() const { return A.rows(); }
  double energy(const std::vector<double>& u) const;
  // residual A u - b
  std::vector<double> residual(const std::vector<double>& u) const;
};

struct LinTerm {
  int dof;
  double coef;
};

/// Accumulates weighted squares w * (sum_k coef_k u_k + constant)^2 into
/// the quadratic form. Every term keeps the assembled matrix symmetric and
/// positive semidefinite by construction.
class SystemAssembler {
public:
  explicit SystemAssembler(const DofMap& map);

  void add_square(double w, const LinTerm* terms, int count, double constant = 0.0);
  void add_load(int dof, double value);  // adds to b
  int size() const { return n_; }

  QuadraticSystem finish(const GridDomain& grid);

private:
  struct Triplet {
    int row, col;
    double value;
  };
  const DofMap* map_;
  int n_;
  std::vector<Triplet> triplets_;
  std::vector<double> b_;
  double offset_ = 0;
};

// diagonal lumped mass for the DOF layout: vertices carry their share of
// adjacent local cell volume, cells carry h^N; replicated per component
std::vector<double> lumped_mass(const GridDomain& grid, const DofMap& map);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace lnc
