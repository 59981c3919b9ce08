#pragma once

#include <functional>

#include "lnc/scalar_models.hpp"

namespace lnc {

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0;  // |Au - b| / max(|b|, 1)
  double energy = 0;
  double wall_seconds = 0;
  bool converged = false;
};

enum class Preconditioner { None, Jacobi };

struct SolveSettings {
  double tol = 1e-10;
  int max_iter = 20000;
  Preconditioner precond = Preconditioner::None;
};

/// Conjugate-gradient minimizer of the convex quadratic energy; at
/// convergence u satisfies the discrete weak Euler-Lagrange system Au = b.
/// The optional observer sees (iteration, relative residual, energy).
std::pair<Field, SolveReport> minimize_quadratic(
    const QuadraticSystem& system, const SolveSettings& settings,
    const std::function<void(int, double, double)>& observer = nullptr);

struct CoercivityReport {
  double lambda_min = 0;
  int iterations = 0;
  double residual = 0;  // |A v - lambda M v| / |M v|
};

struct EigSettings {
  double tol = 1e-9;
  int max_iter = 2000;
};

/// Smallest generalized eigenvalue of (A, M) by inverse power iteration
/// with shifted CG inner solves. Optional deflation vectors are projected
/// out (M-orthogonally); a singular A without deflation reports
/// lambda_min near zero together with the near-null vector.
CoercivityReport coercivity_estimate(const QuadraticSystem& system, const EigSettings& settings,
                                     const std::vector<std::vector<double>>* deflate = nullptr,
                                     std::vector<double>* eigenvector = nullptr);

struct NonlinearDef {
  double p = 2.0;  // local exponent, in (1, inf)
  double r = 2.0;  // nonlocal exponent, in (1, inf)
  KernelSpec kernel;
  ScalarPreset source;
  AssemblyOptions options;
};

/// Discrete energy of the nonlinear model: cell-centered |grad u|^p / p on
/// local cells, kernel-weighted |u(y)-u(x)|^r / r over Omega_nl x Omega,
/// minus the lumped load.
class NonlinearModel {
public:
  NonlinearModel(const GridDomain& grid, const DofMap& map, const NonlinearDef& def);

  double energy(const std::vector<double>& u) const;
  std::vector<double> gradient(const std::vector<double>& u) const;
  int size() const { return n_; }
  const std::vector<double>& load() const { return b_; }

private:
  struct Pair {
    TraceStencil a, b;  // each side: cell dof or local trace
    double weight;      // multiplicity * J * h^(2N)
  };
  struct LocalCell {
    int slots[4];
    double vol;
  };
  const GridDomain* grid_;
  const DofMap* map_;
  double p_, r_;
  int n_;
  std::vector<Pair> pairs_;
  std::vector<LocalCell> cells_;
  std::vector<double> b_;

  double side_value(const TraceStencil& s, const std::vector<double>& u) const;
};

/// Gradient descent with backtracking (halving) line search under the
/// sufficient-decrease condition; stops when the gradient norm reaches tol.
std::pair<Field, SolveReport> minimize_nonlinear(
    const GridDomain& grid, const DofMap& map, const NonlinearDef& def, double tol, int max_iter,
    std::vector<double>* energy_trace = nullptr);

// quadratic system assembling the same functional at p = r = 2; exact in
// one dimension, where the cell-centered gradient is the exact element
// gradient
QuadraticSystem assemble_nonlinear_quadratic(const GridDomain& grid, const DofMap& map,
                                             const NonlinearDef& def);

}  // namespace lnc
