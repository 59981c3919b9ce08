#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lnc/solvers.hpp"

namespace lnc {

/// Max relative mismatch between an analytic gradient and central finite
/// differences of the energy along deterministic random unit directions.
double gradient_check(const std::function<double(const std::vector<double>&)>& energy,
                      const std::function<std::vector<double>(const std::vector<double>&)>& gradient,
                      const std::vector<double>& u, int probes, double h_fd,
                      unsigned long long seed = 7);

// convenience wrappers
double gradient_check(const QuadraticSystem& system, const std::vector<double>& u, int probes,
                      double h_fd, unsigned long long seed = 7);
double gradient_check(const NonlinearModel& model, const std::vector<double>& u, int probes,
                      double h_fd, unsigned long long seed = 7);

struct ResidualReport {
  // weak-form residual rows (A u - b) split by unknown kind
  double local_max = 0, local_l2 = 0;
  double nonlocal_max = 0, nonlocal_l2 = 0;
  double weak_rel = 0;  // |Au-b| / max(|b|,1)
  // strong-form flux balance on Gamma (flux models): one-sided normal
  // derivative vs the surface-kernel integral; O(h) diagnostic only
  std::optional<double> gamma_max;
  std::optional<double> gamma_l2;
};

ResidualReport el_residual_scalar(const GridDomain& grid, const QuadraticSystem& system,
                                  const Field& u, const FacetSet* gamma = nullptr,
                                  const SurfaceKernelSpec* G = nullptr);

struct NullspaceReport {
  int dimension = 0;
  bool matched = false;
  std::vector<double> eigenvalues;  // the below-tol group (ascending)
};

enum class EigMethod { Auto, Dense, Iterative };

/// Count the eigenvalues of (A, M) below tol and test whether the supplied
/// candidate vectors span the corresponding eigenspace (projection residual
/// <= 1e-8). The dense path refuses n > 4000; Auto switches to deflated
/// inverse iteration there.
NullspaceReport nullspace_characterization(const QuadraticSystem& system,
                                           const std::vector<std::vector<double>>& expected,
                                           double tol, EigMethod method = EigMethod::Auto);

// smallest generalized eigenvalue by a dense solve; desk-scale oracle
double dense_lambda_min(const QuadraticSystem& system);
std::vector<double> dense_eigenvalues(const QuadraticSystem& system);

struct VerificationRecord {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
};

}  // namespace lnc
