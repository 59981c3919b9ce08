#include "lnc/verify.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

namespace lnc {

double gradient_check(const std::function<double(const std::vector<double>&)>& energy,
                      const std::function<std::vector<double>(const std::vector<double>&)>& gradient,
                      const std::vector<double>& u, int probes, double h_fd,
                      unsigned long long seed) {
  if (probes < 1) throw std::invalid_argument("gradient_check: probes must be >= 1");
  const std::size_t n = u.size();
  const std::vector<double> g = gradient(u);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0;
  std::vector<double> d(n), up(n), um(n);
  for (int p = 0; p < probes; ++p) {
    double nd = 0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = gauss(rng);
      nd += d[i] * d[i];
    }
    nd = std::sqrt(nd);
    if (nd == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] /= nd;
      up[i] = u[i] + h_fd * d[i];
      um[i] = u[i] - h_fd * d[i];
    }
    const double fd = (energy(up) - energy(um)) / (2.0 * h_fd);
    double gd = 0;
    for (std::size_t i = 0; i < n; ++i) gd += g[i] * d[i];
    const double err = std::abs(fd - gd) / std::max({1.0, std::abs(fd), std::abs(gd)});
    worst = std::max(worst, err);
  }
  return worst;
}

double gradient_check(const QuadraticSystem& system, const std::vector<double>& u, int probes,
                      double h_fd, unsigned long long seed) {
  return gradient_check([&](const std::vector<double>& v) { return system.energy(v); },
                        [&](const std::vector<double>& v) { return system.residual(v); }, u, probes,
                        h_fd, seed);
}

double gradient_check(const NonlinearModel& model, const std::vector<double>& u, int probes,
                      double h_fd, unsigned long long seed) {
  return gradient_check([&](const std::vector<double>& v) { return model.energy(v); },
                        [&](const std::vector<double>& v) { return model.gradient(v); }, u, probes,
                        h_fd, seed);
}

ResidualReport el_residual_scalar(const GridDomain& grid, const QuadraticSystem& system,
                                  const Field& u, const FacetSet* gamma,
                                  const SurfaceKernelSpec* G) {
  const DofMap& map = system.dofmap;
  if (static_cast<int>(u.values.size()) != system.size())
    throw std::invalid_argument("el_residual_scalar: field does not match the system");

  ResidualReport rep;
  const std::vector<double> r = system.residual(u.values);
  for (int slot = 0; slot < map.entity_count(); ++slot) {
    for (int comp = 0; comp < map.block; ++comp) {
      const double v = std::abs(r[map.dof(slot, comp)]);
      if (map.entities[slot].kind == DofKind::Vertex) {
        rep.local_max = std::max(rep.local_max, v);
        rep.local_l2 += v * v;
      } else {
        rep.nonlocal_max = std::max(rep.nonlocal_max, v);
        rep.nonlocal_l2 += v * v;
      }
    }
  }
  rep.local_l2 = std::sqrt(rep.local_l2);
  rep.nonlocal_l2 = std::sqrt(rep.nonlocal_l2);
  rep.weak_rel = norm2(r) / std::max(norm2(system.b), 1.0);

  if (gamma != nullptr && G != nullptr && !gamma->empty() && map.block == 1) {
    // flux balance: one-sided normal derivative of the local field vs the
    // surface-kernel integral over the nonlocal cells
    const double h = grid.h();
    const double cell_vol = std::pow(h, grid.dim());
    double gmax = 0, gl2 = 0;
    for (const Facet& f : gamma->facets) {
      const TraceStencil on_gamma = facet_trace(grid, map, f);
      double u_gamma = 0;
      for (int k = 0; k < on_gamma.count; ++k) u_gamma += on_gamma.weight[k] * u.values[on_gamma.slot[k]];

      // the facet shifted one cell into the local side
      Facet inner = f;
      const auto [ix, iy] = grid.cell_coords(f.local_cell);
      const int jx = ix - static_cast<int>(f.normal[0]);
      const int jy = iy - static_cast<int>(f.normal[1]);
      inner.local_cell = grid.cell_index(jx, grid.dim() > 1 ? jy : 0);
      const TraceStencil behind = facet_trace(grid, map, inner);
      double u_behind = 0;
      for (int k = 0; k < behind.count; ++k) u_behind += behind.weight[k] * u.values[behind.slot[k]];

      const double dn = (u_gamma - u_behind) / h;
      double coupling = 0;
      for (int c : grid.cells_with(Label::Nonlocal)) {
        const double g = eval_surface_kernel(*G, f.center, grid.cell_center(c));
        if (g == 0.0) continue;
        coupling += g * (u.values[map.dof(map.cell_slot[c], 0)] - u_gamma) * cell_vol;
      }
      const double res = std::abs(dn - coupling);
      gmax = std::max(gmax, res);
      gl2 += res * res * f.measure;
    }
    rep.gamma_max = gmax;
    rep.gamma_l2 = std::sqrt(gl2);
  }
  return rep;
}

namespace {

Eigen::MatrixXd scaled_dense(const QuadraticSystem& system) {
  const int n = system.size();
  Eigen::MatrixXd B(n, n);
  const std::vector<double> dense = system.A.to_dense();
  std::vector<double> isq(n);
  for (int i = 0; i < n; ++i) {
    if (!(system.M[i] > 0)) throw std::invalid_argument("nullspace: mass must be positive");
    isq[i] = 1.0 / std::sqrt(system.M[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = dense[static_cast<std::size_t>(i) * n + j] * isq[i] * isq[j];
  return B;
}

}  // namespace

std::vector<double> dense_eigenvalues(const QuadraticSystem& system) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_dense(system),
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + system.size());
  return out;
}

double dense_lambda_min(const QuadraticSystem& system) {
  const auto ev = dense_eigenvalues(system);
  return ev.empty() ? 0.0 : ev.front();
}

NullspaceReport nullspace_characterization(const QuadraticSystem& system,
                                           const std::vector<std::vector<double>>& expected,
                                           double tol, EigMethod method) {
  const int n = system.size();
  if (method == EigMethod::Dense && n > 4000)
    throw std::invalid_argument("nullspace_characterization: dense path refused above n = 4000");
  const bool dense = method == EigMethod::Dense || (method == EigMethod::Auto && n <= 4000);

  NullspaceReport rep;
  constexpr double kProjectionTol = 1e-8;

  if (dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_dense(system));
    const auto& vals = es.eigenvalues();
    int dim = 0;
    while (dim < n && vals(dim) < tol) ++dim;
    rep.dimension = dim;
    for (int k = 0; k < dim; ++k) rep.eigenvalues.push_back(vals(k));

    bool all_matched = rep.dimension == static_cast<int>(expected.size());
    const Eigen::MatrixXd V = es.eigenvectors().leftCols(dim);
    for (const auto& cand : expected) {
      if (!all_matched) break;
      Eigen::VectorXd y(n);
      for (int i = 0; i < n; ++i) y(i) = cand[i] * std::sqrt(system.M[i]);
      const double ny = y.norm();
      if (ny == 0.0) { all_matched = false; break; }
      y /= ny;
      const Eigen::VectorXd res = y - V * (V.transpose() * y);
      if (res.norm() > kProjectionTol) all_matched = false;
    }
    rep.matched = all_matched;
    return rep;
  }

  // iterative path: peel eigenpairs with deflated inverse iteration until
  // the eigenvalue leaves the below-tol group
  std::vector<std::vector<double>> found;
  EigSettings eig;
  eig.tol = 1e-10;
  const int limit = static_cast<int>(expected.size()) + 4;
  for (int k = 0; k < limit; ++k) {
    std::vector<double> vec;
    const CoercivityReport r = coercivity_estimate(system, eig, &found, &vec);
    if (r.lambda_min >= tol) break;
    rep.eigenvalues.push_back(r.lambda_min);
    found.push_back(vec);
  }
  rep.dimension = static_cast<int>(found.size());

  bool all_matched = rep.dimension == static_cast<int>(expected.size());
  for (const auto& cand : expected) {
    if (!all_matched) break;
    // M-orthogonal projection of the candidate onto the found set
    std::vector<double> resid = cand;
    double nc = 0;
    for (int i = 0; i < n; ++i) nc += cand[i] * system.M[i] * cand[i];
    if (!(nc > 0)) { all_matched = false; break; }
    for (const auto& f : found) {
      double proj = 0, nf = 0;
      for (int i = 0; i < n; ++i) {
        proj += resid[i] * system.M[i] * f[i];
        nf += f[i] * system.M[i] * f[i];
      }
      for (int i = 0; i < n; ++i) resid[i] -= (proj / nf) * f[i];
    }
    double nr = 0;
    for (int i = 0; i < n; ++i) nr += resid[i] * system.M[i] * resid[i];
    if (std::sqrt(nr / nc) > kProjectionTol) all_matched = false;
  }
  rep.matched = all_matched;
  return rep;
}

}  // namespace lnc
