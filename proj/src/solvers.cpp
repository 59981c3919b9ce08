#include "lnc/solvers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pair_loop.hpp"

namespace lnc {

namespace {

// CG for (A + shift*M) x = rhs with optional Jacobi preconditioning;
// returns (iterations, relative residual)
std::pair<int, double> cg_solve(const SparseSym& A, const std::vector<double>& M, double shift,
                                const std::vector<double>& rhs, std::vector<double>& x, double tol,
                                int max_iter, Preconditioner precond) {
  const int n = A.rows();
  std::vector<double> r = rhs, q(n), z(n);
  if (norm2(x) != 0.0) {
    A.multiply(x, q);
    for (int i = 0; i < n; ++i) r[i] -= q[i] + shift * M[i] * x[i];
  }
  std::vector<double> diag;
  if (precond == Preconditioner::Jacobi) {
    diag = A.diagonal();
    for (int i = 0; i < n; ++i) {
      diag[i] += shift * M[i];
      if (diag[i] <= 0.0) diag[i] = 1.0;
    }
  }
  auto apply_prec = [&](const std::vector<double>& v, std::vector<double>& out) {
    out.resize(n);
    if (precond == Preconditioner::Jacobi)
      for (int i = 0; i < n; ++i) out[i] = v[i] / diag[i];
    else
      out = v;
  };

  const double stop = tol * std::max(norm2(rhs), 1.0);
  double rnorm = norm2(r);
  if (rnorm <= stop) return {0, rnorm / std::max(norm2(rhs), 1.0)};

  apply_prec(r, z);
  std::vector<double> p = z;
  double rz = dot(r, z);
  int it = 0;
  while (it < max_iter) {
    ++it;
    A.multiply(p, q);
    if (shift != 0.0)
      for (int i = 0; i < n; ++i) q[i] += shift * M[i] * p[i];
    const double pq = dot(p, q);
    if (!(pq > 0)) break;  // matrix not positive definite along p
    const double alpha = rz / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = norm2(r);
    if (rnorm <= stop || !std::isfinite(rnorm)) break;
    apply_prec(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return {it, rnorm / std::max(norm2(rhs), 1.0)};
}

void m_orthonormalize(std::vector<std::vector<double>>& basis, const std::vector<double>& M) {
  std::vector<std::vector<double>> kept;
  for (auto& v : basis) {
    for (const auto& k : kept) {
      double proj = 0, nk = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        proj += v[i] * M[i] * k[i];
        nk += k[i] * M[i] * k[i];
      }
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= (proj / nk) * k[i];
    }
    double nv = 0;
    for (std::size_t i = 0; i < v.size(); ++i) nv += v[i] * M[i] * v[i];
    if (nv > 1e-24) {
      const double s = 1.0 / std::sqrt(nv);
      for (double& x : v) x *= s;
      kept.push_back(v);
    }
  }
  basis = std::move(kept);
}

}  // namespace

std::pair<Field, SolveReport> minimize_quadratic(
    const QuadraticSystem& system, const SolveSettings& settings,
    const std::function<void(int, double, double)>& observer) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = system.size();
  Field u;
  u.values.assign(n, 0.0);
  SolveReport rep;

  const double bnorm = std::max(norm2(system.b), 1.0);
  std::vector<double> r = system.b, q(n), z(n);
  std::vector<double> diag;
  if (settings.precond == Preconditioner::Jacobi) {
    diag = system.A.diagonal();
    for (double& d : diag)
      if (d <= 0.0) d = 1.0;
  }
  auto apply_prec = [&](const std::vector<double>& v, std::vector<double>& out) {
    out.resize(n);
    if (settings.precond == Preconditioner::Jacobi)
      for (int i = 0; i < n; ++i) out[i] = v[i] / diag[i];
    else
      out = v;
  };

  double rnorm = norm2(r);
  rep.rel_residual = rnorm / bnorm;
  if (observer) observer(0, rep.rel_residual, system.energy(u.values));
  if (rep.rel_residual > settings.tol) {
    apply_prec(r, z);
    std::vector<double> p = z;
    double rz = dot(r, z);
    while (rep.iterations < settings.max_iter) {
      ++rep.iterations;
      system.A.multiply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0) || !std::isfinite(pq)) break;
      const double alpha = rz / pq;
      for (int i = 0; i < n; ++i) {
        u.values[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      rnorm = norm2(r);
      rep.rel_residual = rnorm / bnorm;
      if (observer) observer(rep.iterations, rep.rel_residual, system.energy(u.values));
      if (!std::isfinite(rnorm) || rep.rel_residual <= settings.tol) break;
      apply_prec(r, z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
  }

  // recompute the true residual; CG recurrences drift
  std::vector<double> res = system.residual(u.values);
  rep.rel_residual = norm2(res) / bnorm;
  rep.converged = std::isfinite(rep.rel_residual) && rep.rel_residual <= settings.tol;
  rep.energy = system.energy(u.values);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), rep};
}

CoercivityReport coercivity_estimate(const QuadraticSystem& system, const EigSettings& settings,
                                     const std::vector<std::vector<double>>* deflate,
                                     std::vector<double>* eigenvector) {
  const int n = system.size();
  if (n == 0) throw std::invalid_argument("coercivity_estimate: empty system");
  const std::vector<double>& M = system.M;
  for (double m : M)
    if (!(m > 0)) throw std::invalid_argument("coercivity_estimate: mass matrix must be positive");

  std::vector<std::vector<double>> defl;
  if (deflate) {
    defl = *deflate;
    m_orthonormalize(defl, M);
  }
  auto project_out = [&](std::vector<double>& v) {
    for (const auto& d : defl) {
      double proj = 0;
      for (int i = 0; i < n; ++i) proj += v[i] * M[i] * d[i];
      for (int i = 0; i < n; ++i) v[i] -= proj * d[i];
    }
  };

  // shift keeps the inner solves positive definite when A is singular
  double scale = 0;
  const std::vector<double> diag = system.A.diagonal();
  for (int i = 0; i < n; ++i) scale = std::max(scale, diag[i] / M[i]);
  if (scale <= 0) scale = 1.0;
  const double shift = 1e-12 * scale;

  // deterministic generic start vector
  std::vector<double> v(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = 0.5 + static_cast<double>(state >> 11) / 9007199254740992.0;
  }
  project_out(v);
  double vm = 0;
  for (int i = 0; i < n; ++i) vm += v[i] * M[i] * v[i];
  for (double& x : v) x /= std::sqrt(vm);

  CoercivityReport rep;
  std::vector<double> rhs(n), w(n), Av(n);
  while (rep.iterations < settings.max_iter) {
    ++rep.iterations;
    for (int i = 0; i < n; ++i) rhs[i] = M[i] * v[i];
    w = v;  // warm start
    cg_solve(system.A, M, shift, rhs, w, 1e-14, 20 * n + 100, Preconditioner::Jacobi);
    project_out(w);
    double wm = 0;
    for (int i = 0; i < n; ++i) wm += w[i] * M[i] * w[i];
    if (!(wm > 0) || !std::isfinite(wm)) break;
    const double s = 1.0 / std::sqrt(wm);
    for (int i = 0; i < n; ++i) v[i] = w[i] * s;

    system.A.multiply(v, Av);
    double rayleigh = 0;
    for (int i = 0; i < n; ++i) rayleigh += v[i] * Av[i];
    rep.lambda_min = rayleigh;  // v is M-normalized

    double res = 0, mnorm = 0;
    for (int i = 0; i < n; ++i) {
      const double d = Av[i] - rayleigh * M[i] * v[i];
      res += d * d;
      mnorm += M[i] * v[i] * M[i] * v[i];
    }
    rep.residual = std::sqrt(res) / std::sqrt(mnorm);
    if (rep.residual <= settings.tol) break;
  }
  if (eigenvector) *eigenvector = v;
  return rep;
}

NonlinearModel::NonlinearModel(const GridDomain& grid, const DofMap& map, const NonlinearDef& def)
    : grid_(&grid), map_(&map), p_(def.p), r_(def.r), n_(map.size()) {
  if (!(p_ > 1) || !(r_ > 1))
    throw std::invalid_argument("NonlinearModel: exponents must lie in (1, inf)");
  if (map.block != 1) throw std::invalid_argument("NonlinearModel: scalar unknowns only");

  const double hw = std::pow(grid.h(), 2 * grid.dim());
  detail::for_each_kernel_pair(grid, def.kernel, NonlocalMode::SourceInterior, def.options,
                               [&](const detail::PairInfo& p) {
                                 Pair pr;
                                 auto side = [&](int cell, Label label) {
                                   TraceStencil s;
                                   if (label == Label::Nonlocal) {
                                     s.count = 1;
                                     s.slot[0] = map.cell_slot[cell];
                                     s.weight[0] = 1.0;
                                   } else {
                                     s = cell_trace(grid, map, cell);
                                   }
                                   return s;
                                 };
                                 pr.a = side(p.cell_a, p.label_a);
                                 pr.b = side(p.cell_b, p.label_b);
                                 pr.weight = p.multiplicity * p.j_value * hw;
                                 pairs_.push_back(pr);
                               });

  if (def.options.include_local) {
    const double vol = std::pow(grid.h(), grid.dim());
    for (int c : grid.cells_with(Label::Local)) {
      LocalCell lc;
      cell_corner_slots(grid, map, c, lc.slots);
      lc.vol = vol;
      cells_.push_back(lc);
    }
  }

  b_.assign(n_, 0.0);
  const std::vector<double> mass = lumped_mass(grid, map);
  for (int slot = 0; slot < map.entity_count(); ++slot)
    b_[slot] = eval_source(def.source, map.entities[slot].coord, grid.dim()) * mass[slot];
}

double NonlinearModel::side_value(const TraceStencil& s, const std::vector<double>& u) const {
  double v = 0;
  for (int k = 0; k < s.count; ++k) v += s.weight[k] * u[s.slot[k]];
  return v;
}

double NonlinearModel::energy(const std::vector<double>& u) const {
  const double h = grid_->h();
  double e = 0;
  for (const LocalCell& c : cells_) {
    // cell-centered gradient of the multilinear interpolant
    auto val = [&](int k) { return c.slots[k] >= 0 ? u[c.slots[k]] : 0.0; };
    double g2;
    if (grid_->dim() == 1) {
      const double gx = (val(1) - val(0)) / h;
      g2 = gx * gx;
    } else {
      const double gx = (val(1) + val(3) - val(0) - val(2)) / (2 * h);
      const double gy = (val(2) + val(3) - val(0) - val(1)) / (2 * h);
      g2 = gx * gx + gy * gy;
    }
    e += std::pow(g2, 0.5 * p_) / p_ * c.vol;
  }
  for (const Pair& pr : pairs_) {
    const double d = side_value(pr.b, u) - side_value(pr.a, u);
    e += pr.weight / r_ * std::pow(std::abs(d), r_);
  }
  for (int i = 0; i < n_; ++i) e -= b_[i] * u[i];
  return e;
}

std::vector<double> NonlinearModel::gradient(const std::vector<double>& u) const {
  const double h = grid_->h();
  std::vector<double> g(n_, 0.0);
  for (const LocalCell& c : cells_) {
    auto val = [&](int k) { return c.slots[k] >= 0 ? u[c.slots[k]] : 0.0; };
    if (grid_->dim() == 1) {
      const double gx = (val(1) - val(0)) / h;
      const double f = std::pow(std::abs(gx), p_ - 2.0) * gx * c.vol / h;
      if (c.slots[1] >= 0) g[c.slots[1]] += f;
      if (c.slots[0] >= 0) g[c.slots[0]] -= f;
    } else {
      const double gx = (val(1) + val(3) - val(0) - val(2)) / (2 * h);
      const double gy = (val(2) + val(3) - val(0) - val(1)) / (2 * h);
      const double norm2g = gx * gx + gy * gy;
      if (norm2g == 0.0) continue;
      const double f = std::pow(norm2g, 0.5 * p_ - 1.0) * c.vol / (2 * h);
      const double cx[4] = {-1, 1, -1, 1}, cy[4] = {-1, -1, 1, 1};
      for (int k = 0; k < 4; ++k)
        if (c.slots[k] >= 0) g[c.slots[k]] += f * (gx * cx[k] + gy * cy[k]);
    }
  }
  for (const Pair& pr : pairs_) {
    const double d = side_value(pr.b, u) - side_value(pr.a, u);
    if (d == 0.0) continue;
    const double f = pr.weight * std::pow(std::abs(d), r_ - 2.0) * d;
    for (int k = 0; k < pr.b.count; ++k) g[pr.b.slot[k]] += f * pr.b.weight[k];
    for (int k = 0; k < pr.a.count; ++k) g[pr.a.slot[k]] -= f * pr.a.weight[k];
  }
  for (int i = 0; i < n_; ++i) g[i] -= b_[i];
  return g;
}

std::pair<Field, SolveReport> minimize_nonlinear(const GridDomain& grid, const DofMap& map,
                                                 const NonlinearDef& def, double tol, int max_iter,
                                                 std::vector<double>* energy_trace) {
  const auto t0 = std::chrono::steady_clock::now();
  NonlinearModel model(grid, map, def);
  const int n = model.size();
  Field u;
  u.values.assign(n, 0.0);
  SolveReport rep;

  constexpr double kSufficientDecrease = 1e-4;
  double energy = model.energy(u.values);
  if (energy_trace) energy_trace->push_back(energy);

  // descent along -g with a Barzilai-Borwein trial step, safeguarded by
  // halving backtracking under the sufficient-decrease condition
  std::vector<double> g = model.gradient(u.values);
  std::vector<double> g_prev, u_prev;
  double step = 1.0;
  while (rep.iterations < max_iter) {
    const double gnorm = norm2(g);
    rep.rel_residual = gnorm;
    if (!std::isfinite(gnorm)) break;
    if (gnorm <= tol) {
      rep.converged = true;
      break;
    }
    ++rep.iterations;

    if (!u_prev.empty()) {
      double sy = 0, yy = 0;
      for (int i = 0; i < n; ++i) {
        const double s = u.values[i] - u_prev[i];
        const double y = g[i] - g_prev[i];
        sy += s * y;
        yy += y * y;
      }
      if (sy > 0 && yy > 0 && std::isfinite(sy / yy)) step = sy / yy;
      else step *= 2.0;
    }

    bool accepted = false;
    std::vector<double> trial(n);
    double t = step;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < n; ++i) trial[i] = u.values[i] - t * g[i];
      const double e_trial = model.energy(trial);
      if (e_trial <= energy - kSufficientDecrease * t * gnorm * gnorm) {
        u_prev = u.values;
        g_prev = g;
        u.values.swap(trial);
        energy = e_trial;
        g = model.gradient(u.values);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no admissible step at this scale
    if (energy_trace) energy_trace->push_back(energy);
  }

  rep.energy = energy;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), rep};
}

QuadraticSystem assemble_nonlinear_quadratic(const GridDomain& grid, const DofMap& map,
                                             const NonlinearDef& def) {
  ScalarModelDef sd;
  sd.mode = NonlocalMode::SourceInterior;
  sd.kernel = def.kernel;
  sd.use_gamma = false;
  sd.local_coeff = Coefficient{};  // a = 1
  sd.source = def.source;
  sd.options = def.options;
  return assemble_scalar_model(grid, map, sd, nullptr);
}

}  // namespace lnc
