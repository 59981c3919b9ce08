#include "lnc/runner.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lnc {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::function<Label(const Point&)> make_labeler(const GeometryConfig& g, const MaskRaster* mask) {
  if (g.kind == "halfspace") {
    return [g](const Point& x) {
      const bool below = x[g.axis] < g.split;
      return below == g.local_below ? Label::Local : Label::Nonlocal;
    };
  }
  if (g.kind == "boxes") {
    return [g](const Point& x) {
      auto inside = [&](const std::array<std::array<double, 2>, 2>& box) {
        for (int a = 0; a < g.dim; ++a)
          if (x[a] < box[a][0] || x[a] > box[a][1]) return false;
        return true;
      };
      for (const auto& b : g.local_boxes)
        if (inside(b)) return Label::Local;
      for (const auto& b : g.nonlocal_boxes)
        if (inside(b)) return Label::Nonlocal;
      return g.fill;
    };
  }
  if (g.kind == "balls") {
    return [g](const Point& x) {
      for (const auto& ball : g.nonlocal_balls) {
        const Point c{ball[0], g.dim > 1 ? ball[1] : 0.0};
        if (distance(x, c) <= ball[2]) return Label::Nonlocal;
      }
      return g.fill;
    };
  }
  // mask
  return [g, mask](const Point& x) {
    const int ix = static_cast<int>(std::floor((x[0] - g.origin[0]) / g.h));
    const int iy = g.dim > 1 ? static_cast<int>(std::floor((x[1] - g.origin[1]) / g.h)) : 0;
    if (ix < 0 || ix >= mask->nx || iy < 0 || iy >= mask->ny) return Label::Exterior;
    return mask->cells[ix + static_cast<std::size_t>(iy) * mask->nx];
  };
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

void write_report_line(std::ostream& out, const std::string& key, const std::string& v) {
  out << key << " = " << v << "\n";
}

}  // namespace

GridDomain build_grid_from_config(const RunConfig& cfg) {
  const GeometryConfig& g = cfg.geometry;
  double horizon = cfg.kernel.rho;
  if (model_uses_gamma(cfg.model)) horizon = std::max(horizon, cfg.gkernel.rho);
  int pad = g.pad;
  if (pad < 0) pad = static_cast<int>(std::ceil(horizon / g.h - 1e-12));

  MaskRaster mask;
  auto bbox = g.bbox;
  if (g.kind == "mask") {
    std::ifstream in(g.mask_path);
    if (!in) throw ConfigError("config: cannot open mask file '" + g.mask_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    mask = parse_mask(ss.str());
    bbox[0] = {g.origin[0], g.origin[0] + mask.nx * g.h};
    bbox[1] = {g.origin[1], g.origin[1] + mask.ny * g.h};
    const int dim = mask.ny == 1 ? 1 : 2;
    if (dim != g.dim)
      throw ConfigError("config: mask dimensionality does not match geometry.dim");
  }
  return build_grid(g.dim, bbox, g.h, make_labeler(g, &mask), pad);
}

namespace {

struct AssembledModel {
  QuadraticSystem system;
  FacetSet gamma;
  bool is_nonlinear = false;
  NonlinearDef nonlinear;
};

AssembledModel assemble_from_config(const RunConfig& cfg, const GridDomain& grid,
                                    const DofMap& map) {
  AssembledModel out;
  out.gamma = extract_gamma(grid);

  if (model_is_elastic(cfg.model)) {
    ElasticModelDef def;
    def.mode = model_mode(cfg.model);
    def.kernel = cfg.kernel;
    def.kernel.coefficient = cfg.coeff;
    def.gkernel = cfg.gkernel;
    def.use_gamma = model_uses_gamma(cfg.model);
    def.params = cfg.elastic;
    def.force = cfg.force;
    def.options = cfg.assembly;
    out.system = assemble_elastic_model(grid, map, def, &out.gamma);
    return out;
  }
  if (cfg.model == ModelKind::Nonlinear) {
    NonlinearDef def;
    def.p = cfg.nonlinear_p;
    def.r = cfg.nonlinear_r;
    def.kernel = cfg.kernel;
    def.kernel.coefficient = cfg.coeff;
    def.source = cfg.source;
    def.options = cfg.assembly;
    out.is_nonlinear = true;
    out.nonlinear = def;
    out.system = assemble_nonlinear_quadratic(grid, map, def);
    return out;
  }
  ScalarModelDef def;
  def.mode = model_mode(cfg.model);
  def.kernel = cfg.kernel;
  def.kernel.coefficient = cfg.coeff;
  def.gkernel = cfg.gkernel;
  def.use_gamma = model_uses_gamma(cfg.model);
  def.local_coeff = cfg.coeff;
  def.source = cfg.source;
  def.dirichlet = cfg.dirichlet;
  def.options = cfg.assembly;
  out.system = assemble_scalar_model(grid, map, def, &out.gamma);
  return out;
}

void write_field_csv(const std::filesystem::path& path, const GridDomain& grid, const DofMap& map,
                     const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  out << (grid.dim() == 1 ? "kind,x,component,value\n" : "kind,x,y,component,value\n");
  for (int slot = 0; slot < map.entity_count(); ++slot) {
    const DofEntity& e = map.entities[slot];
    for (int comp = 0; comp < map.block; ++comp) {
      out << (e.kind == DofKind::Vertex ? "vertex" : "cell") << ',' << format_double(e.coord[0]);
      if (grid.dim() > 1) out << ',' << format_double(e.coord[1]);
      out << ',' << comp << ',' << format_double(values[map.dof(slot, comp)]) << '\n';
    }
  }
}

double analytic_sin1d_error(const GridDomain& grid, const DofMap& map,
                            const std::vector<double>& values) {
  double worst = 0;
  for (int slot = 0; slot < map.entity_count(); ++slot) {
    const DofEntity& e = map.entities[slot];
    if (e.kind != DofKind::Vertex) continue;
    const double exact = std::sin(M_PI * e.coord[0]);
    worst = std::max(worst, std::abs(values[map.dof(slot, 0)] - exact));
  }
  return worst;
}

}  // namespace

RunOutcome run(const RunConfig& cfg, const std::filesystem::path& out_dir, bool strict,
               bool check_only) {
  RunOutcome outcome;
  std::filesystem::create_directories(out_dir);

  const GridDomain grid = build_grid_from_config(cfg);
  const FacetSet gamma = extract_gamma(grid);
  const double delta = cfg.kernel.delta();
  const CouplingMode cmode =
      model_uses_gamma(cfg.model) ? CouplingMode::Flux : CouplingMode::Source;
  outcome.admissibility = check_admissibility(grid, gamma, delta, cmode);

  std::ofstream rep(out_dir / cfg.output_report, std::ios::binary);
  write_report_line(rep, "grid.dim", std::to_string(grid.dim()));
  write_report_line(rep, "grid.h", format_double(grid.h()));
  write_report_line(rep, "grid.pad", std::to_string(grid.pad()));
  write_report_line(rep, "grid.cells_local", std::to_string(grid.cells_with(Label::Local).size()));
  write_report_line(rep, "grid.cells_nonlocal", std::to_string(grid.cells_with(Label::Nonlocal).size()));
  write_report_line(rep, "grid.cells_exterior", std::to_string(grid.cells_with(Label::Exterior).size()));
  write_report_line(rep, "gamma.facets", std::to_string(gamma.size()));

  const AdmissibilityReport& adm = outcome.admissibility;
  write_report_line(rep, "adm.delta", format_double(adm.delta));  // = kernel.rho / 2
  write_report_line(rep, "adm.local_connected", bool_str(adm.local_connected));
  write_report_line(rep, "adm.nl_components", std::to_string(adm.nl_components.size()));
  write_report_line(rep, "adm.dist_local_nonlocal", format_double(adm.dist_local_nonlocal));
  write_report_line(rep, "adm.dist_gamma_nonlocal", format_double(adm.dist_gamma_nonlocal));
  write_report_line(rep, "adm.pass_1", bool_str(adm.pass_local_connected));
  write_report_line(rep, "adm.pass_2", bool_str(adm.pass_nl_delta_connected));
  write_report_line(rep, "adm.pass_p1", bool_str(adm.pass_p1));
  write_report_line(rep, "adm.pass_p2", bool_str(adm.pass_p2));
  write_report_line(rep, "adm.generalized_graph_connected", bool_str(adm.generalized_graph_connected));
  write_report_line(rep, "adm.touches_exterior", bool_str(adm.touches_exterior));
  write_report_line(rep, "adm.required_ok", bool_str(adm.required_ok));

  if (strict && !adm.required_ok) {
    outcome.exit_code = 3;
    return outcome;
  }
  if (check_only) return outcome;

  const int block = model_is_elastic(cfg.model) ? grid.dim() : 1;
  const DofMap map = build_dofmap(grid, block, cfg.assembly.eliminate_boundary);
  AssembledModel model = assemble_from_config(cfg, grid, map);
  outcome.system_size = model.system.size();

  write_report_line(rep, "system.n", std::to_string(model.system.size()));
  write_report_line(rep, "system.nnz", std::to_string(model.system.A.nonzeros()));
  write_report_line(rep, "system.symmetry_max_diff", format_double(model.system.A.symmetry_error()));
  write_report_line(rep, "system.energy_offset", format_double(model.system.offset));

  Field field;
  if (model.is_nonlinear) {
    auto [u, solve_rep] = minimize_nonlinear(grid, map, model.nonlinear, cfg.solve.tol,
                                             cfg.solve.max_iter);
    field = std::move(u);
    outcome.solve = solve_rep;
  } else {
    auto [u, solve_rep] = minimize_quadratic(model.system, cfg.solve);
    field = std::move(u);
    outcome.solve = solve_rep;
  }
  write_report_line(rep, "solve.iterations", std::to_string(outcome.solve.iterations));
  write_report_line(rep, "solve.rel_residual", format_double(outcome.solve.rel_residual));
  write_report_line(rep, "solve.energy", format_double(outcome.solve.energy));
  write_report_line(rep, "solve.converged", bool_str(outcome.solve.converged));
  write_report_line(rep, "solve.wall_s", format_double(outcome.solve.wall_seconds));
  outcome.energy = outcome.solve.energy;

  if (!outcome.solve.converged) {
    write_field_csv(out_dir / cfg.output_field, grid, map, field.values);
    outcome.exit_code = 4;
    return outcome;
  }

  if (cfg.coercivity_enabled) {
    outcome.coercivity = coercivity_estimate(model.system, cfg.eig);
    outcome.coercivity_computed = true;
    write_report_line(rep, "coercivity.lambda_min", format_double(outcome.coercivity.lambda_min));
    write_report_line(rep, "coercivity.iterations", std::to_string(outcome.coercivity.iterations));
    write_report_line(rep, "coercivity.residual", format_double(outcome.coercivity.residual));
  }

  if (cfg.verify.enabled) {
    if (model.is_nonlinear) {
      NonlinearModel nm(grid, map, model.nonlinear);
      const double gerr =
          gradient_check(nm, field.values, cfg.verify.gradient_probes, cfg.verify.fd_h, cfg.seed + 7);
      outcome.records.push_back({"gradient_check", gerr, 1e-6, gerr <= 1e-6});
      const double gnorm = norm2(nm.gradient(field.values));
      outcome.records.push_back({"stationarity", gnorm, cfg.solve.tol, gnorm <= cfg.solve.tol});
    } else {
      const ResidualReport res =
          el_residual_scalar(grid, model.system, field,
                             model_uses_gamma(cfg.model) ? &model.gamma : nullptr,
                             model_uses_gamma(cfg.model) ? &cfg.gkernel : nullptr);
      outcome.records.push_back(
          {"weak_rel_residual", res.weak_rel, cfg.solve.tol, res.weak_rel <= cfg.solve.tol});
      const double gerr = gradient_check(model.system, field.values, cfg.verify.gradient_probes,
                                         cfg.verify.fd_h, cfg.seed + 7);
      outcome.records.push_back({"gradient_check", gerr, 1e-6, gerr <= 1e-6});
      if (res.gamma_max) {
        // diagnostic: O(h) strong-form flux balance, never pass/fail at fixed h
        write_report_line(rep, "verify.gamma_flux_max", format_double(*res.gamma_max));
        write_report_line(rep, "verify.gamma_flux_l2", format_double(*res.gamma_l2));
      }
      if (cfg.verify.analytic == "sin1d") {
        const double err = analytic_sin1d_error(grid, map, field.values);
        const double bound = 2.0 * grid.h() * grid.h();
        outcome.records.push_back({"analytic_sin1d_max_err", err, bound, err <= bound});
      }
    }
    for (const VerificationRecord& r : outcome.records) {
      write_report_line(rep, "verify." + r.name + ".value", format_double(r.value));
      write_report_line(rep, "verify." + r.name + ".threshold", format_double(r.threshold));
      write_report_line(rep, "verify." + r.name + ".pass", bool_str(r.pass));
    }
  }

  write_field_csv(out_dir / cfg.output_field, grid, map, field.values);

  for (const VerificationRecord& r : outcome.records)
    if (!r.pass) outcome.exit_code = 5;
  return outcome;
}

int sweep(const ConfigMap& base, const std::string& param, const std::vector<std::string>& values,
          const std::filesystem::path& out_dir, bool strict) {
  std::filesystem::create_directories(out_dir);
  std::ofstream summary(out_dir / "summary.csv", std::ios::binary);
  summary << "value,n,energy,lambda_min,weak_rel_residual\n";

  for (const std::string& v : values) {
    ConfigMap cm = base;
    cm.set(param, v);
    const RunConfig cfg = build_run_config(cm);

    std::string dir_name = param + "=" + v;
    for (char& c : dir_name)
      if (c == '/' || c == '\\') c = '_';
    const RunOutcome out = run(cfg, out_dir / dir_name, strict);
    if (out.exit_code != 0) return out.exit_code;

    summary << v << ',' << out.system_size << ',' << format_double(out.energy) << ',';
    if (out.coercivity_computed) summary << format_double(out.coercivity.lambda_min);
    summary << ',';
    double weak = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : out.records)
      if (r.name == "weak_rel_residual") weak = r.value;
    summary << format_double(weak) << '\n';
  }
  return 0;
}

std::map<std::string, std::string> parse_report_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace lnc
