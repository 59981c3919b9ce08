#include "lnc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace lnc {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  const auto b = s.find_last_not_of(" \t");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  double x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("config: key '" + key + "' expects a real number, got '" + v + "'");
  return x;
}

std::vector<double> to_reals(const std::string& key, const std::string& v, char sep) {
  std::vector<double> out;
  for (const auto& part : split(v, sep)) out.push_back(to_real(key, part));
  return out;
}

const std::vector<std::string> kSchema = {
    "geometry.kind", "geometry.dim", "geometry.bbox", "geometry.h", "geometry.pad",
    "geometry.axis", "geometry.split", "geometry.local_side",
    "geometry.local_boxes", "geometry.nonlocal_boxes", "geometry.fill",
    "geometry.nonlocal_balls", "geometry.mask", "geometry.origin",
    "model.kind",
    "kernel.kind", "kernel.rho", "kernel.c", "kernel.s", "kernel.eps",
    "gkernel.kind", "gkernel.rho", "gkernel.c",
    "coeff.kind", "coeff.value", "coeff.local", "coeff.nonlocal", "coeff.base", "coeff.amp",
    "coeff.center", "coeff.width",
    "source.kind", "source.value", "source.center", "source.width", "source.freq",
    "force.kind", "force.fx", "force.fy", "force.center", "force.width", "force.freq",
    "dirichlet.kind", "dirichlet.value",
    "elastic.mu", "elastic.lambda",
    "nonlinear.p", "nonlinear.r",
    "solve.tol", "solve.max_iter", "solve.precond",
    "eig.tol", "coercivity.enabled",
    "assembly.include_local", "assembly.include_coupling", "assembly.include_exterior",
    "assembly.include_gamma", "assembly.eliminate_boundary",
    "verify.enabled", "verify.gradient_probes", "verify.fd_h", "verify.analytic",
    "output.field", "output.report",
    "seed",
};

}  // namespace

const std::vector<std::string>& config_schema_keys() { return kSchema; }

ConfigMap ConfigMap::parse_text(const std::string& text) {
  ConfigMap m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value: '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
    if (std::find(kSchema.begin(), kSchema.end(), key) == kSchema.end())
      throw ConfigError("config: unknown key '" + key + "'");
    if (m.entries_.count(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    m.entries_[key] = value;
  }
  return m;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

bool ConfigMap::has(const std::string& key) const { return entries_.count(key) > 0; }

void ConfigMap::set(const std::string& key, const std::string& value) {
  if (std::find(kSchema.begin(), kSchema.end(), key) == kSchema.end())
    throw ConfigError("config: unknown key '" + key + "'");
  entries_[key] = value;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::string ConfigMap::require_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("config: missing required key '" + key + "'");
  return it->second;
}

double ConfigMap::get_real(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : to_real(key, it->second);
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const double v = to_real(key, it->second);
  const int i = static_cast<int>(v);
  if (v != i) throw ConfigError("config: key '" + key + "' expects an integer");
  return i;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config: key '" + key + "' expects true/false");
}

namespace {

Point to_point(const std::string& key, const std::string& v, int dim) {
  const auto parts = to_reals(key, v, ';');
  if (static_cast<int>(parts.size()) != dim)
    throw ConfigError("config: key '" + key + "' expects " + std::to_string(dim) + " value(s)");
  Point p{0, 0};
  for (int a = 0; a < dim; ++a) p[a] = parts[a];
  return p;
}

KernelKind parse_kernel_kind(const std::string& key, const std::string& v, bool allow_fractional) {
  if (v == "top_hat") return KernelKind::TopHat;
  if (v == "trunc_gaussian") return KernelKind::TruncGaussian;
  if (v == "trunc_fractional" && allow_fractional) return KernelKind::TruncFractional;
  throw ConfigError("config: key '" + key + "' has invalid kernel kind '" + v + "'");
}

ScalarPreset parse_scalar_preset(const ConfigMap& m, const std::string& ns, int dim) {
  ScalarPreset p;
  const std::string kind = m.get_string(ns + ".kind", "constant");
  if (kind == "constant") p.kind = ScalarPreset::Kind::Constant;
  else if (kind == "gaussian_bump") p.kind = ScalarPreset::Kind::GaussianBump;
  else if (kind == "separable_sine") p.kind = ScalarPreset::Kind::SeparableSine;
  else throw ConfigError("config: key '" + ns + ".kind' has invalid value '" + kind + "'");
  p.value = m.get_real(ns + ".value", ns == "force" ? 1.0 : 0.0);
  if (m.has(ns + ".center")) p.center = to_point(ns + ".center", m.require_string(ns + ".center"), dim);
  p.width = m.get_real(ns + ".width", 0.25);
  if (m.has(ns + ".freq")) p.freq = to_point(ns + ".freq", m.require_string(ns + ".freq"), dim);
  return p;
}

std::vector<std::array<std::array<double, 2>, 2>> parse_boxes(const std::string& key,
                                                              const std::string& v, int dim) {
  std::vector<std::array<std::array<double, 2>, 2>> out;
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, '|')) {
    const auto axes = split(item, ';');
    if (static_cast<int>(axes.size()) != dim)
      throw ConfigError("config: key '" + key + "': box needs " + std::to_string(dim) + " interval(s)");
    std::array<std::array<double, 2>, 2> box{{{0, 0}, {0, 0}}};
    for (int a = 0; a < dim; ++a) {
      const auto ends = to_reals(key, axes[a], ',');
      if (ends.size() != 2) throw ConfigError("config: key '" + key + "': interval needs two values");
      box[a] = {ends[0], ends[1]};
    }
    out.push_back(box);
  }
  return out;
}

}  // namespace

RunConfig build_run_config(const ConfigMap& m) {
  RunConfig cfg;

  const std::string model = m.require_string("model.kind");
  if (model == "scalar_source") cfg.model = ModelKind::ScalarSource;
  else if (model == "scalar_source_full") cfg.model = ModelKind::ScalarSourceFull;
  else if (model == "scalar_flux") cfg.model = ModelKind::ScalarFlux;
  else if (model == "elastic_source") cfg.model = ModelKind::ElasticSource;
  else if (model == "elastic_flux") cfg.model = ModelKind::ElasticFlux;
  else if (model == "nonlinear") cfg.model = ModelKind::Nonlinear;
  else throw ConfigError("config: unknown model.kind '" + model + "'");

  GeometryConfig& g = cfg.geometry;
  g.kind = m.require_string("geometry.kind");
  g.dim = m.get_int("geometry.dim", 1);
  if (g.dim != 1 && g.dim != 2) throw ConfigError("config: geometry.dim must be 1 or 2");
  g.h = m.get_real("geometry.h", 0.1);
  if (!(g.h > 0)) throw ConfigError("config: geometry.h must be positive");
  g.pad = m.get_int("geometry.pad", -1);
  if (m.has("geometry.bbox")) {
    const auto axes = split(m.require_string("geometry.bbox"), ';');
    if (static_cast<int>(axes.size()) != g.dim)
      throw ConfigError("config: geometry.bbox needs one interval per axis");
    for (int a = 0; a < g.dim; ++a) {
      const auto ends = to_reals("geometry.bbox", axes[a], ',');
      if (ends.size() != 2) throw ConfigError("config: geometry.bbox interval needs two values");
      g.bbox[a] = {ends[0], ends[1]};
    }
  }
  if (g.kind == "halfspace") {
    g.axis = m.get_int("geometry.axis", 0);
    if (g.axis < 0 || g.axis >= g.dim) throw ConfigError("config: geometry.axis out of range");
    g.split = m.get_real("geometry.split", 0.5);
    const std::string side = m.get_string("geometry.local_side", "below");
    if (side != "below" && side != "above")
      throw ConfigError("config: geometry.local_side must be below or above");
    g.local_below = side == "below";
  } else if (g.kind == "boxes") {
    g.local_boxes = parse_boxes("geometry.local_boxes", m.get_string("geometry.local_boxes", ""), g.dim);
    g.nonlocal_boxes =
        parse_boxes("geometry.nonlocal_boxes", m.get_string("geometry.nonlocal_boxes", ""), g.dim);
    const std::string fill = m.get_string("geometry.fill", "exterior");
    if (fill == "exterior") g.fill = Label::Exterior;
    else if (fill == "local") g.fill = Label::Local;
    else if (fill == "nonlocal") g.fill = Label::Nonlocal;
    else throw ConfigError("config: geometry.fill must be local, nonlocal or exterior");
  } else if (g.kind == "balls") {
    const std::string balls = m.get_string("geometry.nonlocal_balls", "");
    if (!trim(balls).empty()) {
      for (const auto& item : split(balls, '|')) {
        const auto vals = to_reals("geometry.nonlocal_balls", item, ',');
        if (static_cast<int>(vals.size()) != g.dim + 1)
          throw ConfigError("config: geometry.nonlocal_balls entries need center and radius");
        std::array<double, 3> ball{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) ball[a] = vals[a];
        ball[2] = vals[g.dim];
        g.nonlocal_balls.push_back(ball);
      }
    }
    const std::string fill = m.get_string("geometry.fill", "local");
    if (fill == "exterior") g.fill = Label::Exterior;
    else if (fill == "local") g.fill = Label::Local;
    else throw ConfigError("config: geometry.fill for balls must be local or exterior");
  } else if (g.kind == "mask") {
    g.mask_path = m.require_string("geometry.mask");
    if (m.has("geometry.origin"))
      g.origin = to_point("geometry.origin", m.require_string("geometry.origin"), g.dim);
  } else {
    throw ConfigError("config: unknown geometry.kind '" + g.kind + "'");
  }

  cfg.kernel.kind = parse_kernel_kind("kernel.kind", m.get_string("kernel.kind", "top_hat"), true);
  cfg.kernel.rho = m.get_real("kernel.rho", 0.25);
  cfg.kernel.c = m.get_real("kernel.c", 1.0);
  cfg.kernel.s = m.get_real("kernel.s", 0.5);
  cfg.kernel.eps = m.get_real("kernel.eps", 0.1);
  if (!(cfg.kernel.rho > 0)) throw ConfigError("config: kernel.rho must be positive");
  if (cfg.kernel.kind == KernelKind::TruncFractional &&
      (cfg.kernel.s <= 0 || cfg.kernel.s >= 1 || cfg.kernel.eps <= 0))
    throw ConfigError("config: trunc_fractional needs s in (0,1) and eps > 0");

  cfg.gkernel.kind = parse_kernel_kind("gkernel.kind", m.get_string("gkernel.kind", "top_hat"), false);
  cfg.gkernel.rho = m.get_real("gkernel.rho", cfg.kernel.rho);
  cfg.gkernel.c = m.get_real("gkernel.c", 1.0);

  const std::string ck = m.get_string("coeff.kind", "constant");
  if (ck == "constant") cfg.coeff.kind = Coefficient::Kind::Constant;
  else if (ck == "piecewise") cfg.coeff.kind = Coefficient::Kind::PiecewiseRegion;
  else if (ck == "radial") cfg.coeff.kind = Coefficient::Kind::Radial;
  else throw ConfigError("config: unknown coeff.kind '" + ck + "'");
  cfg.coeff.value = m.get_real("coeff.value", 1.0);
  cfg.coeff.local = m.get_real("coeff.local", 1.0);
  cfg.coeff.nonlocal = m.get_real("coeff.nonlocal", 1.0);
  cfg.coeff.base = m.get_real("coeff.base", 1.0);
  cfg.coeff.amp = m.get_real("coeff.amp", 0.0);
  if (m.has("coeff.center"))
    cfg.coeff.center = to_point("coeff.center", m.require_string("coeff.center"), g.dim);
  cfg.coeff.width = m.get_real("coeff.width", 1.0);

  cfg.source = parse_scalar_preset(m, "source", g.dim);
  cfg.force.shape = parse_scalar_preset(m, "force", g.dim);
  cfg.force.amp[0] = m.get_real("force.fx", 0.0);
  cfg.force.amp[1] = m.get_real("force.fy", 0.0);

  const std::string dk = m.get_string("dirichlet.kind", "zero");
  if (dk == "zero") cfg.dirichlet.kind = ExteriorDatum::Kind::Zero;
  else if (dk == "constant") {
    cfg.dirichlet.kind = ExteriorDatum::Kind::Constant;
    cfg.dirichlet.value = m.get_real("dirichlet.value", 0.0);
  } else {
    throw ConfigError("config: unknown dirichlet.kind '" + dk + "'");
  }

  cfg.elastic.mu = m.get_real("elastic.mu", 1.0);
  cfg.elastic.lambda = m.get_real("elastic.lambda", 1.0);
  if (model_is_elastic(cfg.model) && (!(cfg.elastic.mu > 0) || !(cfg.elastic.lambda > 0)))
    throw ConfigError("config: elastic.mu and elastic.lambda must be positive");

  cfg.nonlinear_p = m.get_real("nonlinear.p", 2.0);
  cfg.nonlinear_r = m.get_real("nonlinear.r", 2.0);
  if (cfg.model == ModelKind::Nonlinear && (cfg.nonlinear_p <= 1 || cfg.nonlinear_r <= 1))
    throw ConfigError("config: nonlinear exponents must lie in (1, inf)");

  cfg.solve.tol = m.get_real("solve.tol", 1e-10);
  cfg.solve.max_iter = m.get_int("solve.max_iter", 20000);
  const std::string pc = m.get_string("solve.precond", "none");
  if (pc == "none") cfg.solve.precond = Preconditioner::None;
  else if (pc == "jacobi") cfg.solve.precond = Preconditioner::Jacobi;
  else throw ConfigError("config: solve.precond must be none or jacobi");

  cfg.eig.tol = m.get_real("eig.tol", 1e-9);
  cfg.coercivity_enabled = m.get_bool("coercivity.enabled", false);

  cfg.assembly.include_local = m.get_bool("assembly.include_local", true);
  cfg.assembly.include_coupling = m.get_bool("assembly.include_coupling", true);
  cfg.assembly.include_exterior = m.get_bool("assembly.include_exterior", true);
  cfg.assembly.include_gamma = m.get_bool("assembly.include_gamma", true);
  cfg.assembly.eliminate_boundary = m.get_bool("assembly.eliminate_boundary", true);

  cfg.verify.enabled = m.get_bool("verify.enabled", true);
  cfg.verify.gradient_probes = m.get_int("verify.gradient_probes", 5);
  cfg.verify.fd_h = m.get_real("verify.fd_h", 1e-5);
  cfg.verify.analytic = m.get_string("verify.analytic", "none");
  if (cfg.verify.analytic != "none" && cfg.verify.analytic != "sin1d")
    throw ConfigError("config: verify.analytic must be none or sin1d");

  cfg.output_field = m.get_string("output.field", "field.csv");
  cfg.output_report = m.get_string("output.report", "report.txt");
  cfg.seed = static_cast<unsigned long long>(m.get_int("seed", 0));
  return cfg;
}

}  // namespace lnc
