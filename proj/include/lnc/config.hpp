#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lnc/elastic_models.hpp"
#include "lnc/solvers.hpp"

namespace lnc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key=value configuration with dotted namespaces. '#' starts a
/// comment; keys are validated against a fixed schema and unknown or
/// duplicate keys are hard errors.
class ConfigMap {
public:
  static ConfigMap parse_text(const std::string& text);
  static ConfigMap parse_file(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

private:
  std::map<std::string, std::string> entries_;
};

struct GeometryConfig {
  std::string kind;  // halfspace | boxes | balls | mask
  int dim = 1;
  std::array<std::array<double, 2>, 2> bbox{{{0, 1}, {0, 1}}};
  double h = 0.1;
  int pad = -1;  // -1: derive from the kernel horizon
  // halfspace
  int axis = 0;
  double split = 0.5;
  bool local_below = true;
  // boxes
  std::vector<std::array<std::array<double, 2>, 2>> local_boxes, nonlocal_boxes;
  Label fill = Label::Exterior;
  // balls
  std::vector<std::array<double, 3>> nonlocal_balls;  // cx, cy, radius
  // mask
  std::string mask_path;
  Point origin{0, 0};
};

struct VerifySettings {
  bool enabled = true;
  int gradient_probes = 5;
  double fd_h = 1e-5;
  std::string analytic = "none";  // none | sin1d
};

struct RunConfig {
  GeometryConfig geometry;
  ModelKind model = ModelKind::ScalarSource;
  KernelSpec kernel;
  SurfaceKernelSpec gkernel;
  Coefficient coeff;
  ScalarPreset source;
  VectorPreset force;
  ExteriorDatum dirichlet;
  ElasticParams elastic;
  double nonlinear_p = 2.0, nonlinear_r = 2.0;
  SolveSettings solve;
  EigSettings eig;
  bool coercivity_enabled = false;
  AssemblyOptions assembly;
  VerifySettings verify;
  std::string output_field = "field.csv";
  std::string output_report = "report.txt";
  unsigned long long seed = 0;
};

/// Validate against the schema and build the typed configuration.
/// Throws ConfigError with a message naming the offending key.
RunConfig build_run_config(const ConfigMap& map);

const std::vector<std::string>& config_schema_keys();

}  // namespace lnc
