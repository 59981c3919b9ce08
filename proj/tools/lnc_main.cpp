#include <CLI11.hpp>

#include <iostream>

#include "lnc/runner.hpp"

namespace {

int load_and_run(const std::string& config_path, const std::string& out_dir, bool strict,
                 bool check_only) {
  lnc::ConfigMap cm;
  lnc::RunConfig cfg;
  try {
    cm = lnc::ConfigMap::parse_file(config_path);
    cfg = lnc::build_run_config(cm);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const lnc::RunOutcome out = lnc::run(cfg, out_dir, strict, check_only);
    const auto& adm = out.admissibility;
    std::cout << "admissibility: (1)=" << (adm.pass_local_connected ? "pass" : "fail")
              << " (2)=" << (adm.pass_nl_delta_connected ? "pass" : "fail")
              << " (P1)=" << (adm.pass_p1 ? "pass" : "fail")
              << " (P2)=" << (adm.pass_p2 ? "pass" : "fail")
              << " delta=" << lnc::format_double(adm.delta) << "\n";
    if (out.exit_code == 3) {
      std::cerr << "admissibility failed in strict mode\n";
      return 3;
    }
    if (check_only) return 0;
    std::cout << "solve: n=" << out.system_size << " iters=" << out.solve.iterations
              << " rel_residual=" << lnc::format_double(out.solve.rel_residual)
              << " energy=" << lnc::format_double(out.energy)
              << (out.solve.converged ? "" : " (not converged)") << "\n";
    if (out.exit_code == 4) {
      std::cerr << "solver did not converge\n";
      return 4;
    }
    if (out.coercivity_computed)
      std::cout << "coercivity: lambda_min=" << lnc::format_double(out.coercivity.lambda_min)
                << "\n";
    for (const auto& r : out.records)
      std::cout << "verify: " << r.name << " value=" << lnc::format_double(r.value)
                << " threshold=" << lnc::format_double(r.threshold)
                << (r.pass ? " pass" : " FAIL") << "\n";
    if (out.exit_code == 5) {
      std::cerr << "verification failed\n";
      return 5;
    }
    return 0;
  } catch (const lnc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled local/nonlocal variational solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  bool strict = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "configuration file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_flag("--strict", strict, "fail (exit 3) when admissibility does not hold");
  };

  CLI::App* solve = app.add_subcommand("solve", "assemble, minimize and verify");
  add_common(solve);

  CLI::App* check = app.add_subcommand("check", "admissibility checks only");
  add_common(check);

  CLI::App* sweep = app.add_subcommand("sweep", "run once per value of a config key");
  add_common(sweep);
  std::string param;
  std::string values_csv;
  sweep->add_option("--param", param, "config key to sweep")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return load_and_run(config_path, out_dir, strict, false);
  if (check->parsed()) return load_and_run(config_path, out_dir, strict, true);

  // sweep
  lnc::ConfigMap cm;
  try {
    cm = lnc::ConfigMap::parse_file(config_path);
    std::vector<std::string> values;
    std::string cur;
    for (char c : values_csv) {
      if (c == ',') {
        if (!cur.empty()) values.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) values.push_back(cur);
    return lnc::sweep(cm, param, values, out_dir, strict);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
