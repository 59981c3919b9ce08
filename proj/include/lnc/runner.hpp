#pragma once

#include <filesystem>

#include "lnc/config.hpp"
#include "lnc/verify.hpp"

namespace lnc {

// shortest decimal representation that round-trips to the same double
std::string format_double(double v);

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 3 admissibility (strict), 4 no convergence, 5 verification
  AdmissibilityReport admissibility;
  SolveReport solve;
  CoercivityReport coercivity;
  bool coercivity_computed = false;
  std::vector<VerificationRecord> records;
  double energy = 0;
  int system_size = 0;
};

GridDomain build_grid_from_config(const RunConfig& cfg);

/// check -> assemble -> solve -> verify; writes the field CSV and the
/// key=value report under out_dir.
RunOutcome run(const RunConfig& cfg, const std::filesystem::path& out_dir, bool strict,
               bool check_only = false);

/// One run per value of the swept key; per-run artifacts go to
/// out_dir/<key>=<value>/, the summary CSV to out_dir/summary.csv.
/// Returns the first failing member's exit code, 0 otherwise.
int sweep(const ConfigMap& base, const std::string& param, const std::vector<std::string>& values,
          const std::filesystem::path& out_dir, bool strict);

// report files are key=value text in the config syntax, so they re-parse
// with the same reader; values use round-trip formatting
std::map<std::string, std::string> parse_report_file(const std::filesystem::path& path);

}  // namespace lnc
