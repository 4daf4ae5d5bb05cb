#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "l1quad/config.hpp"

namespace l1quad {

/// Exit statuses shared by every subcommand.
enum ExitStatus : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

struct RunManifest {
  std::string config_path;  // empty means all defaults
  std::string out_dir = ".";
  std::string subcommand;
  std::vector<std::string> overrides;
  bool quiet = false;
};

struct CertificationRun {
  CertificationInputs inputs;
  BoundCertificate certificate;
  SearchResult search;
  double psi0 = 0.0;
  bool region_of_attraction = false;
  std::string calibration_grid;
};

/// Search (unless pinned), initial-condition constants, calibration (when enabled) and the
/// full certificate for the configured scenario.
CertificationRun run_certification(const AppConfig& cfg);

int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream& err);
int cmd_certify(const RunManifest& m, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunManifest& m, std::ostream& out, std::ostream& err);
int cmd_estimate_check(const RunManifest& m, std::ostream& out, std::ostream& err);

/// Dispatches on m.subcommand; configuration errors map to kExitUsage.
int run_command(const RunManifest& m, std::ostream& out, std::ostream& err);

}  // namespace l1quad
