#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l1quad/bounds.hpp"
#include "l1quad/errors.hpp"
#include "l1quad/sim_engine.hpp"

namespace l1quad {

/// Raised for malformed or invalid configuration text. `line` and `column` are 1-based;
/// both are 0 when the problem is not tied to a location (for example a --set override).
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, int line, int column, const std::string& what)
      : Error(code, line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                             : what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// How `certify` obtains c1, c2, psi1, H and the uncertainty bounds.
struct CertifySettings {
  std::optional<double> c1, c2, psi1, H;  // pinned when present, searched otherwise
  bool calibrate = true;                  // sample the scenario for the bounds
  bool tube = true;                       // evaluate rho, zeta, mu and the sampling conditions
  bool bounds_given = false;              // explicit delta/L values were supplied
  int search_grid = 41;
  int time_samples = 1201;
  int state_samples = 40;
  double margin = 1.2;
  std::optional<double> rho;  // tube radius for the simulate verdict
};

struct AppConfig {
  SimConfig sim;
  CertificationInputs cert;
  CertifySettings certify;
  SweepGrid sweep;
  unsigned sweep_threads = 0;
  std::vector<double> estimate_sample_times{0.005, 0.0025, 0.00125, 0.000625};
  bool compare_modes = false;  // simulate also runs the opposite L1 mode
};

/// Parses the sectioned key = value format. Omitted fields keep their defaults; `overrides`
/// are "section.key=value" strings applied after the text. Throws ConfigError with
/// ParseError, UnknownKey or RangeError.
AppConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Reads the file and parses it. Throws Error(Io) with the path when unreadable.
AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace l1quad
