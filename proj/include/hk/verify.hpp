#pragma once

// Verification suites driven by the command-line front end.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hk::verify {

enum class Status { Pass, Fail, OutOfWindow };

struct Check {
  std::string name;
  Status status = Status::Pass;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  //! Out-of-window checks never fail a report.
  bool pass() const;
  nlohmann::ordered_json to_json() const;
  //! measured <= tolerance decides the status; NaN fails.
  void add(std::string name, double measured, double tolerance);
  void add_out_of_window(std::string name, double measured, double tolerance);
};

struct Options {
  std::vector<int> dims;       // empty: suite default
  std::string fields_path;     // lattice
  int n_sites = 0;             // lattice, 0: 512 (d = 1) or 48 (d = 2)
  std::vector<double> s_values; // lattice, empty: x in {1/4, 1, 4}
  std::optional<double> eps;   // lattice amplitude scale
  int x_points = 20;           // diagrams
  unsigned seed = 20261018;    // projectors
};

const std::vector<std::string> &suite_names();

//! ConfigError for an unknown suite or missing inputs.
Report run(const std::string &suite, const Options &opt);

std::string status_name(Status s);

} // namespace hk::verify
