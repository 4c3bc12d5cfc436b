#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "checks.hpp"
#include "report.hpp"

namespace rck {

// Run configuration, parsed from the plain-text key/value format described
// in the README.  Expression strings are double-quoted; metric matrices are
// `{ ... }` blocks with one row per line.
struct RunConfig {
  int format_version = 1;
  std::vector<std::string> chart;
  std::vector<std::vector<std::string>> metric;
  std::optional<std::string> f, phi;
  std::optional<std::string> f_file;          // radial field file for f
  // h: "1"/"f" markers or a quoted expression
  std::optional<std::string> h;
  bool h_is_marker = false;
  // lambda: bare number or quoted expression
  std::optional<std::string> lambda_expr;
  std::optional<double> lambda_const;

  std::string construction = "none";  // none | warped | sss | walker
  std::vector<std::string> base_chart, fiber_chart;
  std::vector<std::vector<std::string>> base_metric, fiber_metric;
  std::optional<std::string> warp_phi;
  std::optional<double> warp_mu;
  std::optional<std::string> sss_h;
  std::string sss_time = "t";
  std::optional<std::string> walker_a, walker_b, walker_c;

  std::vector<std::pair<std::string, std::pair<double, double>>> region;
  int samples = 200;
  uint64_t seed = 12345;
  int orientation = 1;
  double gqe_m = 4.0;
  std::vector<std::string> checks;
  std::vector<std::pair<std::string, double>> tolerances;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Assembles the instance a config describes (builds constructions, parses
// fields, resolves the sample region).  Throws ConfigError on any problem.
Instance build_instance(const RunConfig& cfg);

// Executes every requested check.
Report run_config(const RunConfig& cfg);

}  // namespace rck
