#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wkb/harness.hpp"

namespace wkb {

// Flat key = value configuration with dotted section keys, '#' comments.
// Parsing validates everything it can and reports ALL problems, each with
// its line number.
struct RunConfig {
  // model
  std::string preset = "hyperbolic-nls";  // also: davey-stewartson-2, free, custom
  int d = 2;
  std::vector<double> H;     // row-major d*d (custom preset)
  std::vector<double> beta;  // d entries
  double alpha = 1.0;
  int gamma = 1;
  std::vector<int> sigma;               // custom nonlocal terms
  std::vector<std::string> kernels;     // identity | zero | ds(p,q) | tab(path)
  std::vector<double> kernel_weights;   // optional, defaults to 1
  double strength = 1.0;                // hyperbolic-nls kernel weight
  double chi = 1.0;
  double omega = -2.0;
  bool ds_integrable = true;
  std::vector<double> epsilon = {0.25,     0.125,     0.0625,
                                 0.03125,  0.015625,  0.0078125};
  double ell = 2.0;
  double w0 = 1.0;
  std::string M = "auto";  // or a number
  double safety = 4.0;
  std::string V = "zero";  // or a snapshot path
  // grid
  std::vector<int> n = {64, 64};
  std::vector<double> L;  // empty: 2*pi per axis
  // data
  std::string data = "analytic";  // or "snapshot"
  std::string phi0_path, a0_path, phi10_path, a10_path;
  double data_norm = 0.5;
  std::string normalize_index = "auto";  // auto (= ell+2) or base
  // plan
  double dt = 5e-4;
  std::string T = "auto";  // or a number
  double t_fraction = 0.8;
  double t_max = 0.5;
  // run
  std::string system = "grenier";  // grenier | limit | linearized | nls
  // picard
  int picard_jmax = 12;
  double picard_tol = 1e-10;
  // check-spaces
  long check_trials = 10000;
  long bilinear_truncation = 10000;
  // misc
  std::uint64_t seed = 1;
};

struct ParseError {
  int line = 0;
  std::string message;
};

struct ParseResult {
  RunConfig config;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

ParseResult parse_config(const std::string& text);
// Canonical form: parsing it reproduces the same configuration bit for bit.
std::string print_config(const RunConfig& config);

Grid grid_from_config(const RunConfig& config);
ModelParams params_from_config(const RunConfig& config, const Grid& grid);
// Resolve everything (data, M, T) into a runnable scenario.
CaseSetup setup_from_config(const RunConfig& config);

}  // namespace wkb
