#pragma once

#include "hdgpod/assembly.hpp"
#include "hdgpod/fom.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdgpod {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce one run.
struct RunConfig {
  std::string problem = "square";  // square | cube | manufactured | custom
  int dim = 2;
  int n = 32;
  int k = 1;
  double c = 100.0;  // flux coefficient 1/a, i.e. diffusivity 0.01
  double tau = 1.0;
  double dt = 0.001;
  double T = 1.0;
  std::string u0 = "sin(pi*x)*sin(pi*y)*exp(x)*cos(y)";
  std::string f = "0";
  std::vector<int> r_list = {7, 10, 13, 16, 20};
  std::string out = "out";
  int snapshot_stride = 1;  // keep every stride-th snapshot
  std::string pod_method = "svd";  // svd | snapshots
  int max_modes = -1;  // stored modes per variable, -1 for all
  std::uint64_t seed = 1;
  int threads = 1;

  /// Exact solution for the manufactured problem, empty otherwise.
  [[nodiscard]] std::string exact_solution() const;
  [[nodiscard]] bool zero_source() const;
  /// Named constants visible in u0 and f.
  [[nodiscard]] std::map<std::string, double> constants() const;
  /// Throws ConfigError naming the first invalid field.
  void validate() const;
  /// key=value lines in a fixed order; reading them back gives the same config.
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Preset by name; throws ConfigError for unknown names.
RunConfig preset(const std::string& name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Sets one field from its text value.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value text: one setting per line, '#' starts a comment.
void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& origin = "config");
void apply_config_file(RunConfig& cfg, const std::string& path);

std::vector<int> parse_int_list(const std::string& text);

/// Writes the config as "# key=value" manifest lines.
void write_manifest(std::ostream& os, const RunConfig& cfg,
                    const std::map<std::string, std::string>& extra = {});

/// Reads "# key=value" manifest lines at the head of a stream.
std::map<std::string, std::string> read_manifest(std::istream& in);

/// Discretisation, initial scalar coefficients and load callback for a config.
struct Problem {
  std::shared_ptr<const Discretization> disc;
  HdgSystem system;
  Eigen::VectorXd beta0;
  LoadFunction load;  // empty for f = 0
};

Problem build_problem(const RunConfig& cfg);

}  // namespace hdgpod
