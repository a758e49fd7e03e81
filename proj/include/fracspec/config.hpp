#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracspec/potentials.hpp"
#include "fracspec/variational.hpp"

namespace fracspec {

struct GridConfig {
  int dimension = 1;
  double half_length = 20.0;
  std::size_t points = 256;
  double order = 0.25;
};

struct OperatorConfig {
  double beta = 1.0;
  PotentialDescriptor potential = GaussianWell{1.0, 1.0};
  double tail_tol = kDefaultTailTol;
};

struct SolveConfig {
  int k = 5;
  double tol = 1e-9;
  int max_iter = 5000;
  int block_size = 0;
  std::uint64_t seed = 42;
};

struct VerifyConfig {
  std::vector<std::string> checks;
  double implication_tol = 1e-6;
  /// Empty selects the geometric schedule 1, 1/2, 1/4, ... to the smallest
  /// feasible t.
  std::vector<double> t_list;
  /// Wide box for the dilation curve; parse_config picks 400 / 512 in 2-D.
  double dilation_half_length = 40000.0;
  std::size_t dilation_points = 65536;
  double probe_width = 4.0;
  double max_wrapped_fraction = 1e-8;
  std::size_t path_samples = 101;
  std::size_t quadratic_cap = kDefaultQuadraticCap;
  std::size_t dense_cap = 4096;
  CheckTolerances tolerances;
};

struct SweepConfig {
  /// Empty when the config has no [sweep] section.
  std::string parameter;
  std::vector<double> values;
  bool present() const { return !parameter.empty(); }
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  std::vector<std::string> formats = {"json", "csv"};
};

struct RunConfig {
  GridConfig grid;
  OperatorConfig op;
  SolveConfig solve;
  VerifyConfig verify;
  SweepConfig sweep;
  OutputConfig output;
};

/// Every check name cmd_verify understands, in execution order.
const std::vector<std::string>& all_check_names();

/// Parses INI text. Throws ParseError on syntax errors and unknown sections or
/// keys, ValidationError listing every violated constraint.
RunConfig parse_config(const std::string& text);
/// parse_config on the contents of a file; IoError when unreadable.
RunConfig load_config(const std::filesystem::path& path);

/// Re-checks every cross-field constraint; throws ValidationError.
void validate_config(const RunConfig& config);

/// Deterministic JSON of every field that affects computed numbers (the
/// [output] block is excluded).
nlohmann::json canonical_json(const RunConfig& config);
/// FNV-1a 64 of canonical_json(config).dump().
std::uint64_t fingerprint(const RunConfig& config);
/// 16 lowercase hex digits.
std::string fingerprint_hex(const RunConfig& config);

}  // namespace fracspec
