#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracspec/config.hpp"
#include "fracspec/variational.hpp"

namespace fracspec {

inline constexpr const char* kToolVersion = "0.1.0";

/// A flat numeric table persisted as CSV.
struct CurveTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct StageError {
  std::string stage;
  std::string type;
  std::string message;
};

struct Report {
  std::string command;
  std::string fingerprint;
  nlohmann::json config;
  std::vector<Verdict> verdicts;
  /// Command-specific results (eigenvalue tables, Gamma values, ...).
  nlohmann::json results = nlohmann::json::object();
  std::vector<StageError> errors;
  std::vector<CurveTable> curves;

  /// No failed verdict and no stage error.
  bool ok() const;
};

Report cmd_solve(const RunConfig& config);
Report cmd_verify(const RunConfig& config);
/// Throws InvalidArgument when the config has no [sweep] section.
Report cmd_sweep(const RunConfig& config);
/// Dense cross-check of the matrix-free eigenvalues and Gamma values.
Report cmd_oracle(const RunConfig& config);

/// Shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
std::string format_double(double value);

/// The report document. Everything except the "timestamp" member is a pure
/// function of the config in serial mode.
std::string render_json(const Report& report, const std::string& timestamp);
std::string render_csv(const CurveTable& table);

/// UTC time in ISO 8601.
std::string current_timestamp();

/// Writes <command>-<fingerprint>.json and <command>-<fingerprint>-<curve>.csv
/// atomically (write then rename). Throws IoError.
std::vector<std::filesystem::path> write_report(const Report& report,
                                                const std::filesystem::path& directory,
                                                const std::vector<std::string>& formats,
                                                const std::string& timestamp = current_timestamp());

}  // namespace fracspec
