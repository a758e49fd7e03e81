#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracspec/commands.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/execution.hpp"

namespace {

enum ExitCode { kOk = 0, kChecksFailed = 1, kBadConfig = 2, kIoFailure = 3 };

int run(const std::string& command, const std::string& config_path,
        const std::optional<std::string>& out, bool serial, const std::optional<std::uint64_t>& seed) {
  fracspec::set_serial(serial);
  fracspec::RunConfig config;
  try {
    config = fracspec::load_config(config_path);
    if (seed) config.solve.seed = *seed;
    if (out) config.output.directory = *out;
  } catch (const fracspec::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const fracspec::Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kBadConfig;
  }

  fracspec::Report report;
  try {
    if (command == "solve") report = fracspec::cmd_solve(config);
    else if (command == "verify") report = fracspec::cmd_verify(config);
    else if (command == "sweep") report = fracspec::cmd_sweep(config);
    else report = fracspec::cmd_oracle(config);
  } catch (const fracspec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadConfig;
  }

  for (const auto& v : report.verdicts) {
    std::printf("%-18s %s\n", fracspec::to_string(v.status).c_str(), v.name.c_str());
  }
  for (const auto& e : report.errors) {
    std::printf("error in %s: %s: %s\n", e.stage.c_str(), e.type.c_str(), e.message.c_str());
  }
  try {
    for (const auto& path : fracspec::write_report(report, config.output.directory,
                                                   config.output.formats)) {
      std::printf("wrote %s\n", path.string().c_str());
    }
  } catch (const fracspec::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  }
  return report.ok() ? kOk : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral verification of fractional Schroedinger operators"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> out;
  bool serial = false;
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out, "Directory for reports (overrides [output] directory)");
  app.add_flag("--serial", serial, "Run every loop on one thread");
  app.add_option("--seed", seed, "Override [solve] seed");

  std::string config_path;
  std::string chosen;
  const std::pair<const char*, const char*> commands[] = {
      {"solve", "Lowest eigenpairs of L_beta"},
      {"verify", "Run the verification checks"},
      {"sweep", "Solve over the [sweep] parameter values"},
      {"oracle", "Cross-check against dense diagonalization"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "INI configuration file")->required();
    sub->callback([&chosen, name = std::string(name)] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run(chosen, config_path, out, serial, seed);
}
