// Command-line front end: runs a sweep described by a config file and writes
// spectrum tables plus an analysis summary.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "tripod/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tripod double-dark-resonance spectrum simulator"};

  std::string config_path;
  std::string output_dir;
  std::string model;
  std::string format;
  bool quiet = false;

  app.add_option("--config", config_path, "path to the run configuration file")->required();
  app.add_option("--output", output_dir, "output directory (overrides the config)");
  app.add_option("--model", model, "susceptibility backend: analytic|numeric");
  app.add_option("--format", format, "spectrum file format: csv|json");
  app.add_flag("--quiet", quiet, "suppress the completion message");

  CLI11_PARSE(app, argc, argv);

  tripod::cli::Overrides overrides;
  overrides.quiet = quiet;
  if (!output_dir.empty()) overrides.output_dir = output_dir;
  try {
    if (!model.empty()) overrides.model = tripod::backend_from_string(model);
    if (!format.empty()) {
      if (format == "csv") {
        overrides.format = tripod::cli::OutputFormat::kCsv;
      } else if (format == "json") {
        overrides.format = tripod::cli::OutputFormat::kJson;
      } else {
        std::cerr << "unknown format '" << format << "' (expected csv or json)\n";
        return 2;
      }
    }
  } catch (const std::exception& err) {
    std::cerr << err.what() << "\n";
    return 2;
  }

  return tripod::cli::run(config_path, overrides);
}
