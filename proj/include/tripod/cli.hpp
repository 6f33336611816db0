#ifndef TRIPOD_CLI_HPP
#define TRIPOD_CLI_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "tripod/spectra.hpp"

namespace tripod::cli {

enum class OutputFormat { kCsv, kJson };

// Invalid configuration input; carries the offending line/field for diagnostics.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& message, int line = 0, const std::string& field = {});
  int line;
  std::string field;
};

struct RunConfig {
  SweepSpec sweep;
  bool analyze_extrema = true;
  bool analyze_fwhm = true;
  bool analyze_fits = false;
  bool analyze_excess = false;
  bool analyze_slope = false;
  double min_prominence = 1e-4;
  std::string output_dir = ".";
  OutputFormat output_format = OutputFormat::kCsv;
};

// Flat key-value file, one `key = value` per line, `#` comments, unknown keys
// rejected. Throws ConfigError with line/field diagnostics.
RunConfig parse_config(const std::string& path);

struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<Backend> model;
  std::optional<OutputFormat> format;
  bool quiet = false;
};

// Exit status: 0 success, 1 computation error, 2 invalid configuration.
// Writes one spectrum file per (configuration, power, B) plus
// analysis_summary.json into the output directory; all writes happen after
// computation completes. Reruns on identical input are byte-identical.
// Parallelism is capped by the TRIPOD_EIT_THREADS environment variable
// (0 or unset = hardware concurrency).
int run(const std::string& config_path, const Overrides& overrides = {});

// Number of worker threads after applying TRIPOD_EIT_THREADS.
int effective_threads();

}  // namespace tripod::cli

#endif
