#include "tripod/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tripod/analysis.hpp"
#include "tripod/analytic.hpp"

namespace tripod::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

ConfigError::ConfigError(const std::string& message, int line_number, const std::string& field_name)
    : std::runtime_error(message), line(line_number), field(field_name) {}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("field '" + field + "': expected a number, got '" + value + "'", line,
                      field);
  }
}

int parse_int(const std::string& value, int line, const std::string& field) {
  const double parsed = parse_double(value, line, field);
  const int as_int = static_cast<int>(parsed);
  if (static_cast<double>(as_int) != parsed) {
    throw ConfigError("field '" + field + "': expected an integer, got '" + value + "'", line,
                      field);
  }
  return as_int;
}

bool parse_bool(const std::string& value, int line, const std::string& field) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("field '" + field + "': expected true/false, got '" + value + "'", line,
                    field);
}

std::vector<double> parse_double_list(const std::string& value, int line,
                                      const std::string& field) {
  std::vector<double> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, line, field));
  }
  return out;
}

// Locale-independent shortest representation with up to 12 significant digits.
std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
  return std::string(buffer, result.ptr);
}

struct RateOverrides {
  double gamma0_s = 1e7;
  double gammaT_s = 1e3;
  double gammaR_s = 1e4;
  RateScaling scaling = RateScaling::kAngular;
};

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("cannot open config file '" + path + "'");
  }

  RunConfig config;
  RateOverrides rates;
  std::map<std::string, int> seen;

  std::string raw_line;
  int line_number = 0;
  while (std::getline(file, raw_line)) {
    ++line_number;
    std::string line = raw_line;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'",
                        line_number);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_number) + ": empty key or value",
                        line_number, key);
    }
    if (seen.count(key)) {
      throw ConfigError("line " + std::to_string(line_number) + ": duplicate key '" + key +
                            "' (first on line " + std::to_string(seen[key]) + ")",
                        line_number, key);
    }
    seen[key] = line_number;

    try {
      if (key == "configuration") {
        config.sweep.configuration = configuration_from_string(value);
      } else if (key == "model") {
        config.sweep.model = backend_from_string(value);
      } else if (key == "delta_min_hz") {
        config.sweep.delta_min_hz = parse_double(value, line_number, key);
      } else if (key == "delta_max_hz") {
        config.sweep.delta_max_hz = parse_double(value, line_number, key);
      } else if (key == "points") {
        config.sweep.points = parse_int(value, line_number, key);
      } else if (key == "powers_mW") {
        config.sweep.powers_mW = parse_double_list(value, line_number, key);
        if (config.sweep.powers_mW.empty()) {
          throw ConfigError("powers_mW must be non-empty", line_number, key);
        }
      } else if (key == "b_fields_mG") {
        config.sweep.b_fields_mG = parse_double_list(value, line_number, key);
        if (config.sweep.b_fields_mG.empty()) {
          throw ConfigError("b_fields_mG must be non-empty", line_number, key);
        }
      } else if (key == "optical_depth") {
        config.sweep.optical_depth = parse_double(value, line_number, key);
      } else if (key == "coupling_detuning_hz") {
        config.sweep.coupling_detuning_bar =
            scale_frequency(parse_double(value, line_number, key));
      } else if (key == "probe_ratio") {
        config.sweep.probe_ratio = parse_double(value, line_number, key);
      } else if (key == "gamma0_s") {
        rates.gamma0_s = parse_double(value, line_number, key);
      } else if (key == "gammaT_s") {
        rates.gammaT_s = parse_double(value, line_number, key);
      } else if (key == "gammaR_s") {
        rates.gammaR_s = parse_double(value, line_number, key);
      } else if (key == "rate_scaling") {
        if (value == "angular") {
          rates.scaling = RateScaling::kAngular;
        } else if (value == "linear") {
          rates.scaling = RateScaling::kLinear;
        } else {
          throw ConfigError("rate_scaling must be angular or linear", line_number, key);
        }
      } else if (key == "analyze_extrema") {
        config.analyze_extrema = parse_bool(value, line_number, key);
      } else if (key == "analyze_fwhm") {
        config.analyze_fwhm = parse_bool(value, line_number, key);
      } else if (key == "analyze_fits") {
        config.analyze_fits = parse_bool(value, line_number, key);
      } else if (key == "analyze_excess") {
        config.analyze_excess = parse_bool(value, line_number, key);
      } else if (key == "analyze_slope") {
        config.analyze_slope = parse_bool(value, line_number, key);
      } else if (key == "min_prominence") {
        config.min_prominence = parse_double(value, line_number, key);
      } else if (key == "output_dir") {
        config.output_dir = value;
      } else if (key == "output_format") {
        if (value == "csv") {
          config.output_format = OutputFormat::kCsv;
        } else if (value == "json") {
          config.output_format = OutputFormat::kJson;
        } else {
          throw ConfigError("output_format must be csv or json", line_number, key);
        }
      } else {
        throw ConfigError("line " + std::to_string(line_number) + ": unknown key '" + key + "'",
                          line_number, key);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& err) {
      throw ConfigError("line " + std::to_string(line_number) + ", field '" + key +
                            "': " + err.what(),
                        line_number, key);
    }
  }

  try {
    config.sweep.rates =
        RelaxationRates::from_si(rates.gamma0_s, rates.gammaT_s, rates.gammaR_s, rates.scaling);
    config.sweep.validate();
  } catch (const std::exception& err) {
    throw ConfigError(std::string("invalid sweep: ") + err.what());
  }
  return config;
}

int effective_threads() {
  const char* env = std::getenv("TRIPOD_EIT_THREADS");
  int threads = 0;
  if (env != nullptr) {
    threads = std::atoi(env);
    if (threads < 0) threads = 0;
  }
  if (threads == 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads == 0) threads = 1;
  }
  return threads;
}

namespace {

std::string spectrum_file_stem(const SpectrumRow& row) {
  std::ostringstream name;
  name << "spectrum_" << to_string(row.config) << "_" << format_double(row.power_mW) << "mW_"
       << format_double(row.b_mG) << "mG";
  return name.str();
}

std::string spectrum_csv(const SpectrumTable& table, const std::vector<std::size_t>& idx) {
  std::ostringstream out;
  out << "config,power_mW,b_mG,delta_hz,re_chi,im_chi,transmission\n";
  for (std::size_t i : idx) {
    const SpectrumRow& row = table.rows[i];
    out << to_string(row.config) << ',' << format_double(row.power_mW) << ','
        << format_double(row.b_mG) << ',' << format_double(row.delta_hz) << ','
        << format_double(row.re_chi) << ',' << format_double(row.im_chi) << ','
        << format_double(row.transmission) << '\n';
  }
  return out.str();
}

std::string spectrum_json(const SpectrumTable& table, const std::vector<std::size_t>& idx) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i : idx) {
    const SpectrumRow& row = table.rows[i];
    rows.push_back({{"config", to_string(row.config)},
                    {"power_mW", row.power_mW},
                    {"b_mG", row.b_mG},
                    {"delta_hz", row.delta_hz},
                    {"re_chi", row.re_chi},
                    {"im_chi", row.im_chi},
                    {"transmission", row.transmission}});
  }
  return rows.dump(2) + "\n";
}

ordered_json feature_json(const SpectralFeature& feature) {
  return {{"kind", feature.kind == FeatureKind::kMaximum ? "maximum" : "minimum"},
          {"center_hz", feature.center_hz},
          {"height", feature.height},
          {"prominence", feature.prominence}};
}

ordered_json fit_json(const FitResult& fit) {
  return {{"model", to_string(fit.model_kind)},
          {"parameters", fit.parameters},
          {"uncertainties", fit.uncertainties},
          {"residual_rms", fit.residual_rms},
          {"converged", fit.converged},
          {"iterations", fit.iterations}};
}

}  // namespace

int run(const std::string& config_path, const Overrides& overrides) {
  RunConfig config;
  try {
    config = parse_config(config_path);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  }
  if (overrides.model) config.sweep.model = *overrides.model;
  if (overrides.format) config.output_format = *overrides.format;
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;

  const int threads = effective_threads();

  SpectrumTable table;
  ordered_json summary;
  std::map<std::string, std::string> files;  // name -> contents, written after computation
  try {
    table = run_sweep(config.sweep, threads);

    summary["configuration"] = to_string(config.sweep.configuration);
    summary["model"] = to_string(config.sweep.model);
    summary["optical_depth"] = config.sweep.optical_depth;
    summary["spectra"] = ordered_json::array();

    std::map<double, std::vector<FieldSpectrum>> by_power;

    for (double power : config.sweep.powers_mW) {
      for (double b : config.sweep.b_fields_mG) {
        const std::vector<std::size_t> idx = table.spectrum_indices(power, b);
        const std::vector<double> xs = table.deltas_hz(idx);
        const std::vector<double> ts = table.transmissions(idx);

        const std::string stem = spectrum_file_stem(table.rows[idx.front()]);
        if (config.output_format == OutputFormat::kCsv) {
          files[stem + ".csv"] = spectrum_csv(table, idx);
        } else {
          files[stem + ".json"] = spectrum_json(table, idx);
        }

        ordered_json entry;
        entry["file"] = stem + (config.output_format == OutputFormat::kCsv ? ".csv" : ".json");
        entry["power_mW"] = power;
        entry["b_mG"] = b;

        std::vector<SpectralFeature> features;
        if (config.analyze_extrema || config.analyze_fwhm || config.analyze_slope) {
          features = find_extrema(xs, ts, config.min_prominence);
        }
        if (config.analyze_extrema) {
          ordered_json list = ordered_json::array();
          for (const SpectralFeature& f : features) list.push_back(feature_json(f));
          entry["extrema"] = list;
        }
        if (config.analyze_fwhm) {
          ordered_json list = ordered_json::array();
          for (const SpectralFeature& f : features) {
            ordered_json item = feature_json(f);
            try {
              item["fwhm_hz"] = feature_fwhm(xs, ts, f);
            } catch (const std::runtime_error&) {
              item["fwhm_hz"] = nullptr;  // crossing outside the sweep window
            }
            list.push_back(item);
          }
          entry["fwhm"] = list;
        }
        if (config.analyze_fits) {
          const FitModelKind kind = config.sweep.configuration == Configuration::kSigmaProbe
                                        ? FitModelKind::kDoubleLorentzian
                                        : FitModelKind::kIncoherentTwoEit;
          entry["fit"] = fit_json(fit_model(xs, ts, kind));
        }
        if (config.analyze_excess) {
          entry["incoherent_excess"] = incoherent_excess(xs, ts, config.sweep.optical_depth);
        }
        by_power[power].push_back({b, xs, ts});
        summary["spectra"].push_back(entry);
      }
    }

    if (config.analyze_slope) {
      ordered_json slopes = ordered_json::array();
      for (const auto& [power, spectra] : by_power) {
        std::vector<FieldSpectrum> resolved;
        for (const FieldSpectrum& s : spectra) {
          if (s.b_mG != 0.0) resolved.push_back(s);
        }
        ordered_json entry;
        entry["power_mW"] = power;
        try {
          entry["separation_slope_hz_per_mG"] = separation_slope(resolved, config.min_prominence);
        } catch (const std::invalid_argument&) {
          entry["separation_slope_hz_per_mG"] = nullptr;  // peaks not resolved at >= 2 fields
        }
        slopes.push_back(entry);
      }
      summary["separation_slopes"] = slopes;
    }
  } catch (const std::exception& err) {
    std::cerr << "computation error: " << err.what() << "\n";
    return 1;
  }

  // All computation done; now write the artifacts.
  try {
    fs::create_directories(config.output_dir);
    for (const auto& [name, contents] : files) {
      std::ofstream out(fs::path(config.output_dir) / name, std::ios::binary);
      out << contents;
      if (!out) throw std::runtime_error("failed to write " + name);
    }
    std::ofstream out(fs::path(config.output_dir) / "analysis_summary.json", std::ios::binary);
    out << summary.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed to write analysis_summary.json");
  } catch (const std::exception& err) {
    std::cerr << "output error: " << err.what() << "\n";
    return 1;
  }

  if (!overrides.quiet) {
    std::cout << "wrote " << files.size() << " spectrum files and analysis_summary.json to "
              << config.output_dir << "\n";
  }
  return 0;
}

}  // namespace tripod::cli
