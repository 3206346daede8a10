// Seeded Monte Carlo experiments over (b, n) grids and their CSV/JSON reports.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orderstat/ambiguity.hpp"
#include "orderstat/asymptotics.hpp"
#include "orderstat/estimator.hpp"
#include "orderstat/field.hpp"
#include "orderstat/io.hpp"
#include "orderstat/parallel.hpp"
#include "orderstat/rng.hpp"
#include "orderstat/sampling.hpp"

namespace orderstat {

// Rejected configuration or flags (reported as a usage error).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Stream tag that separates random-field draws from sampling streams.
inline constexpr std::uint64_t kFieldStreamTag = 0xf1e1dULL;

struct ExperimentConfig {
  std::vector<int> b_list;
  std::vector<std::size_t> n_list;
  std::size_t trials = 100;
  std::uint64_t base_seed = kDefaultSeed;
  std::string field_source = "random";
  std::filesystem::path output_dir = ".";
  unsigned workers = 0;  // 0: ORDERSTAT_THREADS or hardware default

  bool random_fields() const { return field_source == "random"; }
};

inline std::uint64_t parse_seed(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t used = 0;
    try {
      const unsigned long long v = std::stoull(s, &used, 0);
      if (used == s.size() && s.find('-') == std::string::npos) return v;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("base_seed must be a non-negative 64-bit integer");
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {"b_list", "n_list", "trials", "base_seed", "field_source",
                                                 "output_dir"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("b_list")) cfg.b_list = j.at("b_list").get<std::vector<int>>();
    if (j.contains("n_list")) {
      for (const auto& v : j.at("n_list")) {
        if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError("n_list entries must be >= 1");
        cfg.n_list.push_back(v.get<std::size_t>());
      }
    }
    if (j.contains("trials")) {
      const auto& t = j.at("trials");
      if (!t.is_number_integer() || t.get<long long>() < 1) throw ConfigError("trials must be >= 1");
      cfg.trials = t.get<std::size_t>();
    }
    if (j.contains("field_source")) cfg.field_source = j.at("field_source").get<std::string>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (j.contains("base_seed")) cfg.base_seed = parse_seed(j.at("base_seed"));
  return cfg;
}

// Checks every invariant before anything is written.
inline void validate(const ExperimentConfig& cfg, const std::optional<FourierCoefficients>& field = std::nullopt) {
  if (cfg.b_list.empty()) throw ConfigError("b_list must be non-empty");
  if (cfg.n_list.empty()) throw ConfigError("n_list must be non-empty");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  for (int b : cfg.b_list) {
    if (b < 0) throw ConfigError("bandwidths must be non-negative");
  }
  const int b_max = *std::max_element(cfg.b_list.begin(), cfg.b_list.end());
  for (std::size_t n : cfg.n_list) {
    if (n < static_cast<std::size_t>(dimension(b_max))) {
      throw ConfigError("every n must be >= 2b+1 for the largest b (" + std::to_string(dimension(b_max)) + ")");
    }
  }
  if (!cfg.random_fields()) {
    if (!field) throw ConfigError("field_source must be \"random\" or a loaded coefficient file");
    for (int b : cfg.b_list) {
      if (b != field->bandwidth()) throw ConfigError("b_list must match the bandwidth of the field file");
    }
  }
}

inline FourierCoefficients load_field(const std::filesystem::path& path) {
  return field_from_json(io::read_json_file(path));
}

struct SweepRow {
  int b = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_distortion = 0.0;
  double stderr_distortion = 0.0;
  double n_times_mse = 0.0;
  double bound = 0.0;
};

struct ExperimentReport {
  std::vector<SweepRow> rows;
  std::map<int, double> slope_estimate;  // NaN when undefined
  std::uint64_t base_seed = 0;
};

// Least-squares slope of log(mean distortion) against log(n); rows with zero
// mean are skipped.
inline double log_log_slope(const std::vector<SweepRow>& rows, int b) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (r.b == b && r.mean_distortion > 0.0) {
      x.push_back(std::log(static_cast<double>(r.n)));
      y.push_back(std::log(r.mean_distortion));
    }
  }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

// Distortion of one deploy -> observe -> estimate pipeline per trial; trial i
// of cell (b, n) uses stream (base_seed, b, n, i). A fresh random field is
// drawn per trial unless `field` is given.
inline std::vector<double> distortion_trials(int b, std::size_t n, std::size_t trials, std::uint64_t base_seed,
                                             const std::optional<FourierCoefficients>& field, unsigned workers) {
  return map_trials(
      trials,
      [&](std::size_t i) {
        Engine rng = make_engine(base_seed, {static_cast<std::uint64_t>(b), n, i});
        const FourierCoefficients truth = field ? *field : random_field(b, rng, true);
        const DeploymentDraw d = deploy(n, rng);
        return distortion(estimate_coeffs(observe(truth, d), b), truth);
      },
      workers);
}

inline ExperimentReport run_mse_sweep(const ExperimentConfig& cfg,
                                      const std::optional<FourierCoefficients>& field = std::nullopt) {
  validate(cfg, field);
  ExperimentReport report;
  report.base_seed = cfg.base_seed;
  const std::optional<FourierCoefficients> fixed = cfg.random_fields() ? std::nullopt : field;
  for (int b : cfg.b_list) {
    for (std::size_t n : cfg.n_list) {
      const std::vector<double> d = distortion_trials(b, n, cfg.trials, cfg.base_seed, fixed, cfg.workers);
      SweepRow row;
      row.b = b;
      row.n = n;
      row.trials = cfg.trials;
      double sum = 0.0;
      for (double v : d) sum += v;
      row.mean_distortion = sum / static_cast<double>(d.size());
      if (d.size() > 1) {
        double ss = 0.0;
        for (double v : d) ss += (v - row.mean_distortion) * (v - row.mean_distortion);
        row.stderr_distortion = std::sqrt(ss / static_cast<double>(d.size() - 1) / static_cast<double>(d.size()));
      }
      row.n_times_mse = static_cast<double>(n) * row.mean_distortion;
      row.bound = distortion_bound(b);
      report.rows.push_back(row);
    }
  }
  for (int b : cfg.b_list) report.slope_estimate[b] = log_log_slope(report.rows, b);
  return report;
}

inline std::string sweep_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "b,n,trials,mean_distortion,stderr,n_times_mse,bound\n";
  for (const auto& r : report.rows) {
    out << r.b << ',' << r.n << ',' << r.trials << ',' << io::format_double(r.mean_distortion) << ','
        << io::format_double(r.stderr_distortion) << ',' << io::format_double(r.n_times_mse) << ','
        << io::format_double(r.bound) << '\n';
  }
  return out.str();
}

inline nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"b", r.b},
                    {"n", r.n},
                    {"trials", r.trials},
                    {"mean_distortion", r.mean_distortion},
                    {"stderr_distortion", r.stderr_distortion},
                    {"n_times_mse", r.n_times_mse},
                    {"bound", r.bound}});
  }
  nlohmann::json slopes = nlohmann::json::object();
  for (const auto& [b, s] : report.slope_estimate) {
    slopes[std::to_string(b)] = std::isfinite(s) ? nlohmann::json(s) : nlohmann::json(nullptr);
  }
  return {{"base_seed", std::to_string(report.base_seed)}, {"rows", rows}, {"slope_estimate", slopes}};
}

// Fixed field for clt-check: the loaded file, else one random real field per b.
inline FourierCoefficients clt_field(const ExperimentConfig& cfg, int b,
                                     const std::optional<FourierCoefficients>& field) {
  if (!cfg.random_fields() && field) return *field;
  Engine rng = make_engine(cfg.base_seed, {kFieldStreamTag, static_cast<std::uint64_t>(b)});
  return random_field(b, rng, true);
}

inline nlohmann::json run_clt_check(const ExperimentConfig& cfg,
                                    const std::optional<FourierCoefficients>& field = std::nullopt) {
  validate(cfg, field);
  if (cfg.trials < 2) throw ConfigError("clt-check needs trials >= 2");
  nlohmann::json cells = nlohmann::json::array();
  for (int b : cfg.b_list) {
    const FourierCoefficients f = clt_field(cfg, b, field);
    for (std::size_t n : cfg.n_list) {
      nlohmann::json cell = to_json(clt_empirical_check(f, n, cfg.trials, cfg.base_seed, cfg.workers));
      cell["field"] = to_json(f);
      cells.push_back(std::move(cell));
    }
  }
  return {{"base_seed", std::to_string(cfg.base_seed)}, {"cells", cells}};
}

struct AmbiguityConfig {
  FourierCoefficients field;
  double theta = 0.25;
  std::size_t n = 10000;
  std::size_t resolution = 8192;
  std::uint64_t seed = kDefaultSeed;
};

inline void validate(const AmbiguityConfig& cfg) {
  if (!cfg.field.real_valued()) throw ConfigError("ambiguity-demo needs a real-valued field");
  if (!(cfg.theta >= 0.0 && cfg.theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  if (cfg.n < 1) throw ConfigError("n must be >= 1");
  if (cfg.resolution < static_cast<std::size_t>(cfg.field.size())) throw ConfigError("grid must be >= 2b+1");
}

inline void write_ambiguity_outputs(const std::filesystem::path& dir, const AmbiguityReport& r,
                                    const FourierCoefficients& field) {
  nlohmann::json j = to_json(r);
  j["field"] = to_json(field);
  io::write_json_file(dir / "ambiguity.json", j);
  const auto csv = [](const ValueCdf& c) {
    std::ostringstream out;
    write_cdf_csv(out, c);
    return out.str();
  };
  io::write_text_file(dir / "level_original.csv", csv(r.level_original));
  io::write_text_file(dir / "level_shifted.csv", csv(r.level_shifted));
  io::write_text_file(dir / "empirical_original.csv", csv(r.empirical_original));
  io::write_text_file(dir / "empirical_shifted.csv", csv(r.empirical_shifted));
}

inline AmbiguityReport run_ambiguity_demo(const AmbiguityConfig& cfg) {
  validate(cfg);
  return ambiguity_demo(cfg.field, cfg.theta, cfg.n, cfg.resolution, cfg.seed);
}

inline void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

}  // namespace orderstat
