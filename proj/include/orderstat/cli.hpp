// Command-line front end. Exit codes: 0 success, 1 usage error, 2 runtime
// failure.
#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orderstat/harness.hpp"

namespace orderstat {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

namespace detail {

struct CliFlags {
  std::vector<int> b;
  std::vector<std::size_t> n;
  std::size_t trials = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string config;
  std::string out;
  std::string field;
  double theta = 0.25;
  std::size_t grid = 8192;
};

inline int single_b(const CliFlags& f) {
  if (f.b.size() != 1) throw ConfigError("--b takes exactly one value here");
  return f.b.front();
}

inline std::size_t single_n(const CliFlags& f) {
  if (f.n.size() != 1) throw ConfigError("--n takes exactly one value here");
  return f.n.front();
}

inline std::filesystem::path output_dir(const CliFlags& f, const std::filesystem::path& fallback = ".") {
  return f.out.empty() ? fallback : std::filesystem::path(f.out);
}

// Config file first, then any explicit flags on top.
inline ExperimentConfig experiment_config(const CliFlags& f, const CLI::App& sub, std::size_t default_trials,
                                          std::optional<FourierCoefficients>& field) {
  ExperimentConfig cfg;
  cfg.trials = default_trials;
  if (!f.config.empty()) cfg = config_from_json(io::read_json_file(f.config));
  if (sub.count("--b")) cfg.b_list = f.b;
  if (sub.count("--n")) cfg.n_list = f.n;
  if (sub.count("--trials")) cfg.trials = f.trials;
  if (sub.count("--seed")) cfg.base_seed = f.seed;
  if (sub.count("--out")) cfg.output_dir = f.out;
  if (sub.count("--field")) cfg.field_source = f.field;
  if (!cfg.random_fields()) {
    field = load_field(cfg.field_source);
    if (cfg.b_list.empty()) cfg.b_list = {field->bandwidth()};
  }
  return cfg;
}

}  // namespace detail

inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  CLI::App app{"Bandlimited field reconstruction from samples at unknown, ordered uniform locations"};
  app.require_subcommand(1);
  detail::CliFlags f;

  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", f.seed, "RNG seed (default " + std::to_string(kDefaultSeed) + ")"); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", f.out, "output directory"); };

  CLI::App* gen = app.add_subcommand("gen-field", "draw a random bounded real field");
  gen->add_option("--b", f.b, "bandwidth index")->required()->expected(1);
  add_seed(gen);
  add_out(gen);

  CLI::App* sample = app.add_subcommand("sample", "deploy sensors and write the ordered samples");
  sample->add_option("--field", f.field, "field JSON")->required();
  sample->add_option("--n", f.n, "sample count")->required()->expected(1);
  add_seed(sample);
  add_out(sample);

  CLI::App* estimate = app.add_subcommand("estimate", "estimate a field from simulated ordered samples");
  estimate->add_option("--field", f.field, "field JSON")->required();
  estimate->add_option("--n", f.n, "sample count")->required()->expected(1);
  add_seed(estimate);
  add_out(estimate);

  CLI::App* sweep = app.add_subcommand("mse-sweep", "Monte Carlo distortion over a (b, n) grid");
  CLI::App* clt = app.add_subcommand("clt-check", "Monte Carlo check of the limit covariances");
  for (CLI::App* s : {sweep, clt}) {
    s->add_option("--config", f.config, "experiment config JSON");
    s->add_option("--b", f.b, "bandwidth indices")->delimiter(',');
    s->add_option("--n", f.n, "sample counts")->delimiter(',');
    s->add_option("--trials", f.trials, "trials per cell")->check(CLI::PositiveNumber);
    s->add_option("--field", f.field, "fixed field JSON");
    add_seed(s);
    add_out(s);
  }

  CLI::App* amb = app.add_subcommand("ambiguity-demo", "compare value laws of a field and its shift");
  amb->add_option("--field", f.field, "field JSON");
  amb->add_option("--b", f.b, "bandwidth of a random field")->expected(1);
  amb->add_option("--theta", f.theta, "shift in [0, 1]");
  amb->add_option("--n", f.n, "samples per field")->expected(1);
  amb->add_option("--grid", f.grid, "level-set resolution M");
  add_seed(amb);
  add_out(amb);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const int b = detail::single_b(f);
      if (b < 0) throw ConfigError("--b must be non-negative");
      Engine rng = make_engine(f.seed, {kFieldStreamTag, static_cast<std::uint64_t>(b)});
      const FourierCoefficients field = random_field(b, rng, true);
      const auto dir = detail::output_dir(f);
      prepare_output_dir(dir);
      io::write_json_file(dir / "field.json", to_json(field));
      out << (dir / "field.json").string() << "\n";
    } else if (sample->parsed()) {
      const std::size_t n = detail::single_n(f);
      if (n < 1) throw ConfigError("--n must be >= 1");
      const FourierCoefficients field = load_field(f.field);
      const SampleSet s = observe(field, deploy_seeded(n, f.seed));
      const auto dir = detail::output_dir(f);
      prepare_output_dir(dir);
      std::ostringstream csv;
      write_sample_csv(csv, s);
      io::write_text_file(dir / "samples.csv", csv.str());
      io::write_json_file(dir / "samples.json", sample_sidecar(s, field.bandwidth(), f.seed));
      out << (dir / "samples.csv").string() << "\n";
    } else if (estimate->parsed()) {
      const std::size_t n = detail::single_n(f);
      const FourierCoefficients field = load_field(f.field);
      if (n < static_cast<std::size_t>(field.size())) throw ConfigError("--n must be >= 2b+1");
      const CoefficientEstimate e = estimate_coeffs(observe(field, deploy_seeded(n, f.seed)), field.bandwidth());
      nlohmann::json j = to_json(e);
      j["distortion"] = distortion(e, field);
      const auto dir = detail::output_dir(f);
      prepare_output_dir(dir);
      io::write_json_file(dir / "estimate.json", j);
      out << "distortion " << io::format_double(distortion(e, field)) << "\n";
    } else if (sweep->parsed()) {
      std::optional<FourierCoefficients> field;
      const ExperimentConfig cfg = detail::experiment_config(f, *sweep, 100, field);
      const ExperimentReport report = run_mse_sweep(cfg, field);
      prepare_output_dir(cfg.output_dir);
      io::write_text_file(cfg.output_dir / "mse_sweep.csv", sweep_csv(report));
      io::write_json_file(cfg.output_dir / "mse_sweep.json", to_json(report));
      out << (cfg.output_dir / "mse_sweep.csv").string() << "\n";
    } else if (clt->parsed()) {
      std::optional<FourierCoefficients> field;
      const ExperimentConfig cfg = detail::experiment_config(f, *clt, 1000, field);
      const nlohmann::json report = run_clt_check(cfg, field);
      prepare_output_dir(cfg.output_dir);
      io::write_json_file(cfg.output_dir / "clt_report.json", report);
      out << (cfg.output_dir / "clt_report.json").string() << "\n";
    } else if (amb->parsed()) {
      AmbiguityConfig cfg;
      if (!f.field.empty()) {
        cfg.field = load_field(f.field);
      } else if (!f.b.empty()) {
        const int b = detail::single_b(f);
        if (b < 0) throw ConfigError("--b must be non-negative");
        Engine rng = make_engine(f.seed, {kFieldStreamTag, static_cast<std::uint64_t>(b)});
        cfg.field = random_field(b, rng, true);
      } else {
        throw ConfigError("ambiguity-demo needs --field or --b");
      }
      cfg.theta = f.theta;
      if (!f.n.empty()) cfg.n = detail::single_n(f);
      cfg.resolution = f.grid;
      cfg.seed = f.seed;
      const AmbiguityReport r = run_ambiguity_demo(cfg);
      const auto dir = detail::output_dir(f);
      prepare_output_dir(dir);
      write_ambiguity_outputs(dir, r, cfg.field);
      out << (dir / "ambiguity.json").string() << "\n";
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace orderstat
