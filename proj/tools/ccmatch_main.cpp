// ccmatch — single-parameter time-series pattern matching.
//
// Subcommands compose the library modules and serialize their outputs;
// no numeric logic lives here. Exit codes: 0 success, 1 contract/parse
// errors, 2 I/O errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccmatch/io.hpp"
#include "ccmatch/matcher.hpp"
#include "ccmatch/selection.hpp"
#include "ccmatch/series.hpp"
#include "ccmatch/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Command { match, curve, select, discriminate, synth, detect_limit };

// Everything the subcommands can consume; CLI11 binds each subcommand's
// options into the relevant subset.
struct RunConfig {
  Command command = Command::match;

  std::string template_path;
  std::vector<std::string> data_paths;  // one entry except for discriminate
  std::string output_path;
  std::string report_path;
  std::string curves_path;
  std::string curve_format = "csv";

  double threshold = 0.98;
  std::int64_t min_len = 10;
  std::int64_t max_len = 0;  // 0: min(200, source length, data length - 1)
  std::int64_t step = 1;
  std::int64_t partitions = 5;
  std::int64_t partition_len = 1000;
  std::int64_t cross_tolerance = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;

  // synth
  std::string synth_kind;
  std::int64_t length = 0;
  int class_id = 1;
  double sample_rate = 11250.0;
  bool sample_rate_given = false;
  std::string inject_template;
  double inject_alpha = 0.0;
  std::int64_t inject_offset = 0;

  // detect-limit
  int trials = 1000;
  double delta_alpha = 0.045;
  double injected_alpha = 0.14;
  std::int64_t template_len = 64;
  std::int64_t noise_len = 4096;
};

// Relative output paths can be redirected wholesale via CCMATCH_OUTPUT_DIR.
fs::path resolve_output(const std::string& path) {
  const char* dir = std::getenv("CCMATCH_OUTPUT_DIR");
  fs::path p(path);
  if (dir != nullptr && *dir != '\0' && p.is_relative()) {
    return fs::path(dir) / p;
  }
  return p;
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

ccmatch::TimeSeries load(const std::string& path) {
  return ccmatch::read_series(ccmatch::SeriesFile(fs::path(path)));
}

ccmatch::CurveFormat parse_curve_format(const std::string& name) {
  if (name == "csv") return ccmatch::CurveFormat::csv;
  if (name == "json") return ccmatch::CurveFormat::json;
  throw ccmatch::ContractError("unknown curve format '" + name +
                               "' (expected csv or json)");
}

// Desk-scale default grid: up to length 200, clipped to what the template
// source and the data admit.
ccmatch::LengthGrid resolve_grid(const RunConfig& config, std::int64_t source_len,
                                 std::int64_t data_len) {
  ccmatch::LengthGrid grid;
  grid.min_len = config.min_len;
  grid.step = config.step;
  grid.max_len = config.max_len > 0
                     ? config.max_len
                     : std::min<std::int64_t>({200, source_len, data_len - 1});
  return grid;
}

json curve_to_json(const ccmatch::MatchCurve& curve) {
  json points = json::array();
  for (const auto& point : curve.points) {
    points.push_back({point.length, point.count});
  }
  return json{{"source", curve.source_label},
              {"data", curve.data_label},
              {"threshold", curve.threshold},
              {"points", std::move(points)}};
}

int run_match(const RunConfig& config) {
  const auto tpl = load(config.template_path);
  const auto data = load(config.data_paths.at(0));
  const auto profile = ccmatch::alpha_profile(tpl.samples(), data, config.threads);
  std::string text = "lag,alpha_n\n";
  for (size_t lag = 0; lag < profile.values.size(); ++lag) {
    text += std::to_string(lag);
    text += ',';
    if (profile.values[lag]) {
      text += ccmatch::format_double(*profile.values[lag]);
    }
    text += '\n';
  }
  ccmatch::write_file_atomic(resolve_output(config.output_path), text);
  return 0;
}

int run_curve(const RunConfig& config) {
  const auto source = load(config.template_path);
  const auto data = load(config.data_paths.at(0));
  const auto grid = resolve_grid(config, source.size(), data.size());
  const auto curve = ccmatch::match_curve(
      source.samples(), data, grid.min_len, grid.max_len, grid.step,
      config.threshold, stem_of(config.template_path),
      stem_of(config.data_paths.at(0)), config.threads);
  ccmatch::write_curves({curve}, resolve_output(config.output_path),
                        parse_curve_format(config.curve_format));
  return 0;
}

int run_select(const RunConfig& config) {
  const auto data = load(config.data_paths.at(0));
  const auto parts = ccmatch::partition(data, config.partitions, config.partition_len,
                                        stem_of(config.data_paths.at(0)));
  const auto grid = resolve_grid(config, config.partition_len, data.size());
  const auto scores =
      ccmatch::score_partitions(data, parts, grid, config.threshold, config.threads);
  const auto selected = ccmatch::select_template(parts, scores);

  ccmatch::write_series(ccmatch::TimeSeries(selected.samples, data.sample_rate()),
                        ccmatch::SeriesFile(resolve_output(config.output_path)));

  json report;
  report["source"] = parts.source_label;
  report["threshold"] = config.threshold;
  report["grid"] = {{"min_len", grid.min_len},
                    {"max_len", grid.max_len},
                    {"step", grid.step}};
  report["selected_partition"] = selected.partition_index;
  report["selected_score"] = selected.score;
  json partition_scores = json::array();
  for (const auto& score : scores) {
    partition_scores.push_back(
        {{"partition", score.partition_index}, {"score", score.score}});
  }
  report["partitions"] = std::move(partition_scores);
  const std::string report_path = config.report_path.empty()
                                      ? config.output_path + ".report.json"
                                      : config.report_path;
  ccmatch::write_file_atomic(resolve_output(report_path), report.dump(2) + "\n");
  return 0;
}

int run_discriminate(const RunConfig& config) {
  if (config.data_paths.size() < 2) {
    throw ccmatch::ContractError(
        "discriminate: at least two class series are required");
  }
  std::vector<ccmatch::ClassSeries> classes;
  std::int64_t min_data_len = 0;
  for (const auto& path : config.data_paths) {
    ccmatch::ClassSeries cls{stem_of(path), load(path)};
    for (const auto& existing : classes) {
      if (existing.label == cls.label) {
        throw ccmatch::ContractError("discriminate: duplicate class label '" +
                                     cls.label + "'");
      }
    }
    min_data_len = classes.empty() ? cls.series.size()
                                   : std::min(min_data_len, cls.series.size());
    classes.push_back(std::move(cls));
  }
  const auto grid = resolve_grid(config, config.partition_len, min_data_len);
  const auto results =
      ccmatch::discriminate(classes, config.partitions, config.partition_len, grid,
                            config.threshold, config.cross_tolerance, config.threads);

  json report = json::array();
  std::vector<ccmatch::MatchCurve> all_curves;
  for (const auto& entry : results) {
    json item;
    item["label"] = entry.label;
    item["selected_partition"] = entry.selected.partition_index;
    item["selected_score"] = entry.selected.score;
    item["threshold"] = entry.report.threshold;
    item["cross_tolerance"] = entry.report.cross_tolerance;
    if (entry.report.minimal_length) {
      item["minimal_length"] = *entry.report.minimal_length;
    } else {
      item["minimal_length"] = nullptr;
    }
    item["self_curve"] = curve_to_json(entry.report.self_curve);
    json cross = json::array();
    for (const auto& curve : entry.report.cross_curves) {
      cross.push_back(curve_to_json(curve));
    }
    item["cross_curves"] = std::move(cross);
    report.push_back(std::move(item));

    all_curves.push_back(entry.report.self_curve);
    for (const auto& curve : entry.report.cross_curves) {
      all_curves.push_back(curve);
    }
  }
  ccmatch::write_file_atomic(resolve_output(config.output_path), report.dump(2) + "\n");

  const std::string curves_path =
      config.curves_path.empty()
          ? fs::path(config.output_path).replace_extension().string() + "_curves.csv"
          : config.curves_path;
  ccmatch::write_curves(all_curves, resolve_output(curves_path),
                        ccmatch::CurveFormat::csv);
  return 0;
}

int run_synth(const RunConfig& config) {
  std::optional<ccmatch::TimeSeries> series;
  if (config.synth_kind == "noise") {
    ccmatch::SynthesisSpec spec;
    spec.length = config.length;
    spec.noise_sigma = config.sigma;
    spec.seed = config.seed;
    if (!config.inject_template.empty()) {
      spec.injection = ccmatch::Injection{load(config.inject_template).samples(),
                                          config.inject_alpha, config.inject_offset};
    }
    auto generated = ccmatch::synthesize(spec);
    if (config.sample_rate_given) {
      series.emplace(generated.samples(), config.sample_rate);
    } else {
      series = std::move(generated);
    }
  } else if (config.synth_kind == "surrogate") {
    series = ccmatch::periodic_surrogate(config.class_id, config.length,
                                         config.sample_rate, config.seed);
    if (!config.inject_template.empty()) {
      series = ccmatch::inject(*series, load(config.inject_template).samples(),
                               config.inject_alpha, config.inject_offset);
    }
  } else {
    throw ccmatch::ContractError("synth: unknown kind '" + config.synth_kind +
                                 "' (expected noise or surrogate)");
  }
  ccmatch::write_series(*series, ccmatch::SeriesFile(resolve_output(config.output_path)));
  return 0;
}

int run_detect_limit(const RunConfig& config) {
  const auto probe =
      ccmatch::probe_template(config.template_len, config.delta_alpha, config.sigma);
  const auto result = ccmatch::detection_limit_experiment(
      probe, config.injected_alpha, config.noise_len, config.sigma, config.seed,
      config.trials, config.threads);
  json out;
  out["delta_alpha"] = result.delta_alpha;
  out["threshold"] = result.threshold;
  out["injected_alpha"] = result.injected_alpha;
  out["mean_alpha_hat"] = result.mean_alpha_hat;
  out["coverage_1sigma"] = result.coverage_1sigma;
  out["coverage_3sigma"] = result.coverage_3sigma;
  out["trials"] = result.trials;
  ccmatch::write_file_atomic(resolve_output(config.output_path), out.dump(2) + "\n");
  return 0;
}

int run(const RunConfig& config) {
  switch (config.command) {
    case Command::match:
      return run_match(config);
    case Command::curve:
      return run_curve(config);
    case Command::select:
      return run_select(config);
    case Command::discriminate:
      return run_discriminate(config);
    case Command::synth:
      return run_synth(config);
    case Command::detect_limit:
      return run_detect_limit(config);
  }
  throw ccmatch::ContractError("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccmatch — single-parameter time-series pattern matching"};
  app.require_subcommand(1);
  RunConfig config;
  app.add_option("--threads", config.threads, "worker threads for matcher loops")
      ->check(CLI::PositiveNumber);

  const auto add_threshold = [&config](CLI::App* cmd) {
    cmd->add_option("--threshold", config.threshold,
                    "|alpha_N| match threshold, in [0.5, 1.0]")
        ->check(CLI::Range(0.5, 1.0));
  };
  const auto add_grid = [&config](CLI::App* cmd) {
    cmd->add_option("--min-len", config.min_len, "smallest template length");
    cmd->add_option("--max-len", config.max_len,
                    "largest template length (default: min(200, source, data-1))");
    cmd->add_option("--step", config.step, "template length increment");
  };
  const auto add_partitioning = [&config](CLI::App* cmd) {
    cmd->add_option("--partitions", config.partitions, "number of partitions");
    cmd->add_option("--partition-len", config.partition_len, "samples per partition");
  };

  auto* match_cmd = app.add_subcommand(
      "match", "normalized similarity profile of a template at every lag");
  match_cmd->add_option("--template", config.template_path, "template series file")
      ->required();
  match_cmd->add_option("--data", config.data_paths, "data series file")
      ->required()
      ->expected(1);
  match_cmd->add_option("--output", config.output_path, "output CSV (lag, alpha_n)")
      ->required();

  auto* curve_cmd = app.add_subcommand(
      "curve", "match count vs. template length for a growing template prefix");
  curve_cmd->add_option("--template", config.template_path, "template source series file")
      ->required();
  curve_cmd->add_option("--data", config.data_paths, "data series file")
      ->required()
      ->expected(1);
  curve_cmd->add_option("--output", config.output_path, "output file")->required();
  curve_cmd->add_option("--format", config.curve_format, "csv or json");
  add_grid(curve_cmd);
  add_threshold(curve_cmd);

  auto* select_cmd = app.add_subcommand(
      "select", "partition a series and pick the most representative block");
  select_cmd->add_option("--data", config.data_paths, "data series file")
      ->required()
      ->expected(1);
  select_cmd->add_option("--output", config.output_path, "selected partition series file")
      ->required();
  select_cmd->add_option("--report", config.report_path,
                         "JSON report path (default: <output>.report.json)");
  add_partitioning(select_cmd);
  add_grid(select_cmd);
  add_threshold(select_cmd);

  auto* disc_cmd = app.add_subcommand(
      "discriminate", "select per-class templates and test each against every class");
  disc_cmd->add_option("--data", config.data_paths, "one series file per class (repeat)")
      ->required()
      ->expected(-2);
  disc_cmd->add_option("--output", config.output_path, "JSON report path")->required();
  disc_cmd->add_option("--curves", config.curves_path,
                       "CSV curve table (default: <output>_curves.csv)");
  add_partitioning(disc_cmd);
  add_grid(disc_cmd);
  add_threshold(disc_cmd);
  disc_cmd->add_option("--cross-tolerance", config.cross_tolerance,
                       "max allowed cross-class match count");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic series");
  synth_cmd->add_option("--kind", config.synth_kind, "noise or surrogate")->required();
  synth_cmd->add_option("--output", config.output_path, "output series file")->required();
  synth_cmd->add_option("--length", config.length, "number of samples")->required();
  synth_cmd->add_option("--sigma", config.sigma, "noise standard deviation");
  synth_cmd->add_option("--seed", config.seed, "RNG seed");
  synth_cmd->add_option("--class-id", config.class_id, "surrogate class (1..5)");
  auto* rate_opt =
      synth_cmd->add_option("--sample-rate", config.sample_rate, "sample rate in Hz");
  synth_cmd->add_option("--inject-template", config.inject_template,
                        "series file to inject into the output");
  synth_cmd->add_option("--inject-alpha", config.inject_alpha, "injection amplitude");
  synth_cmd->add_option("--inject-offset", config.inject_offset,
                        "injection offset in samples");

  auto* limit_cmd = app.add_subcommand(
      "detect-limit", "Monte-Carlo coverage of the amplitude estimator");
  limit_cmd->add_option("--output", config.output_path, "output JSON path")->required();
  limit_cmd->add_option("--trials", config.trials, "Monte-Carlo trials");
  limit_cmd->add_option("--delta-alpha", config.delta_alpha,
                        "target confidence half-width");
  limit_cmd->add_option("--alpha", config.injected_alpha, "injected amplitude");
  limit_cmd->add_option("--template-len", config.template_len, "probe template length");
  limit_cmd->add_option("--length", config.noise_len, "noise series length");
  limit_cmd->add_option("--sigma", config.sigma, "noise standard deviation");
  limit_cmd->add_option("--seed", config.seed, "base RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  if (match_cmd->parsed()) config.command = Command::match;
  if (curve_cmd->parsed()) config.command = Command::curve;
  if (select_cmd->parsed()) config.command = Command::select;
  if (disc_cmd->parsed()) config.command = Command::discriminate;
  if (synth_cmd->parsed()) config.command = Command::synth;
  if (limit_cmd->parsed()) config.command = Command::detect_limit;
  config.sample_rate_given = rate_opt->count() > 0;

  try {
    return run(config);
  } catch (const ccmatch::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ccmatch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
