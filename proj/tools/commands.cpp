#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "subscan/dataio.hpp"
#include "subscan/errors.hpp"
#include "subscan/harness.hpp"
#include "subscan/scanstats.hpp"

namespace subscan::cli {

namespace fs = std::filesystem;

namespace {

void check_writable(const fs::path& out, bool force) {
  if (out.empty()) throw ValidationError("an output path is required");
  if (fs::exists(out) && !force) {
    throw ValidationError("'" + out.string() + "' already exists (use --force to overwrite)");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double mean_nodes(const std::vector<Cardinality>& sizes) {
  double total = 0.0;
  for (const auto& c : sizes) total += static_cast<double>(c.nodes);
  return sizes.empty() ? 0.0 : total / static_cast<double>(sizes.size());
}

}  // namespace

ScanConfig ScanFlags::to_config() const {
  ScanConfig c;
  c.alpha_grid = AlphaGridSpec::parse(alpha_grid);
  c.alpha_max = max_alpha;
  c.restarts = restarts;
  c.max_iterations = max_iterations;
  c.seed = seed;
  c.validate();
  return c;
}

int cmd_pvalues(const PValuesArgs& args) {
  check_writable(args.out, args.force);
  const auto background = read_activations(args.background);
  const auto test = read_activations(args.test);
  const auto pvalues = empirical_pvalues(background, test);
  write_actmat(pvalues, args.out);

  double total = 0.0;
  for (const double p : pvalues.values().data()) total += p;
  std::cout << "wrote " << pvalues.rows() << "x" << pvalues.cols() << " p-values (background "
            << pvalues.background_size() << " rows, mean p "
            << fmt(total / static_cast<double>(pvalues.values().data().size())) << ") to "
            << args.out << "\n";
  return 0;
}

int cmd_scan(const ScanArgs& args) {
  check_writable(args.out, args.force);
  const ScanConfig config = args.scan.to_config();
  const auto pvalues = read_pvalues(args.pvalues);
  const auto grid = resolve_alpha_grid(config, pvalues);
  const ScanResult result = scan(pvalues, config, grid);
  write_result(result, config, grid, args.out);

  std::cout << "score " << fmt(result.score) << " at alpha " << fmt(result.alpha) << ": "
            << result.sample_indices.size() << " samples x " << result.node_indices.size()
            << " nodes (restart " << result.restart_index << ", " << result.iterations_used
            << " iterations, grid of " << grid.size() << ")\n";
  return 0;
}

int cmd_scan_individual(const ScanArgs& args) {
  check_writable(args.out, args.force);
  const ScanConfig config = args.scan.to_config();
  const auto pvalues = read_pvalues(args.pvalues);
  const auto grid = resolve_alpha_grid(config, pvalues);
  const auto results = scan_individual(pvalues, config);
  write_text_file(results_to_json(results, config, grid), args.out);

  double best = 0.0;
  for (const auto& r : results) best = std::max(best, r.score);
  std::cout << "scanned " << results.size() << " samples individually; max score " << fmt(best)
            << "\n";
  return 0;
}

int cmd_power(const PowerArgs& args) {
  check_writable(args.out, args.force);
  if (args.mode != "group" && args.mode != "individual") {
    throw ValidationError("--mode must be 'group' or 'individual'");
  }
  ExperimentConfig config;
  config.proportion = args.proportion;
  config.group_size = args.group_size;
  config.trials = args.trials;
  config.seed = args.seed;
  config.with_replacement = args.with_replacement;
  config.scan_config = args.scan.to_config();
  config.validate();

  const auto background = read_activations(args.background);
  const auto normal = read_activations(args.normal);
  const auto anomalous = read_activations(args.anomalous);
  const PowerReport report = args.mode == "group"
                                 ? run_power_experiment(background, normal, anomalous, config)
                                 : run_individual_experiment(background, normal, anomalous, config);
  write_result(report, args.out);

  std::cout << args.mode << " detection power: auroc " << fmt(report.auroc) << " over "
            << report.positive_scores.size() << " positive / " << report.negative_scores.size()
            << " negative scores";
  if (report.mode == PowerReport::Mode::kGroup) {
    std::cout << " (" << report.anomalous_count << " anomalous of " << config.group_size
              << " per group)";
  }
  std::cout << "\n";
  return 0;
}

int cmd_synth(const SynthArgs& args) {
  if (args.format != "actmat" && args.format != "csv") {
    throw ValidationError("--format must be 'actmat' or 'csv'");
  }
  if (args.out_dir.empty()) throw ValidationError("--out-dir is required");
  const fs::path dir(args.out_dir);
  const std::string ext = "." + args.format;
  const fs::path paths[] = {dir / ("background" + ext), dir / ("normal" + ext),
                            dir / ("anomalous" + ext)};
  for (const auto& p : paths) check_writable(p, args.force);

  const Fixture fixture = make_synthetic_fixture(args.params);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  write_actmat(fixture.background, paths[0]);
  write_actmat(fixture.normal, paths[1]);
  write_actmat(fixture.anomalous, paths[2]);

  std::cout << "wrote synthetic fixture (" << args.params.num_nodes << " nodes, "
            << args.params.affected_nodes << " shifted by " << fmt(args.params.shift) << ") to "
            << dir.string() << "\n";
  return 0;
}

int cmd_report(const ReportArgs& args) {
  check_writable(args.out, args.force);
  const std::string text = read_text_file(args.input);

  nlohmann::json probe;
  try {
    probe = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError("'" + args.input + "' is not valid JSON: " + e.what());
  }

  std::vector<CardinalityRow> rows;
  if (probe.is_object() && probe.contains("positive_scores")) {
    const PowerReport report = report_from_json(text);
    rows = cardinality_report(report.positive_cardinalities, "positive");
    const auto negative = cardinality_report(report.negative_cardinalities, "negative");
    rows.insert(rows.end(), negative.begin(), negative.end());
    std::cout << (report.mode == PowerReport::Mode::kGroup ? "group" : "individual")
              << " auroc " << fmt(report.auroc) << "; mean node cardinality positive "
              << fmt(mean_nodes(report.positive_cardinalities)) << ", negative "
              << fmt(mean_nodes(report.negative_cardinalities)) << "\n";
  } else if (probe.is_object() && probe.contains("results")) {
    const auto results = results_from_json(text);
    rows = cardinality_report(results, "result");
    std::cout << "cardinalities for " << results.size() << " results\n";
  } else {
    const auto stored = result_from_json(text);
    const ScanResult single[] = {stored.result};
    rows = cardinality_report(single, "result");
    std::cout << "score " << fmt(stored.result.score) << "; " << stored.result.sample_indices.size()
              << " samples x " << stored.result.node_indices.size() << " nodes\n";
  }
  write_text_file(cardinality_csv(rows), args.out);
  return 0;
}

}  // namespace subscan::cli
