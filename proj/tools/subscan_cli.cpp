#include <exception>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "subscan/errors.hpp"

namespace {

using namespace subscan::cli;

void add_scan_flags(CLI::App* cmd, ScanFlags& f, bool with_search) {
  cmd->add_option("--alpha-grid", f.alpha_grid, "Threshold grid: linspace:<n> or empirical")
      ->capture_default_str();
  cmd->add_option("--max-alpha", f.max_alpha, "Largest threshold considered, in (0, 1]")
      ->capture_default_str();
  if (with_search) {
    cmd->add_option("--restarts", f.restarts, "Random restarts of the ascent")->capture_default_str();
    cmd->add_option("--max-iterations", f.max_iterations, "Iteration cap per restart")
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-based subset scanning over activation matrices"};
  app.require_subcommand(1);

  std::function<int()> action;

  PValuesArgs pv;
  auto* pvalues = app.add_subcommand("pvalues", "Empirical p-values of test rows against a background");
  pvalues->add_option("--background", pv.background, "Background activations (.actmat/.csv)")->required();
  pvalues->add_option("--test", pv.test, "Test activations (.actmat/.csv)")->required();
  pvalues->add_option("--out", pv.out, "Output .actmat (kind=pvalues)")->required();
  pvalues->add_flag("--force", pv.force, "Overwrite an existing output");
  pvalues->callback([&] { action = [&] { return cmd_pvalues(pv); }; });

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "Group scan for the most anomalous samples x nodes subset");
  scan->add_option("--pvalues", sc.pvalues, "P-value matrix (.actmat)")->required();
  scan->add_option("--out", sc.out, "Result JSON")->required();
  add_scan_flags(scan, sc.scan, true);
  scan->add_flag("--force", sc.force, "Overwrite an existing output");
  scan->callback([&] { action = [&] { return cmd_scan(sc); }; });

  ScanArgs si;
  auto* indiv = app.add_subcommand("scan-individual", "Scan each sample over nodes on its own");
  indiv->add_option("--pvalues", si.pvalues, "P-value matrix (.actmat)")->required();
  indiv->add_option("--out", si.out, "Results JSON")->required();
  add_scan_flags(indiv, si.scan, false);
  indiv->add_flag("--force", si.force, "Overwrite an existing output");
  indiv->callback([&] { action = [&] { return cmd_scan_individual(si); }; });

  PowerArgs pw;
  auto* power = app.add_subcommand("power", "Detection-power experiment (AUROC)");
  power->add_option("--background", pw.background, "Background activations")->required();
  power->add_option("--normal", pw.normal, "Normal pool activations")->required();
  power->add_option("--anomalous", pw.anomalous, "Anomalous pool activations")->required();
  power->add_option("--out", pw.out, "Report JSON")->required();
  power->add_option("--mode", pw.mode, "group or individual")->capture_default_str();
  power->add_option("--proportion", pw.proportion, "Anomalous fraction per positive group")
      ->capture_default_str();
  power->add_option("--group-size", pw.group_size, "Rows per group")->capture_default_str();
  power->add_option("--trials", pw.trials, "Positive/negative group pairs")->capture_default_str();
  power->add_option("--seed", pw.seed, "Experiment seed")->capture_default_str();
  power->add_flag("--with-replacement", pw.with_replacement, "Draw group rows with replacement");
  add_scan_flags(power, pw.scan, false);
  power->add_option("--restarts", pw.scan.restarts, "Random restarts per scan")->capture_default_str();
  power->add_option("--max-iterations", pw.scan.max_iterations, "Iteration cap per restart")
      ->capture_default_str();
  power->add_flag("--force", pw.force, "Overwrite an existing output");
  power->callback([&] { action = [&] { return cmd_power(pw); }; });

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Write a Gaussian fixture with planted shifted nodes");
  synth->add_option("--out-dir", sy.out_dir, "Directory for background/normal/anomalous files")->required();
  synth->add_option("--num-background", sy.params.num_background)->capture_default_str();
  synth->add_option("--num-normal", sy.params.num_normal)->capture_default_str();
  synth->add_option("--num-anomalous", sy.params.num_anomalous)->capture_default_str();
  synth->add_option("--num-nodes", sy.params.num_nodes)->capture_default_str();
  synth->add_option("--affected-nodes", sy.params.affected_nodes)->capture_default_str();
  synth->add_option("--shift", sy.params.shift)->capture_default_str();
  synth->add_option("--seed", sy.params.seed)->capture_default_str();
  synth->add_option("--format", sy.format, "actmat or csv")->capture_default_str();
  synth->add_flag("--force", sy.force, "Overwrite existing outputs");
  synth->callback([&] { action = [&] { return cmd_synth(sy); }; });

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Subset cardinality CSV from a report or result JSON");
  report->add_option("--input", rp.input, "Power report or scan result JSON")->required();
  report->add_option("--out", rp.out, "Cardinality CSV")->required();
  report->add_flag("--force", rp.force, "Overwrite an existing output");
  report->callback([&] { action = [&] { return cmd_report(rp); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const subscan::Error& e) {
    std::cerr << "subscan: " << subscan::to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == subscan::ErrorKind::kIo ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "subscan: " << e.what() << "\n";
    return 2;
  }
}
