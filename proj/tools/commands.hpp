#pragma once

#include <cstdint>
#include <string>

#include "subscan/harness.hpp"
#include "subscan/ltss.hpp"

namespace subscan::cli {

struct ScanFlags {
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  std::string alpha_grid = "linspace:100";
  double max_alpha = 1.0;
  std::size_t max_iterations = 100;

  ScanConfig to_config() const;
};

struct PValuesArgs {
  std::string background, test, out;
  bool force = false;
};

struct ScanArgs {
  std::string pvalues, out;
  ScanFlags scan;
  bool force = false;
};

struct PowerArgs {
  std::string background, normal, anomalous, out;
  std::string mode = "group";
  double proportion = 0.0;
  std::size_t group_size = 20;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  bool with_replacement = false;
  ScanFlags scan;
  bool force = false;
};

struct SynthArgs {
  FixtureParams params;
  std::string out_dir;
  std::string format = "actmat";
  bool force = false;
};

struct ReportArgs {
  std::string input, out;
  bool force = false;
};

// Each returns the process exit code; library errors propagate as exceptions.
int cmd_pvalues(const PValuesArgs& args);
int cmd_scan(const ScanArgs& args);
int cmd_scan_individual(const ScanArgs& args);
int cmd_power(const PowerArgs& args);
int cmd_synth(const SynthArgs& args);
int cmd_report(const ReportArgs& args);

}  // namespace subscan::cli
