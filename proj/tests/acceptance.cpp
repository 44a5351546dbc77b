// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Thresholds are fixed here and are not tuned per run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_util.hpp"
#include "oracle.hpp"
#include "subscan/harness.hpp"
#include "subscan/ltss.hpp"
#include "subscan/scanstats.hpp"

using namespace subscan;

namespace {

int g_failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double mean_nodes(const std::vector<Cardinality>& v) {
  double s = 0.0;
  for (const auto& x : v) s += static_cast<double>(x.nodes);
  return s / static_cast<double>(v.size());
}

void oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(20240601);
  int exact = 0, exceeded = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t rows = 1 + gen() % 5, cols = 1 + gen() % 4, z = 1 + gen() % 20;
    const auto g = oracle::random_lattice(gen, rows, cols, z);
    const PValueMatrix p(Matrix(rows, cols, g.v), z);
    ScanConfig config;
    config.restarts = 20;
    config.seed = gen();
    config.alpha_grid = AlphaGridSpec::parse(instance % 2 ? "empirical" : "linspace:100");
    const auto grid = resolve_alpha_grid(config, p);
    const double found = scan(p, config, grid).score;
    const double best = brute_force_scan(p, grid).score;
    if (found == best) ++exact;
    if (found > best) ++exceeded;
  }
  const double t = seconds_since(start);
  report(exact >= 95 && exceeded == 0 && t < 10.0, "oracle equivalence",
         fmt("%.0f/100 exact matches (need >= 95), %.0f above the optimum (need 0), %.2f s (need < 10)",
             exact, exceeded, t));
}

void ltss_axis_exactness() {
  std::mt19937_64 gen(77);
  int exact = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t rows = 1 + gen() % 10, cols = 1 + gen() % 6, z = 1 + gen() % 30;
    const auto g = oracle::random_lattice(gen, rows, cols, z);
    const double t = static_cast<double>(1 + gen() % z) / static_cast<double>(z + 1);
    const std::vector<double> grid{t};
    const double got = optimize_rows(Matrix(rows, cols, g.v), grid).score;
    if (got == oracle::best_rows_at(g, t)) ++exact;
  }
  report(exact == 50, "LTSS axis exactness", fmt("%.0f/50 instances equal exhaustive enumeration", exact));
}

void bj_unit_values() {
  const double bj = berk_jones(10, 5, 0.1).score;
  const double bj_hand = 10.0 * (0.5 * std::log(0.5 / 0.1) + 0.5 * std::log(0.5 / 0.9));
  const double kl = kl_divergence(1.0, 0.25);
  const double kl_hand = std::log(4.0);
  const bool pass = std::abs(bj - bj_hand) <= 1e-9 && std::abs(kl - kl_hand) <= 1e-9 &&
                    std::abs(bj - 5.108256238) <= 1e-9;
  report(pass, "BJ unit values",
         fmt("berk_jones(10,5,0.1) = %.12f (hand %.12f); kl(1,0.25) = %.12f (ln 4 = %.12f)", bj,
             bj_hand, kl, kl_hand));
}

void null_calibration() {
  const auto start = std::chrono::steady_clock::now();
  FixtureParams fp;
  fp.shift = 0.0;
  fp.seed = 1;
  const Fixture f = make_synthetic_fixture(fp);

  const auto p = empirical_pvalues(f.background, f.normal);
  double sum = 0.0;
  for (double v : p.values().data()) sum += v;
  const double mean_p = sum / static_cast<double>(p.values().data().size());

  ExperimentConfig config;
  config.proportion = 0.0;
  config.group_size = 20;
  config.trials = 200;
  config.seed = 1;
  const auto r = run_power_experiment(f.background, f.normal, f.anomalous, config);
  const double t = seconds_since(start);
  report(r.auroc >= 0.4 && r.auroc <= 0.6 && mean_p >= 0.48 && mean_p <= 0.52 && t < 60.0,
         "null calibration",
         fmt("auroc %.4f (need [0.4, 0.6]), mean p-value %.4f (need [0.48, 0.52]), %.1f s (need < 60)",
             r.auroc, mean_p, t));
}

void detection_and_cardinality() {
  const auto start = std::chrono::steady_clock::now();
  FixtureParams fp;  // 250 / 100 / 100 rows, 64 nodes, 16 shifted by 3
  fp.num_nodes = 64;
  fp.affected_nodes = 16;
  fp.shift = 3.0;
  fp.seed = 2;
  const Fixture f = make_synthetic_fixture(fp);

  ExperimentConfig config;
  config.group_size = 20;
  config.trials = 200;
  config.seed = 2;
  config.proportion = 0.5;
  const auto half = run_power_experiment(f.background, f.normal, f.anomalous, config);
  config.proportion = 0.1;
  const auto tenth = run_power_experiment(f.background, f.normal, f.anomalous, config);
  config.proportion = 0.5;
  const auto individual = run_individual_experiment(f.background, f.normal, f.anomalous, config);
  const double t = seconds_since(start);

  const bool pass = half.auroc >= 0.95 && tenth.auroc >= 0.8 && individual.auroc < half.auroc &&
                    t < 120.0;
  report(pass, "detection ordering",
         fmt("group auroc %.6f at 0.5 (need >= 0.95), %.6f at 0.1 (need >= 0.8); individual auroc "
             "%.6f (need < group at 0.5)",
             half.auroc, tenth.auroc, individual.auroc) +
             fmt("; %.1f s (need < 120)", t));

  const double pos = mean_nodes(half.positive_cardinalities);
  const double neg = mean_nodes(half.negative_cardinalities);
  report(pos > neg, "cardinality ordering",
         fmt("mean |O_S| positive %.3f vs negative %.3f (need positive > negative)", pos, neg));
}

void cli_determinism() {
  namespace fs = std::filesystem;
  auto pipeline = [](const fs::path& dir) {
    const std::string d = dir.string();
    const std::vector<std::string> steps = {
        "synth --out-dir " + d + " --seed 3 --num-background 250 --num-normal 100 --num-anomalous 100",
        "pvalues --background " + d + "/background.actmat --test " + d + "/anomalous.actmat --out " + d + "/p.actmat",
        "scan --pvalues " + d + "/p.actmat --seed 5 --restarts 10 --out " + d + "/scan.json",
        "scan-individual --pvalues " + d + "/p.actmat --out " + d + "/indiv.json",
        "power --background " + d + "/background.actmat --normal " + d + "/normal.actmat --anomalous " +
            d + "/anomalous.actmat --proportion 0.1 --trials 50 --seed 6 --out " + d + "/power.json",
        "report --input " + d + "/power.json --out " + d + "/card.csv",
    };
    for (const auto& s : steps) {
      if (cli_test::run(s).exit_code != 0) return false;
    }
    return true;
  };
  const auto a = cli_test::fresh_dir("subscan_accept_a");
  const auto b = cli_test::fresh_dir("subscan_accept_b");
  const bool ran = pipeline(a) && pipeline(b);
  int identical = 0, total = 0;
  for (const char* f : {"background.actmat", "normal.actmat", "anomalous.actmat", "p.actmat",
                        "scan.json", "indiv.json", "power.json", "card.csv"}) {
    ++total;
    const auto x = cli_test::slurp(a / f);
    if (!x.empty() && x == cli_test::slurp(b / f)) ++identical;
  }
  report(ran && identical == total, "determinism",
         fmt("%.0f/%.0f pipeline artifacts byte-identical across two runs", identical, total));
}

}  // namespace

int main() {
  oracle_equivalence();
  ltss_axis_exactness();
  bj_unit_values();
  null_calibration();
  detection_and_cardinality();
  cli_determinism();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
