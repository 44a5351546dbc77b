#include <doctest.h>

#include <regex>

#include "cli_util.hpp"
#include "subscan/dataio.hpp"
#include "subscan/harness.hpp"

using namespace cli_test;
namespace fs = std::filesystem;

namespace {

double number_after(const std::string& text, const std::string& key) {
  std::smatch m;
  const std::regex re(key + " ([0-9.eE+-]+)");
  REQUIRE(std::regex_search(text, m, re));
  return std::stod(m[1].str());
}

struct Workspace {
  fs::path dir;
  std::string bg, normal, anomalous;

  explicit Workspace(const std::string& name) : dir(fresh_dir(name)) {
    const auto r = run("synth --out-dir " + dir.string() + " --seed 4");
    REQUIRE(r.exit_code == 0);
    bg = (dir / "background.actmat").string();
    normal = (dir / "normal.actmat").string();
    anomalous = (dir / "anomalous.actmat").string();
  }
  std::string path(const std::string& f) const { return (dir / f).string(); }
};

}  // namespace

TEST_CASE("cli: --help on every subcommand") {
  CHECK(run("--help").exit_code == 0);
  for (const char* sub : {"pvalues", "scan", "scan-individual", "power", "synth", "report"}) {
    const auto r = run(std::string(sub) + " --help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Usage") != std::string::npos);
  }
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("nonsense").exit_code == 2);
  CHECK(run("scan --pvalues x").exit_code == 2);
  CHECK(run("scan --pvalues x --out y --restarts 0").exit_code == 2);
  CHECK(run("scan --pvalues x --out y --alpha-grid linspace:0").exit_code == 2);
  CHECK(run("power --background a --normal b --anomalous c --out d --mode sideways").exit_code == 2);
}

TEST_CASE("cli: pvalues") {
  Workspace w("subscan_cli_pvalues");

  SUBCASE("writes background_size from the background row count") {
    const auto r = run("pvalues --background " + w.bg + " --test " + w.normal + " --out " +
                       w.path("p.actmat"));
    CHECK(r.exit_code == 0);
    const auto p = subscan::read_pvalues(w.path("p.actmat"));
    CHECK(p.background_size() == 250);
    CHECK(p.rows() == 100);
    CHECK(p.cols() == 64);
  }
  SUBCASE("mismatched widths name both") {
    REQUIRE(run("synth --out-dir " + w.path("narrow") + " --num-nodes 10 --affected-nodes 2")
                .exit_code == 0);
    const auto r = run("pvalues --background " + w.bg + " --test " + w.path("narrow/normal.actmat") +
                       " --out " + w.path("bad.actmat"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("64") != std::string::npos);
    CHECK(r.output.find("10") != std::string::npos);
    CHECK_FALSE(fs::exists(w.path("bad.actmat")));
  }
  SUBCASE("refuses to clobber without --force") {
    const std::string args =
        "pvalues --background " + w.bg + " --test " + w.normal + " --out " + w.path("p2.actmat");
    CHECK(run(args).exit_code == 0);
    CHECK(run(args).exit_code == 2);
    CHECK(run(args + " --force").exit_code == 0);
  }
  SUBCASE("missing input is an I/O failure") {
    CHECK(run("pvalues --background " + w.path("nope.actmat") + " --test " + w.normal + " --out " +
              w.path("p3.actmat"))
              .exit_code == 1);
  }
  SUBCASE("malformed input is a validation failure, not a crash") {
    subscan::write_text_file("{\"format_version\":1}\n\x01\x02", w.path("junk.actmat"));
    subscan::write_text_file("garbage without newline", w.path("junk2.actmat"));
    for (const char* junk : {"junk.actmat", "junk2.actmat"}) {
      const auto r = run("pvalues --background " + w.path(junk) + " --test " + w.normal +
                         " --out " + w.path("p4.actmat"));
      CHECK(r.exit_code == 2);
    }
  }
  SUBCASE("csv inputs work") {
    REQUIRE(run("synth --out-dir " + w.path("csv") + " --format csv --num-background 30 "
                "--num-normal 5 --num-anomalous 5 --num-nodes 4 --affected-nodes 1")
                .exit_code == 0);
    CHECK(run("pvalues --background " + w.path("csv/background.csv") + " --test " +
              w.path("csv/normal.csv") + " --out " + w.path("csv_p.actmat"))
              .exit_code == 0);
  }
}

TEST_CASE("cli: scan") {
  Workspace w("subscan_cli_scan");
  REQUIRE(run("pvalues --background " + w.bg + " --test " + w.anomalous + " --out " +
              w.path("p.actmat"))
              .exit_code == 0);

  SUBCASE("same flags twice give byte-identical output") {
    const std::string flags = " --restarts 4 --seed 99 --alpha-grid linspace:50";
    CHECK(run("scan --pvalues " + w.path("p.actmat") + flags + " --out " + w.path("a.json"))
              .exit_code == 0);
    CHECK(run("scan --pvalues " + w.path("p.actmat") + flags + " --out " + w.path("b.json"))
              .exit_code == 0);
    CHECK(slurp(w.path("a.json")) == slurp(w.path("b.json")));
    const auto stored = subscan::result_from_json(slurp(w.path("a.json")));
    CHECK(stored.config.seed == 99);
    CHECK(stored.config.restarts == 4);
    CHECK(stored.alpha_grid.size() == 50);
  }
  SUBCASE("empirical grid is bounded by the distinct p-values") {
    // 4 background rows: at most 5 lattice values.
    REQUIRE(run("synth --out-dir " + w.path("small") + " --num-background 4 --num-normal 6 "
                "--num-anomalous 6 --num-nodes 5 --affected-nodes 1")
                .exit_code == 0);
    REQUIRE(run("pvalues --background " + w.path("small/background.actmat") + " --test " +
                w.path("small/anomalous.actmat") + " --out " + w.path("small_p.actmat"))
                .exit_code == 0);
    CHECK(run("scan --pvalues " + w.path("small_p.actmat") + " --alpha-grid empirical --out " +
              w.path("e.json"))
              .exit_code == 0);
    const auto stored = subscan::result_from_json(slurp(w.path("e.json")));
    CHECK(stored.alpha_grid.size() <= 5);
    CHECK(stored.config.alpha_grid.to_string() == "empirical");
  }
  SUBCASE("activations are not accepted as p-values") {
    CHECK(run("scan --pvalues " + w.bg + " --out " + w.path("x.json")).exit_code == 2);
  }
  SUBCASE("scan-individual writes one result per row") {
    CHECK(run("scan-individual --pvalues " + w.path("p.actmat") + " --out " + w.path("i.json"))
              .exit_code == 0);
    CHECK(subscan::results_from_json(slurp(w.path("i.json"))).size() == 100);
    const auto r = run("report --input " + w.path("i.json") + " --out " + w.path("i.csv"));
    CHECK(r.exit_code == 0);
    CHECK(slurp(w.path("i.csv")).rfind("label,entry,sample_cardinality,node_cardinality\n", 0) == 0);
  }
}

TEST_CASE("cli: end-to-end power and report") {
  Workspace w("subscan_cli_power");
  const std::string pools =
      " --background " + w.bg + " --normal " + w.normal + " --anomalous " + w.anomalous;

  SUBCASE("proportion 0.5 is detected") {
    REQUIRE(run("power" + pools + " --proportion 0.5 --trials 60 --out " + w.path("p.json"))
                .exit_code == 0);
    const auto r = run("report --input " + w.path("p.json") + " --out " + w.path("p.csv"));
    REQUIRE(r.exit_code == 0);
    CHECK(number_after(r.output, "auroc") >= 0.95);
    CHECK(slurp(w.path("p.csv")).find("positive,mean,") != std::string::npos);
    const auto report = subscan::report_from_json(slurp(w.path("p.json")));
    CHECK(report.config.proportion == 0.5);
    CHECK(report.positive_scores.size() == 60);
  }
  SUBCASE("proportion 0 stays near chance") {
    const auto r = run("power" + pools + " --proportion 0 --trials 200 --out " + w.path("n.json"));
    REQUIRE(r.exit_code == 0);
    const double a = number_after(r.output, "auroc");
    CHECK(a >= 0.4);
    CHECK(a <= 0.6);
  }
  SUBCASE("individual mode") {
    const auto r = run("power" + pools + " --mode individual --out " + w.path("i.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(subscan::report_from_json(slurp(w.path("i.json"))).positive_scores.size() == 100);
  }
  SUBCASE("pool too small for a without-replacement draw") {
    CHECK(run("power" + pools + " --group-size 150 --trials 2 --out " + w.path("x.json"))
              .exit_code == 2);
  }
}
