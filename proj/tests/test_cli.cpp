#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "resilience/cli/commands.hpp"
#include "resilience/cli/csv.hpp"

namespace fs = std::filesystem;
using resilience::cli::read_csv;

namespace {

struct RunResult {
    int status;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "resilience_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run(const fs::path& dir, const std::string& args) {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd =
        std::string("\"") + RESILIENCE_BIN + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return {status, slurp(out), slurp(err)};
}

fs::path write_file(const fs::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

// K_core on ids 0..core-1 with each fringe id linked to one core node.
std::string planted_edges(int core, int fringe) {
    std::ostringstream os;
    for (int u = 0; u < core; ++u) {
        for (int v = u + 1; v < core; ++v) os << u << ' ' << v << '\n';
    }
    for (int i = 0; i < fringe; ++i) os << core + i << ' ' << i % core << '\n';
    return os.str();
}

void run_pipeline(const fs::path& dir, const std::string& seed) {
    const auto edges = write_file(dir / "g.txt", planted_edges(12, 60));
    const auto out = dir / "out";
    const auto graph = out / "graph.clg";
    const auto common = " --out " + quoted(out) + " --seed " + seed;
    REQUIRE(run(dir, "ingest --input " + quoted(edges) + common).status == 0);
    REQUIRE(run(dir, "plfit --trials 5 --input " + quoted(graph) + common).status == 0);
    REQUIRE(run(dir, "resilience --input " + quoted(graph) + common).status == 0);
    REQUIRE(run(dir, "atrisk --width 10 --input " + quoted(graph) + common).status == 0);
    const auto observed = write_file(dir / "observed.csv",
                                     "date,value\n2020-01-01,100\n2020-01-02,90\n2020-01-03,20\n2020-01-04,10\n");
    REQUIRE(run(dir, "fit --observed " + quoted(observed) +
                         " --ref-a 2020-01-01:1 --ref-b 2020-01-05:5 --input " + quoted(graph) + common)
                .status == 0);
}

}  // namespace

TEST_CASE("ingest canonicalizes a small edge list") {
    const auto dir = scratch("ingest");
    const auto edges = write_file(dir / "e.txt", "1 2\n2 3\n3 4\n4 5\n5 1\n2 1\n");
    const auto r = run(dir, "ingest --input " + quoted(edges) + " --out " + quoted(dir / "out") + " --seed 3");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("n=5 m=5") != std::string::npos);
    const auto summary = read_csv(dir / "out" / "summary.csv");
    CHECK(summary.meta.at("seed") == "3");
    CHECK(summary.rows.at(0).at(summary.column("n")) == "5");
    CHECK(summary.rows.at(0).at(summary.column("m")) == "5");
    CHECK(fs::exists(dir / "out" / "graph.clg"));
}

TEST_CASE("ingest accepts an empty file") {
    const auto dir = scratch("ingest_empty");
    const auto edges = write_file(dir / "e.txt", "");
    const auto r = run(dir, "ingest --input " + quoted(edges) + " --out " + quoted(dir / "out"));
    CHECK(r.status == 0);
    CHECK(r.out.find("n=0 m=0") != std::string::npos);
}

TEST_CASE("ingest reports the offending line") {
    const auto dir = scratch("ingest_bad");
    const auto edges = write_file(dir / "e.txt", "1 2\n2 3\n3 x\n");
    const auto r = run(dir, "ingest --input " + quoted(edges) + " --out " + quoted(dir / "out"));
    CHECK(r.status != 0);
    CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("kcore writes coreness, shells and spread") {
    const auto dir = scratch("kcore");
    const auto edges = write_file(dir / "e.txt", planted_edges(5, 3));
    REQUIRE(run(dir, "kcore --bins exact --input " + quoted(edges) + " --out " + quoted(dir / "out")).status == 0);
    const auto core = read_csv(dir / "out" / "coreness.csv");
    CHECK(core.rows.size() == 8);
    CHECK(core.rows[0][core.column("coreness")] == "4");
    CHECK(core.rows[7][core.column("coreness")] == "1");
    const auto shells = read_csv(dir / "out" / "shells.csv");
    CHECK(fs::exists(dir / "out" / "coreness_by_degree.csv"));
    CHECK(shells.header == std::vector<std::string>{"k_s", "count"});
}

TEST_CASE("resilience on a planted core and on a cycle") {
    const auto dir = scratch("resilience");
    const auto planted = write_file(dir / "planted.txt", planted_edges(20, 100));
    std::ostringstream cycle;
    for (int i = 0; i < 10; ++i) cycle << i << ' ' << (i + 1) % 10 << '\n';
    const auto c10 = write_file(dir / "c10.txt", cycle.str());
    const auto r = run(dir, "resilience --input " + quoted(planted) + " " + quoted(c10) + " --out " +
                                quoted(dir / "out") + " --survival 0.2 0.5");
    REQUIRE(r.status == 0);

    const auto summary = read_csv(dir / "out" / "resilience_summary.csv");
    REQUIRE(summary.rows.size() == 2);
    CHECK(summary.rows[0][summary.column("dataset")] == "planted");
    CHECK(summary.rows[0][summary.column("k_max")] == "19");
    CHECK(summary.rows[1][summary.column("k_max")] == "2");

    const auto ccdf = read_csv(dir / "out" / "ccdf_c10.csv");
    REQUIRE(ccdf.rows.size() == 3);
    for (const auto& row : ccdf.rows) CHECK(row[ccdf.column("fraction")] == "1");

    const auto merged = read_csv(dir / "out" / "resilience.csv");
    std::size_t planted_rows = 0, cycle_rows = 0;
    for (const auto& row : merged.rows) {
        planted_rows += row[0] == "planted";
        cycle_rows += row[0] == "c10";
    }
    CHECK(planted_rows == 20);
    CHECK(cycle_rows == 3);
    CHECK(read_csv(dir / "out" / "catastrophic.csv").rows.size() == 4);
}

TEST_CASE("equilibrium and unravel commands") {
    const auto dir = scratch("equilibrium");
    const auto edges = write_file(dir / "e.txt", planted_edges(8, 20));
    REQUIRE(run(dir, "equilibrium --c 2 --b 1 --input " + quoted(edges) + " --out " + quoted(dir / "out")).status ==
            0);
    const auto members = read_csv(dir / "out" / "equilibrium.csv");
    CHECK(members.rows.size() == 8);
    CHECK(members.rows[0][members.column("utility")] == "5");

    REQUIRE(run(dir, "unravel --k0 1 --rate 2 --horizon 4 --input " + quoted(edges) + " --out " +
                         quoted(dir / "out"))
                .status == 0);
    const auto series = read_csv(dir / "out" / "unravel.csv");
    REQUIRE(series.rows.size() == 5);
    CHECK(series.rows[0][series.column("remaining")] == "28");
    CHECK(series.rows[1][series.column("remaining")] == "8");
    CHECK(series.rows[4][series.column("remaining")] == "0");

    CHECK(run(dir, "equilibrium --c 0 --b 1 --input " + quoted(edges) + " --out " + quoted(dir / "out")).status !=
          0);
}

TEST_CASE("timeslice and atrisk commands") {
    const auto dir = scratch("timeslice");
    std::ostringstream path;
    for (int i = 0; i + 1 < 100; ++i) path << i << ' ' << i + 1 << '\n';
    const auto edges = write_file(dir / "path.txt", path.str());
    REQUIRE(run(dir, "timeslice --width 10 --input " + quoted(edges) + " --out " + quoted(dir / "out")).status == 0);
    const auto t = read_csv(dir / "out" / "timeslice.csv");
    CHECK(t.header == std::vector<std::string>{"t", "slice_start", "slice_end", "n", "e_in", "e_p", "e_f",
                                               "avg_deg_in", "P", "F", "baseline_P", "baseline_F"});
    REQUIRE(t.rows.size() == 10);
    CHECK(t.rows[0][t.column("P")].empty());
    CHECK(t.rows[5][t.column("P")] == "1");
    CHECK(t.rows[9][t.column("F")].empty());

    REQUIRE(run(dir, "atrisk --width 25 --threshold 2 --input " + quoted(edges) + " --out " + quoted(dir / "out"))
                .status == 0);
    const auto a = read_csv(dir / "out" / "atrisk.csv");
    CHECK(a.header == std::vector<std::string>{"t", "fraction", "ci_low", "ci_high"});
    CHECK(a.rows.size() == 4);
    CHECK(a.rows[0][1] == "1");
}

TEST_CASE("plfit on a histogram") {
    const auto dir = scratch("plfit");
    std::ostringstream hist;
    hist << "degree,count\n";
    for (int d = 1; d <= 200; ++d) hist << d << ',' << static_cast<int>(20000.0 / (d * d * std::sqrt(d))) + 1 << '\n';
    const auto h = write_file(dir / "hist.csv", hist.str());
    REQUIRE(run(dir, "plfit --trials 4 --per-trial --input " + quoted(h) + " --out " + quoted(dir / "out") +
                         " --seed 9")
                .status == 0);
    const auto row = read_csv(dir / "out" / "plfit.csv");
    CHECK(row.header == std::vector<std::string>{"dataset", "deg_min", "alpha", "n_tail", "D", "p", "range_decades",
                                                 "tail_pct"});
    CHECK(row.meta.at("seed") == "9");
    CHECK(read_csv(dir / "out" / "plfit_trials.csv").rows.size() == 4);
}

TEST_CASE("report bundles the pipeline outputs") {
    const auto dir = scratch("report");
    run_pipeline(dir, "42");
    const auto out = dir / "out";
    REQUIRE(run(dir, "report --input " + quoted(out) + " --out " + quoted(out) + " --seed 42").status == 0);
    const auto first = slurp(out / "report.json");
    REQUIRE(run(dir, "report --input " + quoted(out) + " --out " + quoted(out) + " --seed 42").status == 0);
    CHECK(slurp(out / "report.json") == first);

    const auto doc = nlohmann::json::parse(first);
    CHECK(doc.at("seed") == 42);
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("summary").at(0).at("n") == 72);
    CHECK(doc.at("resilience").at("summary").at(0).at("k_max") == 11);
    CHECK(doc.contains("power_law"));
    CHECK(doc.contains("at_risk"));
    CHECK(doc.contains("unravel_fit"));
}

TEST_CASE("report lists every missing artifact") {
    const auto dir = scratch("report_missing");
    const auto r = run(dir, "report --input " + quoted(dir) + " --out " + quoted(dir / "out"));
    CHECK(r.status != 0);
    for (const auto& name : resilience::cli::report_artifacts()) CHECK(r.err.find(name) != std::string::npos);
}

TEST_CASE("unknown flags and missing inputs are rejected") {
    const auto dir = scratch("flags");
    CHECK(run(dir, "kcore --input x --bogus 1").status != 0);
    CHECK(run(dir, "kcore --input " + quoted(dir / "missing.txt")).status != 0);
    CHECK(run(dir, "").status != 0);
}

TEST_CASE("iso dates round trip") {
    using resilience::cli::format_iso_date;
    using resilience::cli::parse_iso_date;
    CHECK(parse_iso_date("1970-01-01") == 0);
    CHECK(parse_iso_date("2009-03-01T12:00:00") == 14304);
    CHECK(format_iso_date(14304) == "2009-03-01");
    CHECK_THROWS_AS(parse_iso_date("2009-02-30"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso_date("yesterday"), std::invalid_argument);
}
