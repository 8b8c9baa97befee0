#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "macs/errors.hpp"
#include "macs/harness.hpp"

using namespace macs;

namespace {

RunConfig quick_cfg() {
    RunConfig cfg;
    cfg.episode.runtime.tick_budget = 24;
    return cfg;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/macs_harness_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config JSON round-trips and validates") {
    RunConfig cfg;
    cfg.world.gamma = 0.25;
    cfg.episode.runtime.comm_threshold = 6;
    cfg.episode.fusion.project = false;
    cfg.episode.routing = RoutingMode::random_recipients;
    const RunConfig back = RunConfig::from_json(cfg.to_json());
    CHECK(back.world.gamma == 0.25);
    CHECK(back.episode.runtime.comm_threshold == 6);
    CHECK_FALSE(back.episode.fusion.project);
    CHECK(back.episode.routing == RoutingMode::random_recipients);

    CHECK_THROWS_AS(RunConfig::from_json("{"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(R"({"runtime":{"rho":1.5}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(R"({"runtime":{"rho":"fast"}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(R"({"routing":"psychic"})"), ConfigError);
}

TEST_CASE("batch of one equals a single episode") {
    const RunConfig cfg = quick_cfg();
    const BatchResult batch = run_batch(cfg, 1, 77);

    WorldSpec ws = cfg.world;
    ws.seed = 77;
    ws.rho = cfg.episode.runtime.rho;
    const TaskInstance task = generate(ws);
    const auto agents = make_agents(cfg.pool, cfg.world.d, 77);
    const EpisodeResult single = run_episode(task, agents, cfg.episode, 77);

    CHECK(batch.outcomes.size() == 1);
    CHECK(batch.outcomes[0].global_alignment == single.outcome.global_alignment);
    CHECK(batch.outcomes[0].actual_steps == single.outcome.actual_steps);
    CHECK(batch.outcomes[0].messages == single.outcome.messages);
}

TEST_CASE("identical config and seed give identical CSV bytes") {
    const RunConfig cfg = quick_cfg();
    const BatchResult a = run_batch(cfg, 8, 5);
    const BatchResult b = run_batch(cfg, 8, 5);
    const std::string row_a = report_csv_row("batch", std::nullopt, cfg, 5, 8, a.report);
    const std::string row_b = report_csv_row("batch", std::nullopt, cfg, 5, 8, b.report);
    CHECK(row_a == row_b);
}

TEST_CASE("worker count does not change results") {
    const RunConfig cfg = quick_cfg();
    const BatchResult serial = run_batch(cfg, 10, 9, 1, true);
    const BatchResult parallel = run_batch(cfg, 10, 9, 8, true);
    CHECK(serial.report.sr == parallel.report.sr);
    CHECK(serial.report.dspl == parallel.report.dspl);
    CHECK(serial.report.subtask_f1 == parallel.report.subtask_f1);
    CHECK(serial.report.load_balancing == parallel.report.load_balancing);
    REQUIRE(serial.traces.size() == parallel.traces.size());
    for (std::size_t e = 0; e < serial.traces.size(); ++e)
        CHECK(serial.traces[e] == parallel.traces[e]);
}

TEST_CASE("sweep cells equal standalone batches with the derived seed") {
    SweepSpec spec;
    spec.axis = SweepAxis::threshold;
    spec.values = {0, 2};
    spec.episodes_per_cell = 4;
    spec.base = quick_cfg();
    spec.seed = 31;
    const std::vector<SweepRow> rows = sweep(spec);
    REQUIRE(rows.size() == 2);

    for (const SweepRow& row : rows) {
        RunConfig cell_cfg = quick_cfg();
        cell_cfg.episode.runtime.comm_threshold = row.value;
        const std::uint64_t seed = cell_seed(31, "threshold", row.value);
        CHECK(seed == row.cell_seed);
        const BatchResult standalone = run_batch(cell_cfg, 4, seed);
        CHECK(standalone.report.sr == row.report.sr);
        CHECK(standalone.report.dspl == row.report.dspl);
    }
}

TEST_CASE("sweep validates its spec") {
    SweepSpec spec;
    spec.values = {};
    CHECK_THROWS_AS(sweep(spec), ConfigError);
    spec.values = {3, 3};
    CHECK_THROWS_AS(sweep(spec), ConfigError);
    spec.values = {1, 2};
    spec.episodes_per_cell = 0;
    CHECK_THROWS_AS(sweep(spec), ConfigError);
}

TEST_CASE("sweep errors carry cell coordinates") {
    SweepSpec spec;
    spec.axis = SweepAxis::modules;
    spec.values = {0, 1};  // k = 0 is invalid
    spec.episodes_per_cell = 1;
    spec.base = quick_cfg();
    try {
        sweep(spec);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("modules=0") != std::string::npos);
    }
}

TEST_CASE("CSV emission is stable, headered, and newline-terminated") {
    CHECK(rows_to_csv({}) == report_csv_header() + "\n");

    SweepSpec spec;
    spec.axis = SweepAxis::threshold;
    spec.values = {0, 1};
    spec.episodes_per_cell = 2;
    spec.base = quick_cfg();
    spec.seed = 3;
    const auto rows = sweep(spec);
    const std::string csv = rows_to_csv(rows);
    CHECK(csv == rows_to_csv(sweep(spec)));
    CHECK(csv.back() == '\n');

    // Values round-trip at printed precision.
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    CHECK(header == report_csv_header());
    std::getline(in, line);
    CHECK(line.find("threshold,0,") == 0);
}

TEST_CASE("JSONL emission mirrors the CSV rows") {
    SweepSpec spec;
    spec.axis = SweepAxis::modules;
    spec.values = {2, 3};
    spec.episodes_per_cell = 2;
    spec.base = quick_cfg();
    spec.seed = 4;
    const auto rows = sweep(spec);
    const std::string jsonl = rows_to_jsonl(rows);
    CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 2);
    CHECK(jsonl == rows_to_jsonl(rows));
}

TEST_CASE("manifest hashes artifacts deterministically") {
    const RunConfig cfg = quick_cfg();
    TempFile f("artifact.csv");
    write_text_file(f.path, "axis,value\nx,1\n");
    const std::string m1 = manifest_json(cfg, 12, {f.path});
    const std::string m2 = manifest_json(cfg, 12, {f.path});
    CHECK(m1 == m2);
    CHECK(m1.find("fnv1a64") != std::string::npos);
    CHECK(m1.find("artifact.csv") != std::string::npos);

    write_text_file(f.path, "axis,value\nx,2\n");
    CHECK(manifest_json(cfg, 12, {f.path}) != m1);
}

TEST_CASE("composite score is the mean of the four headline metrics") {
    MetricsReport rep;
    rep.sr = 0.8;
    rep.dspl = 0.6;
    rep.subtask_f1 = 0.4;
    rep.load_balancing = 1.0;
    CHECK(composite_score(rep) == doctest::Approx(0.7));
}
