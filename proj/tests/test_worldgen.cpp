#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "macs/errors.hpp"
#include "macs/worldgen.hpp"

using namespace macs;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/macs_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("contraction steps solve (1-rho)^t <= 0.1") {
    CHECK(contraction_steps(0.3) == 7);   // 0.7^7 = 0.0824
    CHECK(contraction_steps(0.5) == 4);   // 0.5^4 = 0.0625
    CHECK(contraction_steps(0.9) == 1);
    CHECK_THROWS_AS(contraction_steps(0.0), SpecError);
}

TEST_CASE("generate is deterministic and well-formed") {
    WorldSpec spec;
    spec.seed = 42;
    const TaskInstance a = generate(spec);
    const TaskInstance b = generate(spec);
    CHECK(a.task_text == b.task_text);
    CHECK(a.global_target == b.global_target);
    for (std::size_t i = 0; i < a.targets.size(); ++i) CHECK(a.targets[i] == b.targets[i]);

    REQUIRE(a.reference_subtask_texts.size() == 5);
    CHECK(a.optimal_steps == 5 * 7);
    for (const Vec& t : a.targets) CHECK(norm(t) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(norm(a.global_target) == doctest::Approx(1.0).epsilon(1e-9));

    // Every reference token and the shared sentence live inside the task text.
    for (const std::string& text : a.reference_subtask_texts)
        CHECK(a.task_text.find(text) != std::string::npos);
}

TEST_CASE("gamma endpoints degenerate exactly") {
    WorldSpec spec;
    spec.seed = 9;

    spec.gamma = 0.0;
    const TaskInstance local = generate(spec);
    for (std::size_t i = 0; i < local.targets.size(); ++i)
        CHECK(local.targets[i] == local.local_targets[i]);

    spec.gamma = 1.0;
    const TaskInstance shared = generate(spec);
    for (const Vec& t : shared.targets) CHECK(t == shared.shared_vector);
}

TEST_CASE("gamma interpolates monotonically between local and shared") {
    std::vector<double> gammas = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        double prev_local = 2.0, prev_shared = -2.0;
        for (const double g : gammas) {
            WorldSpec spec;
            spec.seed = seed;
            spec.gamma = g;
            const TaskInstance task = generate(spec);
            const double to_local = cosine(task.targets[0], task.local_targets[0]);
            const double to_shared = cosine(task.targets[0], task.shared_vector);
            CHECK(to_local < prev_local);
            CHECK(to_shared > prev_shared);
            prev_local = to_local;
            prev_shared = to_shared;
        }
    }
}

TEST_CASE("reference texts re-encode to the stored locals bit-exactly") {
    WorldSpec spec;
    spec.seed = 123;
    const TaskInstance task = generate(spec);
    for (std::size_t i = 0; i < task.reference_subtask_texts.size(); ++i)
        CHECK(encode(task.reference_subtask_texts[i], task.encoder) == task.local_targets[i]);
}

TEST_CASE("global target is permutation invariant") {
    WorldSpec spec;
    spec.seed = 55;
    const TaskInstance task = generate(spec);
    std::vector<Vec> shuffled = {task.targets[3], task.targets[0], task.targets[4],
                                 task.targets[1], task.targets[2]};
    Vec sum = zeros(64);
    for (const Vec& t : shuffled) add_scaled(sum, t, 1.0);
    const Vec reordered = normalized(sum);
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(reordered[k] == doctest::Approx(task.global_target[k]).epsilon(1e-12));
}

TEST_CASE("spec validation") {
    WorldSpec spec;
    spec.k_ref = 0;
    CHECK_THROWS_AS(generate(spec), SpecError);
    spec = WorldSpec{};
    spec.gamma = 1.5;
    CHECK_THROWS_AS(generate(spec), SpecError);
}

TEST_CASE("ingest parses well-formed corpora") {
    TempFile f("ok.jsonl");
    {
        std::ofstream out(f.path);
        out << R"({"id":"t1","task_text":"alpha beta gamma","reference_subtasks":["alpha","beta gamma"],"metadata":{"source":"unit"}})" << "\n";
        out << R"({"id":"t2","task_text":"delta epsilon","reference_subtasks":["delta epsilon"],"metadata":{}})" << "\n";
        out << R"({"id":"t3","task_text":"zeta eta theta","reference_subtasks":["zeta","eta","theta"]})" << "\n";
    }
    const std::vector<CorpusRecord> records = ingest(f.path);
    REQUIRE(records.size() == 3);
    CHECK(records[0].id == "t1");
    CHECK(records[0].metadata.at("source") == "unit");
    CHECK(records[2].reference_subtasks.size() == 3);
}

TEST_CASE("ingest reports schema violations with line numbers") {
    TempFile f("bad_schema.jsonl");
    {
        std::ofstream out(f.path);
        out << R"({"id":"t1","task_text":"alpha","reference_subtasks":["alpha"]})" << "\n";
        out << R"({"id":"t2","task_text":"beta"})" << "\n";
    }
    try {
        ingest(f.path);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("reference_subtasks") != std::string::npos);
    }
}

TEST_CASE("ingest reports parse failures with line numbers") {
    TempFile f("bad_parse.jsonl");
    {
        std::ofstream out(f.path);
        out << R"({"id":"t1","task_text":"alpha","reference_subtasks":["alpha"]})" << "\n";
        out << "{not json\n";
    }
    try {
        ingest(f.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("corpus round-trip is the identity") {
    std::vector<CorpusRecord> records;
    for (int i = 0; i < 5; ++i) {
        CorpusRecord rec;
        rec.id = "task-" + std::to_string(i);
        rec.task_text = "text for task " + std::to_string(i);
        rec.reference_subtasks = {"part a " + std::to_string(i), "part b"};
        rec.metadata = {{"k", "v" + std::to_string(i)}};
        records.push_back(std::move(rec));
    }
    TempFile f("roundtrip.jsonl");
    write_corpus(records, f.path);
    const std::vector<CorpusRecord> back = ingest(f.path);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].id == records[i].id);
        CHECK(back[i].task_text == records[i].task_text);
        CHECK(back[i].reference_subtasks == records[i].reference_subtasks);
        CHECK(back[i].metadata == records[i].metadata);
    }
}

TEST_CASE("to_task forces gamma to zero semantics") {
    CorpusRecord rec;
    rec.id = "x";
    rec.task_text = "alpha beta gamma delta";
    rec.reference_subtasks = {"alpha beta", "gamma delta"};
    EncoderConfig enc;
    const TaskInstance task = to_task(rec, enc);
    REQUIRE(task.targets.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(task.targets[i] == task.local_targets[i]);
    CHECK(is_zero(task.shared_vector));
    CHECK(task.optimal_steps == 2 * 7);
}
