#include "macs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "macs/errors.hpp"
#include "macs/rng.hpp"

namespace macs {
namespace {

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

}  // namespace

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep.values must be non-empty");
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i] >= values[i + 1]) throw ConfigError("sweep.values must be strictly increasing");
    if (episodes_per_cell < 1) throw ConfigError("sweep.episodes_per_cell must be >= 1");
    base.validate();
}

std::vector<AgentProfile> make_agents(const AgentPoolConfig& pool, int d, std::uint64_t seed) {
    pool.validate();
    std::vector<AgentProfile> agents(static_cast<std::size_t>(pool.n_agents));
    const std::uint64_t base = mix_seed(seed, "agent-skill");
    for (int a = 0; a < pool.n_agents; ++a) {
        agents[static_cast<std::size_t>(a)] = {
            a, random_unit(mix_seed(base, static_cast<std::uint64_t>(a)), d), pool.capacity};
    }
    return agents;
}

BatchResult run_batch(const RunConfig& cfg, int n_episodes, std::uint64_t seed, int workers,
                      bool record_traces) {
    cfg.validate();
    if (n_episodes < 1) throw ConfigError("n_episodes must be >= 1");
    if (workers < 1) workers = 1;

    BatchResult result;
    result.outcomes.resize(static_cast<std::size_t>(n_episodes));
    if (record_traces) result.traces.resize(static_cast<std::size_t>(n_episodes));

    auto run_one = [&](int e) {
        const std::uint64_t episode_seed = seed + static_cast<std::uint64_t>(e);
        WorldSpec ws = cfg.world;
        ws.seed = episode_seed;
        ws.rho = cfg.episode.runtime.rho;
        const TaskInstance task = generate(ws);
        const std::vector<AgentProfile> agents =
            make_agents(cfg.pool, cfg.world.d, episode_seed);
        EpisodeResult er = run_episode(task, agents, cfg.episode, episode_seed, record_traces);
        if (record_traces) {
            nlohmann::json header;
            header["kind"] = "header";
            header["config"] = nlohmann::json::parse(cfg.to_json());
            header["episode_seed"] = episode_seed;
            er.trace.header_json = header.dump();
            result.traces[static_cast<std::size_t>(e)] = trace_to_jsonl(er.trace);
        }
        result.outcomes[static_cast<std::size_t>(e)] = std::move(er.outcome);
    };

    if (workers == 1 || n_episodes == 1) {
        for (int e = 0; e < n_episodes; ++e) run_one(e);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> threads;
        const int n_threads = std::min(workers, n_episodes);
        threads.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            threads.emplace_back([&] {
                for (int e = next.fetch_add(1); e < n_episodes; e = next.fetch_add(1)) run_one(e);
            });
        }
        for (auto& th : threads) th.join();
    }

    result.report = aggregate_outcomes(result.outcomes, cfg.episode.eval);
    return result;
}

std::uint64_t cell_seed(std::uint64_t sweep_seed, const std::string& axis_name, int value) {
    return splitmix64(sweep_seed ^ fnv1a64(axis_name) ^
                      splitmix64(static_cast<std::uint64_t>(value)));
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::modules: return "modules";
        case SweepAxis::threshold: return "threshold";
        case SweepAxis::subtasks: return "subtasks";
    }
    return "unknown";
}

namespace {

RunConfig apply_axis(const RunConfig& base, SweepAxis axis, int value) {
    RunConfig cfg = base;
    switch (axis) {
        case SweepAxis::modules:
            cfg.episode.k = value;
            break;
        case SweepAxis::threshold:
            cfg.episode.runtime.comm_threshold = value;
            break;
        case SweepAxis::subtasks:
            cfg.world.k_ref = value;
            cfg.episode.k = value;  // decomposer granularity tracks the world
            break;
    }
    return cfg;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec, int workers) {
    spec.validate();
    const std::string name = axis_name(spec.axis);
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size());
    for (const int value : spec.values) {
        SweepRow row;
        row.axis = name;
        row.value = value;
        row.config = apply_axis(spec.base, spec.axis, value);
        try {
            row.config.validate();
            row.cell_seed = cell_seed(spec.seed, name, value);
            row.report =
                run_batch(row.config, spec.episodes_per_cell, row.cell_seed, workers).report;
        } catch (const Error& e) {
            throw ConfigError("sweep cell " + name + "=" + std::to_string(value) + ": " + e.what());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double composite_score(const MetricsReport& rep) {
    return (rep.sr + rep.dspl + rep.subtask_f1 + rep.load_balancing) / 4.0;
}

std::string report_csv_header() {
    return "axis,value,k_ref,k,gamma,n_agents,capacity,beta,comm_threshold,tick_budget,"
           "projection,routing,seed,episodes,sr,dspl,subtask_f1,load_balancing,composite,"
           "consistency,avg_messages,avg_ticks";
}

std::string report_csv_row(const std::string& axis, std::optional<int> value,
                           const RunConfig& cfg, std::uint64_t seed, int episodes,
                           const MetricsReport& rep) {
    std::ostringstream out;
    out << axis << ',' << (value ? std::to_string(*value) : "") << ',' << cfg.world.k_ref << ','
        << cfg.episode.k << ',' << fmt6(cfg.world.gamma) << ',' << cfg.pool.n_agents << ','
        << cfg.pool.capacity << ',' << fmt6(cfg.episode.decompose.beta) << ','
        << cfg.episode.runtime.comm_threshold << ',' << cfg.episode.runtime.tick_budget << ','
        << (cfg.episode.fusion.project ? 1 : 0) << ','
        << (cfg.episode.routing == RoutingMode::similarity ? "similarity" : "random") << ','
        << seed << ',' << episodes << ',' << fmt6(rep.sr) << ',' << fmt6(rep.dspl) << ','
        << fmt6(rep.subtask_f1) << ',' << fmt6(rep.load_balancing) << ','
        << fmt6(composite_score(rep)) << ',' << fmt6(rep.consistency) << ','
        << fmt6(rep.avg_messages) << ',' << fmt6(rep.avg_ticks);
    return out.str();
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = report_csv_header();
    out.push_back('\n');
    for (const SweepRow& row : rows) {
        out += report_csv_row(row.axis, row.value, row.config, row.cell_seed,
                              static_cast<int>(row.report.episodes), row.report);
        out.push_back('\n');
    }
    return out;
}

std::string rows_to_jsonl(const std::vector<SweepRow>& rows) {
    std::string out;
    for (const SweepRow& row : rows) {
        nlohmann::json j;
        j["axis"] = row.axis;
        j["value"] = row.value;
        j["seed"] = row.cell_seed;
        j["episodes"] = row.report.episodes;
        j["sr"] = row.report.sr;
        j["dspl"] = row.report.dspl;
        j["subtask_f1"] = row.report.subtask_f1;
        j["load_balancing"] = row.report.load_balancing;
        j["composite"] = composite_score(row.report);
        j["consistency"] = row.report.consistency;
        j["avg_messages"] = row.report.avg_messages;
        j["avg_ticks"] = row.report.avg_ticks;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string content_hash_hex(const std::string& content) {
    const std::uint64_t h = fnv1a64(content);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string manifest_json(const RunConfig& cfg, std::uint64_t seed,
                          const std::vector<std::string>& artifact_paths) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(cfg.to_json());
    j["seed"] = seed;
    nlohmann::json arts = nlohmann::json::array();
    for (const std::string& path : artifact_paths) {
        const std::string name = std::filesystem::path(path).filename().string();
        arts.push_back({{"path", name}, {"fnv1a64", content_hash_hex(read_text_file(path))}});
    }
    j["artifacts"] = arts;
    return j.dump(2) + "\n";
}

}  // namespace macs
