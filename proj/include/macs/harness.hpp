#pragma once
// Experiment runner: seeded batches, axis sweeps, and deterministic artifact
// emission.
//
// Seeding scheme (documented so runs are reproducible anywhere):
//   episode seed  = batch_seed + episode_index
//   world seed    = episode seed (the world owns token hashing)
//   cell seed     = splitmix64(sweep_seed ^ fnv1a64(axis_name) ^ splitmix64(value))
// Episodes are embarrassingly parallel; results are assembled in episode
// order, so any worker count produces identical bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "macs/config.hpp"
#include "macs/metrics.hpp"
#include "macs/runtime.hpp"

namespace macs {

enum class SweepAxis { modules, threshold, subtasks };

struct SweepSpec {
    SweepAxis axis = SweepAxis::modules;
    std::vector<int> values;      // strictly increasing
    int episodes_per_cell = 200;
    RunConfig base;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SweepRow {
    std::string axis;
    int value = 0;
    RunConfig config;  // resolved cell config
    std::uint64_t cell_seed = 0;
    MetricsReport report;
};

struct BatchResult {
    MetricsReport report;
    std::vector<EpisodeOutcome> outcomes;
    std::vector<std::string> traces;  // JSONL per episode when requested
};

/// Seeded agent pool: pseudo-random unit skills, uniform capacity.
std::vector<AgentProfile> make_agents(const AgentPoolConfig& pool, int d, std::uint64_t seed);

/// n independent episodes with seeds seed+0..n-1, aggregated in episode
/// order. Config is validated before any episode runs.
BatchResult run_batch(const RunConfig& cfg, int n_episodes, std::uint64_t seed,
                      int workers = 1, bool record_traces = false);

std::uint64_t cell_seed(std::uint64_t sweep_seed, const std::string& axis_name, int value);

/// One row per cell; cells are independent and emitted in value order.
std::vector<SweepRow> sweep(const SweepSpec& spec, int workers = 1);

std::string axis_name(SweepAxis axis);

/// CSV / JSONL emission: stable column order, %.6g numbers, trailing newline.
std::string report_csv_header();
std::string report_csv_row(const std::string& axis, std::optional<int> value,
                           const RunConfig& cfg, std::uint64_t seed, int episodes,
                           const MetricsReport& rep);
std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::string rows_to_jsonl(const std::vector<SweepRow>& rows);

/// Arithmetic mean of the four headline metrics; used only for peak location.
double composite_score(const MetricsReport& rep);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// FNV-1a 64 content hash, hex-encoded; recorded in run manifests.
std::string content_hash_hex(const std::string& content);

/// manifest.json body for a finished run: config snapshot, seed, and a hash
/// per artifact. Byte-stable across re-runs of the same inputs.
std::string manifest_json(const RunConfig& cfg, std::uint64_t seed,
                          const std::vector<std::string>& artifact_paths);

}  // namespace macs
