#pragma once
// Tick-driven episode execution with synchronous message rounds.
//
// Round structure (one tick):
//   1. active agents (>= 1 unfinished subtask) emit one message per routing
//      recipient, carrying their pre-update state; delivery lands next tick;
//   2. every active agent blends its state toward its current subtask signal
//      and the normalized mean of last tick's inbox;
//   3. done flags update (absorbing) and the episode stops when every subtask
//      is done or the tick budget runs out.
//
// Agents read only previous-round state, so the outcome is independent of
// any within-round execution order; a trace is a pure function of
// (task, agents, configs, seed).

#include <cstdint>
#include <string>
#include <vector>

#include "macs/aggregate.hpp"
#include "macs/decompose.hpp"
#include "macs/metrics.hpp"
#include "macs/schedule.hpp"
#include "macs/semantics.hpp"
#include "macs/worldgen.hpp"

namespace macs {

struct RuntimeConfig {
    double rho = 0.3;        // state update rate in (0, 1)
    double mu = 0.7;         // task-vs-message mix in [0, 1]
    int comm_threshold = 4;  // F: max messages per agent per round
    int tick_budget = 64;    // B
    double theta_sub = 0.8;  // per-subtask success cosine
    double c_msg = 0.2;      // step-equivalent cost per message

    void validate() const;
};

struct AgentState {
    int id = 0;
    Vec state;  // unit norm
    std::vector<int> subtask_ids;
    long long ticks_used = 0;
    std::vector<bool> done;  // parallel to subtask_ids
    int rr_cursor = 0;       // round-robin position
};

struct Message {
    int sender = 0;
    int recipient = 0;
    int round = 0;
    Vec payload;      // sender's pre-update state
    int subject = 0;  // sender's current subtask id
};

enum class RoutingMode { similarity, random_recipients };

/// One structured event per trace line.
struct TraceEvent {
    int tick = 0;
    std::string kind;  // "state" | "msg" | "done" | "fusion" | "outcome"
    std::string payload_json;
};

struct EpisodeTrace {
    std::string header_json;  // config + seed snapshot; enough to re-simulate
    std::vector<TraceEvent> events;
    long long total_messages = 0;
    long long total_ticks = 0;
    std::vector<Vec> final_outputs;  // per participating agent, ascending id
};

struct EpisodeConfig {
    int k = 5;  // subtask count requested from the decomposer
    int depth = 1;
    DecomposeConfig decompose;
    ScheduleConfig schedule;
    RuntimeConfig runtime;
    FusionConfig fusion;
    EvalConfig eval;
    RoutingMode routing = RoutingMode::similarity;

    void validate() const;
};

/// Eq-style state update: with m the normalized inbox mean (the subtask
/// signal itself when the inbox is empty),
///   s' = normalize((1 - rho) s + rho (mu h + (1 - mu) m)),
/// keeping the previous state when the blend degenerates.
AgentState agent_step(const AgentState& state, const Vec& subtask_signal,
                      const std::vector<Message>& inbox, const RuntimeConfig& cfg);

/// Messages emitted this round by the given senders, ordered
/// (round, sender, recipient) lexicographically.
std::vector<Message> deliver(int round, const std::vector<AgentState>& states,
                             const std::vector<std::vector<int>>& routing,
                             const std::vector<bool>& sender_active);

struct EpisodeResult {
    EpisodeOutcome outcome;
    EpisodeTrace trace;
    SubtaskPlan plan;
    Assignment assignment;
    FusionResult fusion;
    bool fusion_degenerate = false;
};

/// Full pipeline for one task: encode/segment, decompose, assign, tick loop,
/// fuse, score. `seed` drives query directions and the random-routing
/// ablation; everything else is inherited from the task and configs.
EpisodeResult run_episode(const TaskInstance& task, const std::vector<AgentProfile>& agents,
                          const EpisodeConfig& cfg, std::uint64_t seed,
                          bool record_trace = false);

/// Seeded uniform recipient lists (the routing ablation): up to F distinct
/// other agents per sender, regardless of content.
std::vector<std::vector<int>> random_routing(std::size_t n_agents, int comm_threshold,
                                             std::uint64_t seed);

/// Serialize a trace as JSONL (header line first).
std::string trace_to_jsonl(const EpisodeTrace& trace);

}  // namespace macs
