#pragma once
// Operational metric definitions. None of these quantities has a canonical
// formula in the wild, so each is pinned precisely here:
//
//   SR   — fraction of episodes whose fused output aligns with the global
//          target at theta_global or better.
//   dSPL — success weighted by path efficiency: success * L_opt /
//          max(L_actual, L_opt), averaged over episodes. L_actual counts
//          executed agent ticks plus message step-equivalents.
//   Subtask F1 — greedy one-to-one matching of generated vs reference
//          embeddings at cosine >= tau_match; F1 of match counts.
//   Load balancing — 1 - Gini of per-agent executed step counts, Gini by the
//          pairwise formula sum |x_i - x_j| / (2 N sum x).
//
// External numbers are comparable to these only in shape, never absolutely.

#include <vector>

#include "macs/vec.hpp"

namespace macs {

struct EvalConfig {
    double theta_global = 0.75;  // fused-output success threshold
    double tau_match = 0.7;      // F1 match threshold

    void validate() const;
};

struct EpisodeOutcome {
    bool success = false;
    double global_alignment = -1.0;  // cosine(O, t_O); -1 when fusion degenerated
    double actual_steps = 0.0;       // L_actual
    double optimal_steps = 0.0;      // L_opt
    std::vector<Vec> generated_subtasks;
    std::vector<Vec> reference_subtasks;
    std::vector<long long> agent_step_counts;  // executed ticks per participating agent
    double consistency = 0.0;
    long long messages = 0;
    long long ticks = 0;
};

struct MetricsReport {
    double sr = 0.0;
    double dspl = 0.0;
    double subtask_f1 = 0.0;
    double load_balancing = 0.0;
    double consistency = 0.0;
    double avg_messages = 0.0;  // per episode
    double avg_ticks = 0.0;     // per episode
    long long episodes = 0;
};

double success_rate(const std::vector<EpisodeOutcome>& outcomes, double theta_global = 0.85);

double decomposition_spl(const std::vector<EpisodeOutcome>& outcomes);

double subtask_f1(const std::vector<Vec>& generated, const std::vector<Vec>& reference,
                  double tau_match = 0.7);

/// Pairwise-formula Gini complement. Throws ZeroWorkError when every count is
/// zero.
double load_balancing(const std::vector<long long>& step_counts);

/// Batch reduction in ascending episode order. Zero-work episodes contribute
/// 0 to the load-balancing mean instead of erroring.
MetricsReport aggregate_outcomes(const std::vector<EpisodeOutcome>& outcomes,
                                 const EvalConfig& eval);

}  // namespace macs
