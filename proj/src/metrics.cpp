#include "macs/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "macs/errors.hpp"

namespace macs {

void EvalConfig::validate() const {
    if (!(theta_global >= -1.0 && theta_global <= 1.0)) throw ConfigError("eval.theta_global must be in [-1, 1]");
    if (!(tau_match >= -1.0 && tau_match <= 1.0)) throw ConfigError("eval.tau_match must be in [-1, 1]");
}

double success_rate(const std::vector<EpisodeOutcome>& outcomes, double theta_global) {
    if (outcomes.empty()) throw EmptyBatchError("success_rate over empty batch");
    long long hits = 0;
    for (const auto& o : outcomes)
        if (o.global_alignment >= theta_global) ++hits;
    return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double decomposition_spl(const std::vector<EpisodeOutcome>& outcomes) {
    if (outcomes.empty()) throw EmptyBatchError("decomposition_spl over empty batch");
    double sum = 0.0;
    for (const auto& o : outcomes) {
        if (!(o.optimal_steps > 0.0)) throw ConfigError("decomposition_spl requires L_opt > 0");
        if (o.success) sum += o.optimal_steps / std::max(o.actual_steps, o.optimal_steps);
    }
    return sum / static_cast<double>(outcomes.size());
}

double subtask_f1(const std::vector<Vec>& generated, const std::vector<Vec>& reference,
                  double tau_match) {
    if (reference.empty()) throw ConfigError("subtask_f1 requires at least one reference");
    const std::size_t k = generated.size();
    const std::size_t r = reference.size();

    std::vector<bool> gen_used(k, false), ref_used(r, false);
    std::size_t matches = 0;
    // Greedy: repeatedly take the best unmatched pair above threshold; ties
    // resolve toward the lexicographically first (generated, reference) pair.
    while (true) {
        double best = tau_match;
        std::ptrdiff_t bi = -1, bj = -1;
        for (std::size_t i = 0; i < k; ++i) {
            if (gen_used[i]) continue;
            for (std::size_t j = 0; j < r; ++j) {
                if (ref_used[j]) continue;
                const double c = cosine(generated[i], reference[j]);
                if (c > best || (bi < 0 && c == best)) {
                    best = c;
                    bi = static_cast<std::ptrdiff_t>(i);
                    bj = static_cast<std::ptrdiff_t>(j);
                }
            }
        }
        if (bi < 0) break;
        gen_used[static_cast<std::size_t>(bi)] = true;
        ref_used[static_cast<std::size_t>(bj)] = true;
        ++matches;
    }

    const double precision = k == 0 ? 0.0 : static_cast<double>(matches) / static_cast<double>(k);
    const double recall = static_cast<double>(matches) / static_cast<double>(r);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double load_balancing(const std::vector<long long>& step_counts) {
    if (step_counts.empty()) throw ConfigError("load_balancing requires at least one agent");
    long long total = 0;
    for (const long long x : step_counts) {
        if (x < 0) throw ConfigError("step counts must be >= 0");
        total += x;
    }
    if (total == 0) throw ZeroWorkError("all step counts are zero");

    const std::size_t n = step_counts.size();
    double abs_diff_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            abs_diff_sum += std::abs(static_cast<double>(step_counts[i] - step_counts[j]));
        }
    }
    const double gini =
        abs_diff_sum / (2.0 * static_cast<double>(n) * static_cast<double>(total));
    return 1.0 - gini;
}

MetricsReport aggregate_outcomes(const std::vector<EpisodeOutcome>& outcomes,
                                 const EvalConfig& eval) {
    eval.validate();
    if (outcomes.empty()) throw EmptyBatchError("aggregate_outcomes over empty batch");

    MetricsReport rep;
    rep.episodes = static_cast<long long>(outcomes.size());
    rep.sr = success_rate(outcomes, eval.theta_global);
    rep.dspl = decomposition_spl(outcomes);

    double f1 = 0.0, lb = 0.0, cons = 0.0, msgs = 0.0, ticks = 0.0;
    for (const auto& o : outcomes) {
        f1 += subtask_f1(o.generated_subtasks, o.reference_subtasks, eval.tau_match);
        bool any_work = false;
        for (const long long x : o.agent_step_counts)
            if (x > 0) any_work = true;
        if (any_work) lb += load_balancing(o.agent_step_counts);
        cons += o.consistency;
        msgs += static_cast<double>(o.messages);
        ticks += static_cast<double>(o.ticks);
    }
    const double n = static_cast<double>(outcomes.size());
    rep.subtask_f1 = f1 / n;
    rep.load_balancing = lb / n;
    rep.consistency = cons / n;
    rep.avg_messages = msgs / n;
    rep.avg_ticks = ticks / n;
    return rep;
}

}  // namespace macs
