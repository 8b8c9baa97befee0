#include "macs/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "macs/errors.hpp"

namespace macs {

void ScheduleConfig::validate() const {
    if (!(lambda_load >= 0.0) || !std::isfinite(lambda_load))
        throw ConfigError("schedule.lambda_load must be finite and >= 0");
}

double score(const AgentProfile& agent, const Subtask& sub, int current_load,
             const ScheduleConfig& cfg) {
    return cosine(agent.skill, sub.embedding) -
           cfg.lambda_load * static_cast<double>(current_load) / static_cast<double>(agent.capacity);
}

Assignment assign(const std::vector<AgentProfile>& agents, const SubtaskPlan& plan,
                  const ScheduleConfig& cfg) {
    cfg.validate();
    if (agents.empty()) throw NoAgentsError("cannot assign subtasks to an empty agent pool");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (agents[i].id != static_cast<int>(i)) throw ConfigError("agent ids must be 0..N-1 in order");
        if (agents[i].capacity < 1) throw ConfigError("agent capacity must be >= 1");
    }

    Assignment out;
    out.agent_of.resize(plan.subtasks.size(), -1);
    out.scores.resize(plan.subtasks.size(), 0.0);
    out.loads.assign(agents.size(), 0);

    for (std::size_t s = 0; s < plan.subtasks.size(); ++s) {
        int best = -1;
        double best_score = 0.0;
        for (const AgentProfile& a : agents) {
            const double sc = score(a, plan.subtasks[s], out.loads[static_cast<std::size_t>(a.id)], cfg);
            if (best < 0 || sc > best_score) {
                best = a.id;
                best_score = sc;
            }
        }
        out.agent_of[s] = best;
        out.scores[s] = best_score;
        out.loads[static_cast<std::size_t>(best)] += 1;
    }
    return out;
}

std::vector<std::vector<int>> routing_table(const Assignment& assignment,
                                            const SubtaskPlan& plan, int comm_threshold) {
    if (comm_threshold < 0) throw ConfigError("comm threshold must be >= 0");
    const std::size_t n = assignment.loads.size();

    // Representative embedding per agent: normalized mean of its subtasks.
    std::vector<Vec> rep(n);
    std::vector<bool> has_rep(n, false);
    if (!plan.subtasks.empty()) {
        const std::size_t d = plan.subtasks.front().embedding.size();
        std::vector<Vec> sums(n, zeros(d));
        std::vector<int> counts(n, 0);
        for (std::size_t s = 0; s < plan.subtasks.size(); ++s) {
            const auto a = static_cast<std::size_t>(assignment.agent_of[s]);
            add_scaled(sums[a], plan.subtasks[s].embedding, 1.0);
            counts[a] += 1;
        }
        for (std::size_t a = 0; a < n; ++a) {
            if (counts[a] > 0 && !is_zero(sums[a])) {
                rep[a] = normalized(sums[a]);
                has_rep[a] = true;
            }
        }
    }

    std::vector<std::vector<int>> table(n);
    if (comm_threshold == 0) return table;

    for (std::size_t a = 0; a < n; ++a) {
        struct Cand {
            bool ranked;
            double cos;
            int id;
        };
        std::vector<Cand> cands;
        cands.reserve(n - 1);
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a) continue;
            const bool ranked = has_rep[a] && has_rep[b];
            cands.push_back({ranked, ranked ? cosine(rep[a], rep[b]) : 0.0,
                             static_cast<int>(b)});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
            if (x.ranked != y.ranked) return x.ranked;
            if (x.cos != y.cos) return x.cos > y.cos;
            return x.id < y.id;
        });
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(comm_threshold), cands.size());
        table[a].reserve(take);
        for (std::size_t i = 0; i < take; ++i) table[a].push_back(cands[i].id);
    }
    return table;
}

}  // namespace macs
