#pragma once
// Subtask-to-agent assignment by semantic similarity, skill specialization and
// workload, plus the similarity-ranked message routing table.

#include <vector>

#include "macs/decompose.hpp"
#include "macs/vec.hpp"

namespace macs {

struct AgentProfile {
    int id = 0;
    Vec skill;         // unit norm
    int capacity = 1;  // max concurrent subtasks before overflow penalties
};

struct ScheduleConfig {
    double lambda_load = 0.5;  // workload penalty coefficient
    void validate() const;
};

struct Assignment {
    std::vector<int> agent_of;     // subtask id -> agent id
    std::vector<double> scores;    // score at pick time, per subtask
    std::vector<int> loads;        // subtasks per agent
};

/// cosine(skill, embedding) - lambda_load * current_load / capacity.
double score(const AgentProfile& agent, const Subtask& sub, int current_load,
             const ScheduleConfig& cfg);

/// Greedy, ascending subtask id: pure argmax of score given loads-so-far,
/// ties to the lowest agent id. Capacity is soft: overflow is never rejected,
/// only penalized through the load term, so the system keeps running when
/// K exceeds the pool's total capacity.
Assignment assign(const std::vector<AgentProfile>& agents, const SubtaskPlan& plan,
                  const ScheduleConfig& cfg);

/// Per-agent recipient lists: up to F other agents ranked by descending
/// cosine between the agents' assigned-subtask embeddings (an agent with
/// several subtasks is represented by its normalized mean embedding). Agents
/// without assignments carry no embedding; they rank after every assigned
/// agent. All ties go to the lowest agent id. F >= N-1 lists everyone.
std::vector<std::vector<int>> routing_table(const Assignment& assignment,
                                            const SubtaskPlan& plan, int comm_threshold);

}  // namespace macs
