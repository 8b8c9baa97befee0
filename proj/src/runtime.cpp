#include "macs/runtime.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "macs/errors.hpp"
#include "macs/rng.hpp"

namespace macs {

void RuntimeConfig::validate() const {
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("runtime.rho must be in (0, 1)");
    if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("runtime.mu must be in [0, 1]");
    if (comm_threshold < 0) throw ConfigError("runtime.comm_threshold must be >= 0");
    if (tick_budget < 0) throw ConfigError("runtime.tick_budget must be >= 0");
    if (!(theta_sub >= -1.0 && theta_sub <= 1.0)) throw ConfigError("runtime.theta_sub must be in [-1, 1]");
    if (!(c_msg >= 0.0) || !std::isfinite(c_msg)) throw ConfigError("runtime.c_msg must be finite and >= 0");
}

void EpisodeConfig::validate() const {
    if (k < 1) throw ConfigError("episode.k must be >= 1");
    if (depth < 1) throw ConfigError("episode.depth must be >= 1");
    decompose.validate();
    schedule.validate();
    runtime.validate();
    fusion.validate();
    eval.validate();
}

AgentState agent_step(const AgentState& state, const Vec& subtask_signal,
                      const std::vector<Message>& inbox, const RuntimeConfig& cfg) {
    Vec msg_mean;
    if (inbox.empty()) {
        msg_mean = subtask_signal;
    } else {
        Vec sum = zeros(state.state.size());
        for (const Message& m : inbox) add_scaled(sum, m.payload, 1.0);
        msg_mean = is_zero(sum) ? subtask_signal : normalized(sum);
    }

    // Incremental form of (1-rho) s + rho (mu h + (1-mu) m): the pull terms
    // vanish exactly when s == h == m, so the fixed point is bit-stable.
    const std::size_t d = state.state.size();
    Vec blended(d);
    bool moved = false;
    for (std::size_t k = 0; k < d; ++k) {
        const double pull = cfg.rho * (cfg.mu * (subtask_signal[k] - state.state[k]) +
                                       (1.0 - cfg.mu) * (msg_mean[k] - state.state[k]));
        blended[k] = state.state[k] + pull;
        if (pull != 0.0) moved = true;
    }

    AgentState next = state;
    if (moved && !is_zero(blended)) next.state = normalized(blended);
    next.ticks_used += 1;
    return next;
}

std::vector<Message> deliver(int round, const std::vector<AgentState>& states,
                             const std::vector<std::vector<int>>& routing,
                             const std::vector<bool>& sender_active) {
    std::vector<Message> out;
    for (std::size_t a = 0; a < states.size(); ++a) {
        if (!sender_active[a]) continue;
        const AgentState& st = states[a];
        const int subject = st.subtask_ids.empty() ? -1 : st.subtask_ids[static_cast<std::size_t>(st.rr_cursor)];
        for (const int r : routing[a]) {
            Message m;
            m.sender = st.id;
            m.recipient = r;
            m.round = round;
            m.payload = st.state;
            m.subject = subject;
            out.push_back(std::move(m));
        }
    }
    std::sort(out.begin(), out.end(), [](const Message& x, const Message& y) {
        if (x.round != y.round) return x.round < y.round;
        if (x.sender != y.sender) return x.sender < y.sender;
        return x.recipient < y.recipient;
    });
    return out;
}

std::vector<std::vector<int>> random_routing(std::size_t n_agents, int comm_threshold,
                                             std::uint64_t seed) {
    std::vector<std::vector<int>> table(n_agents);
    if (comm_threshold == 0 || n_agents < 2) return table;
    for (std::size_t a = 0; a < n_agents; ++a) {
        std::vector<int> others;
        others.reserve(n_agents - 1);
        for (std::size_t b = 0; b < n_agents; ++b)
            if (b != a) others.push_back(static_cast<int>(b));
        Stream s(mix_seed(mix_seed(seed, "random-routing"), a));
        shuffle(others, s);
        others.resize(std::min<std::size_t>(static_cast<std::size_t>(comm_threshold), others.size()));
        table[a] = std::move(others);
    }
    return table;
}

namespace {

int nearest_target(const Vec& embedding, const std::vector<Vec>& targets) {
    int best = 0;
    double best_cos = cosine(embedding, targets[0]);
    for (std::size_t j = 1; j < targets.size(); ++j) {
        const double c = cosine(embedding, targets[j]);
        if (c > best_cos) {
            best_cos = c;
            best = static_cast<int>(j);
        }
    }
    return best;
}

void push_event(EpisodeTrace& trace, bool record, int tick, const char* kind,
                nlohmann::json payload) {
    if (!record) return;
    trace.events.push_back({tick, kind, payload.dump()});
}

}  // namespace

EpisodeResult run_episode(const TaskInstance& task, const std::vector<AgentProfile>& agents,
                          const EpisodeConfig& cfg, std::uint64_t seed, bool record_trace) {
    cfg.validate();
    if (agents.empty()) throw NoAgentsError("run_episode needs at least one agent");

    const EncoderConfig& enc = task.encoder;
    const Vec task_embedding = encode(task.task_text, enc);
    const SegmentMatrix segs = segment(task.task_text, enc);

    DecomposeConfig dq = cfg.decompose;
    dq.seed = mix_seed(seed, "queries");
    EpisodeResult res;
    res.plan = decompose(task_embedding, segs, cfg.k, dq);
    if (cfg.depth > 1) res.plan = decompose_hierarchical(res.plan, cfg.depth, dq, enc);

    res.assignment = assign(agents, res.plan, cfg.schedule);
    const std::vector<std::vector<int>> routing =
        cfg.routing == RoutingMode::similarity
            ? routing_table(res.assignment, res.plan, cfg.runtime.comm_threshold)
            : random_routing(agents.size(), cfg.runtime.comm_threshold, mix_seed(seed, "routing"));

    // Target per generated subtask: the closest reference target.
    const std::size_t n_sub = res.plan.subtasks.size();
    std::vector<const Vec*> sub_target(n_sub);
    for (std::size_t i = 0; i < n_sub; ++i) {
        sub_target[i] =
            &task.targets[static_cast<std::size_t>(nearest_target(res.plan.subtasks[i].embedding, task.targets))];
    }

    // All agents start from the shared task understanding.
    std::vector<AgentState> states(agents.size());
    for (std::size_t a = 0; a < agents.size(); ++a) {
        states[a].id = static_cast<int>(a);
        states[a].state = task_embedding;
    }
    for (std::size_t i = 0; i < n_sub; ++i) {
        auto& st = states[static_cast<std::size_t>(res.assignment.agent_of[i])];
        st.subtask_ids.push_back(static_cast<int>(i));
        st.done.push_back(false);
    }

    std::vector<bool> sub_done(n_sub, false);
    std::size_t done_count = 0;
    std::vector<std::vector<Message>> inbox(agents.size());
    EpisodeTrace& trace = res.trace;

    auto select_work = [](AgentState& st) -> int {
        // Round-robin over not-yet-done subtasks, ascending id, cyclic.
        const int n = static_cast<int>(st.subtask_ids.size());
        for (int step = 0; step < n; ++step) {
            const int pos = (st.rr_cursor + step) % n;
            if (!st.done[static_cast<std::size_t>(pos)]) {
                st.rr_cursor = pos;
                return pos;
            }
        }
        return -1;
    };

    int tick = 0;
    for (; tick < cfg.runtime.tick_budget && done_count < n_sub; ++tick) {
        std::vector<bool> active(agents.size(), false);
        bool any_active = false;
        for (std::size_t a = 0; a < agents.size(); ++a) {
            for (const bool d : states[a].done)
                if (!d) active[a] = true;
            if (active[a]) {
                select_work(states[a]);  // position the cursor for subject/step
                any_active = true;
            }
        }
        if (!any_active) break;

        // Emit with pre-update states; land next tick.
        std::vector<Message> msgs = deliver(tick, states, routing, active);
        trace.total_messages += static_cast<long long>(msgs.size());
        for (const Message& m : msgs)
            push_event(trace, record_trace, tick, "msg",
                       {{"from", m.sender}, {"to", m.recipient}, {"subject", m.subject}});

        for (std::size_t a = 0; a < agents.size(); ++a) {
            if (!active[a]) continue;
            AgentState& st = states[a];
            const int pos = st.rr_cursor;
            const int sub_id = st.subtask_ids[static_cast<std::size_t>(pos)];
            st = agent_step(st, res.plan.subtasks[static_cast<std::size_t>(sub_id)].embedding,
                            inbox[a], cfg.runtime);
            st.rr_cursor = (pos + 1) % static_cast<int>(st.subtask_ids.size());
            push_event(trace, record_trace, tick, "state",
                       {{"agent", st.id}, {"subtask", sub_id}, {"s", st.state}});

            for (std::size_t p = 0; p < st.subtask_ids.size(); ++p) {
                if (st.done[p]) continue;
                const auto sid = static_cast<std::size_t>(st.subtask_ids[p]);
                if (cosine(st.state, *sub_target[sid]) >= cfg.runtime.theta_sub) {
                    st.done[p] = true;
                    sub_done[sid] = true;
                    ++done_count;
                    push_event(trace, record_trace, tick, "done",
                               {{"subtask", st.subtask_ids[p]}, {"agent", st.id}});
                }
            }
        }

        for (auto& box : inbox) box.clear();
        for (Message& m : msgs) inbox[static_cast<std::size_t>(m.recipient)].push_back(std::move(m));
    }
    trace.total_ticks = tick;

    // Outputs: final states of the agents that had work, ascending id.
    std::vector<Vec> outputs;
    std::vector<long long> step_counts;
    for (const AgentState& st : states) {
        if (st.subtask_ids.empty()) continue;
        outputs.push_back(st.state);
        step_counts.push_back(st.ticks_used);
    }
    trace.final_outputs = outputs;

    EpisodeOutcome& out = res.outcome;
    long long executed = 0;
    for (const long long s : step_counts) executed += s;
    out.actual_steps = static_cast<double>(executed) +
                       cfg.runtime.c_msg * static_cast<double>(trace.total_messages);
    out.optimal_steps = task.optimal_steps;
    out.agent_step_counts = step_counts;
    out.messages = trace.total_messages;
    out.ticks = trace.total_ticks;
    out.reference_subtasks = task.local_targets;
    out.generated_subtasks.reserve(n_sub);
    for (const Subtask& s : res.plan.subtasks) out.generated_subtasks.push_back(s.embedding);

    try {
        res.fusion = fuse_outputs(outputs, task_embedding, cfg.fusion);
        out.consistency = res.fusion.consistency;
        out.global_alignment = cosine(res.fusion.global_output, task.global_target);
        out.success = out.global_alignment >= cfg.eval.theta_global;
        push_event(trace, record_trace, tick, "fusion",
                   {{"weights", res.fusion.weights},
                    {"O", res.fusion.global_output},
                    {"consistency", res.fusion.consistency}});
    } catch (const DegenerateFusionError&) {
        res.fusion_degenerate = true;
        out.consistency = consistency_loss(outputs);
        out.global_alignment = -1.0;
        out.success = false;
    }
    push_event(trace, record_trace, tick, "outcome",
               {{"success", out.success},
                {"alignment", out.global_alignment},
                {"l_actual", out.actual_steps},
                {"l_opt", out.optimal_steps},
                {"messages", out.messages},
                {"ticks", out.ticks}});
    return res;
}

std::string trace_to_jsonl(const EpisodeTrace& trace) {
    std::string out = trace.header_json;
    if (!out.empty() && out.back() != '\n') out.push_back('\n');
    for (const TraceEvent& e : trace.events) {
        nlohmann::json j;
        j["tick"] = e.tick;
        j["kind"] = e.kind;
        j["payload"] = nlohmann::json::parse(e.payload_json);
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

}  // namespace macs
