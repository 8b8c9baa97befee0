#include "macs/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "macs/errors.hpp"

namespace macs {
namespace {

using nlohmann::json;

// Missing fields keep their defaults; present fields must have the right type.
template <typename T>
void read_field(const json& j, const char* section, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(section) + "." + key + " has the wrong type");
    }
}

}  // namespace

void AgentPoolConfig::validate() const {
    if (n_agents < 1) throw ConfigError("pool.n_agents must be >= 1");
    if (capacity < 1) throw ConfigError("pool.capacity must be >= 1");
}

void RunConfig::validate() const {
    try {
        world.validate();
    } catch (const SpecError& e) {
        throw ConfigError(e.what());
    }
    pool.validate();
    episode.validate();
}

std::string RunConfig::to_json() const {
    json j;
    j["world"] = {{"k_ref", world.k_ref},
                  {"vocab_per_subtask", world.vocab_per_subtask},
                  {"gamma", world.gamma},
                  {"d", world.d},
                  {"window", world.window},
                  {"stride", world.stride}};
    j["pool"] = {{"n_agents", pool.n_agents}, {"capacity", pool.capacity}};
    j["decompose"] = {{"k", episode.k},
                      {"depth", episode.depth},
                      {"beta", episode.decompose.beta},
                      {"child_k", episode.decompose.child_k}};
    j["schedule"] = {{"lambda_load", episode.schedule.lambda_load}};
    j["runtime"] = {{"rho", episode.runtime.rho},
                    {"mu", episode.runtime.mu},
                    {"comm_threshold", episode.runtime.comm_threshold},
                    {"tick_budget", episode.runtime.tick_budget},
                    {"theta_sub", episode.runtime.theta_sub},
                    {"c_msg", episode.runtime.c_msg}};
    j["fusion"] = {{"kappa", episode.fusion.kappa},
                   {"project", episode.fusion.project},
                   {"eta", episode.fusion.eta},
                   {"rounds", episode.fusion.rounds}};
    j["eval"] = {{"theta_global", episode.eval.theta_global},
                 {"tau_match", episode.eval.tau_match}};
    j["routing"] = episode.routing == RoutingMode::similarity ? "similarity" : "random";
    return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    if (j.contains("world")) {
        const auto& w = j.at("world");
        read_field(w, "world", "k_ref", cfg.world.k_ref);
        read_field(w, "world", "vocab_per_subtask", cfg.world.vocab_per_subtask);
        read_field(w, "world", "gamma", cfg.world.gamma);
        read_field(w, "world", "d", cfg.world.d);
        read_field(w, "world", "window", cfg.world.window);
        read_field(w, "world", "stride", cfg.world.stride);
    }
    if (j.contains("pool")) {
        const auto& p = j.at("pool");
        read_field(p, "pool", "n_agents", cfg.pool.n_agents);
        read_field(p, "pool", "capacity", cfg.pool.capacity);
    }
    if (j.contains("decompose")) {
        const auto& d = j.at("decompose");
        read_field(d, "decompose", "k", cfg.episode.k);
        read_field(d, "decompose", "depth", cfg.episode.depth);
        read_field(d, "decompose", "beta", cfg.episode.decompose.beta);
        read_field(d, "decompose", "child_k", cfg.episode.decompose.child_k);
    }
    if (j.contains("schedule"))
        read_field(j.at("schedule"), "schedule", "lambda_load", cfg.episode.schedule.lambda_load);
    if (j.contains("runtime")) {
        const auto& r = j.at("runtime");
        read_field(r, "runtime", "rho", cfg.episode.runtime.rho);
        read_field(r, "runtime", "mu", cfg.episode.runtime.mu);
        read_field(r, "runtime", "comm_threshold", cfg.episode.runtime.comm_threshold);
        read_field(r, "runtime", "tick_budget", cfg.episode.runtime.tick_budget);
        read_field(r, "runtime", "theta_sub", cfg.episode.runtime.theta_sub);
        read_field(r, "runtime", "c_msg", cfg.episode.runtime.c_msg);
    }
    if (j.contains("fusion")) {
        const auto& f = j.at("fusion");
        read_field(f, "fusion", "kappa", cfg.episode.fusion.kappa);
        read_field(f, "fusion", "project", cfg.episode.fusion.project);
        read_field(f, "fusion", "eta", cfg.episode.fusion.eta);
        read_field(f, "fusion", "rounds", cfg.episode.fusion.rounds);
    }
    if (j.contains("eval")) {
        const auto& e = j.at("eval");
        read_field(e, "eval", "theta_global", cfg.episode.eval.theta_global);
        read_field(e, "eval", "tau_match", cfg.episode.eval.tau_match);
    }
    if (j.contains("routing")) {
        const std::string mode = j.at("routing").get<std::string>();
        if (mode == "similarity") cfg.episode.routing = RoutingMode::similarity;
        else if (mode == "random") cfg.episode.routing = RoutingMode::random_recipients;
        else throw ConfigError("routing must be 'similarity' or 'random'");
    }
    cfg.world.rho = cfg.episode.runtime.rho;  // L_opt uses the runtime's rate
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace macs
