#pragma once
// One JSON config drives everything; CLI flags override individual fields.

#include <cstdint>
#include <string>

#include "macs/runtime.hpp"
#include "macs/worldgen.hpp"

namespace macs {

struct AgentPoolConfig {
    int n_agents = 10;
    int capacity = 1;

    void validate() const;
};

struct RunConfig {
    WorldSpec world;       // world.seed is overridden per episode by the harness
    AgentPoolConfig pool;
    EpisodeConfig episode;

    void validate() const;

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
    static RunConfig from_file(const std::string& path);
};

}  // namespace macs
