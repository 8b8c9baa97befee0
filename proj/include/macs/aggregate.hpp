#pragma once
// Global fusion of agent outputs: relevance-softmax weights, weighted sum,
// and the pairwise consistency loss with its optional pre-fusion projection.

#include <vector>

#include "macs/vec.hpp"

namespace macs {

struct FusionConfig {
    double kappa = 4.0;   // relevance softmax temperature
    bool project = true;  // run consistency projection before fusing
    double eta = 0.25;    // projection rate in (0, 1)
    int rounds = 1;

    void validate() const;
};

struct FusionResult {
    std::vector<double> weights;  // simplex over agents
    Vec global_output;            // O, unit norm
    double consistency = 0.0;     // loss over the outputs actually fused
    std::vector<Vec> raw_outputs; // pre-projection
};

/// softmax over agents of kappa * cosine(o_i, task embedding).
std::vector<double> fusion_weights(const std::vector<Vec>& outputs, const Vec& task_embedding,
                                   double kappa = 4.0);

/// normalize(sum w_i o_i). Throws DegenerateFusionError when the outputs
/// cancel (norm < 1e-9); callers mark the episode failed.
Vec fuse(const std::vector<Vec>& outputs, const std::vector<double>& weights);

/// Sum over unordered pairs i < j of ||o_i - o_j||^2.
double consistency_loss(const std::vector<Vec>& outputs);

/// R rounds of o_i <- (1 - eta) o_i + eta * mean(o). Operates on raw
/// (unnormalized) outputs; contracts consistency_loss by exactly
/// (1 - eta)^2 per round and leaves the mean fixed.
std::vector<Vec> consistency_project(const std::vector<Vec>& outputs, double eta = 0.25,
                                     int rounds = 1);

/// The full pre-fusion pipeline: optional projection, weights, fuse.
FusionResult fuse_outputs(const std::vector<Vec>& outputs, const Vec& task_embedding,
                          const FusionConfig& cfg);

}  // namespace macs
