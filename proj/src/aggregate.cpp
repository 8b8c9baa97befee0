#include "macs/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "macs/errors.hpp"

namespace macs {

void FusionConfig::validate() const {
    if (!std::isfinite(kappa)) throw ConfigError("fusion.kappa must be finite");
    if (!(eta >= 0.0 && eta < 1.0)) throw ConfigError("fusion.eta must be in [0, 1)");
    if (rounds < 0) throw ConfigError("fusion.rounds must be >= 0");
}

std::vector<double> fusion_weights(const std::vector<Vec>& outputs, const Vec& task_embedding,
                                   double kappa) {
    if (outputs.empty()) throw ConfigError("fusion_weights needs at least one output");
    std::vector<double> logits(outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i)
        logits[i] = kappa * cosine_general(outputs[i], task_embedding);
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    std::vector<double> w(outputs.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(logits[i] - m);
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return w;
}

Vec fuse(const std::vector<Vec>& outputs, const std::vector<double>& weights) {
    if (outputs.empty() || outputs.size() != weights.size())
        throw ConfigError("fuse: outputs and weights must be non-empty and congruent");
    Vec sum = zeros(outputs.front().size());
    for (std::size_t i = 0; i < outputs.size(); ++i) add_scaled(sum, outputs[i], weights[i]);
    if (is_zero(sum)) throw DegenerateFusionError("weighted outputs cancel");
    return normalized(sum);
}

double consistency_loss(const std::vector<Vec>& outputs) {
    double loss = 0.0;
    for (std::size_t i = 0; i + 1 < outputs.size(); ++i) {
        for (std::size_t j = i + 1; j < outputs.size(); ++j) {
            double sq = 0.0;
            for (std::size_t k = 0; k < outputs[i].size(); ++k) {
                const double diff = outputs[i][k] - outputs[j][k];
                sq += diff * diff;
            }
            loss += sq;
        }
    }
    return loss;
}

std::vector<Vec> consistency_project(const std::vector<Vec>& outputs, double eta, int rounds) {
    if (outputs.empty()) return {};
    std::vector<Vec> cur = outputs;
    const std::size_t n = cur.size();
    const std::size_t d = cur.front().size();
    for (int r = 0; r < rounds; ++r) {
        Vec mean = zeros(d);
        for (const Vec& o : cur) add_scaled(mean, o, 1.0);
        for (auto& x : mean) x /= static_cast<double>(n);
        for (Vec& o : cur) {
            for (std::size_t k = 0; k < d; ++k) o[k] = (1.0 - eta) * o[k] + eta * mean[k];
        }
    }
    return cur;
}

FusionResult fuse_outputs(const std::vector<Vec>& outputs, const Vec& task_embedding,
                          const FusionConfig& cfg) {
    cfg.validate();
    FusionResult res;
    res.raw_outputs = outputs;
    const std::vector<Vec> fused_set =
        cfg.project ? consistency_project(outputs, cfg.eta, cfg.rounds) : outputs;
    res.consistency = consistency_loss(fused_set);
    res.weights = fusion_weights(fused_set, task_embedding, cfg.kappa);
    res.global_output = fuse(fused_set, res.weights);
    return res;
}

}  // namespace macs
