#include "macs/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "macs/errors.hpp"
#include "macs/rng.hpp"

namespace macs {
namespace {

std::vector<double> softmax_stable(const std::vector<double>& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> w(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        w[i] = std::exp(logits[i] - m);
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return w;
}

// Sharpened per-segment weights used for subtask construction (see header).
// occupancy tracks how much earlier subtasks already attend to each segment;
// the beta-scaled penalty steers later queries toward uncovered content, so
// subtasks differentiate instead of piling onto the same segment. With
// beta = 0 the penalty vanishes and all subtasks collapse identically.
std::vector<double> construction_weights(const Vec& query, const SegmentMatrix& segs,
                                         const std::vector<double>& occupancy, double beta) {
    const double scale = 2.0 * std::sqrt(static_cast<double>(query.size()));
    const double repel = 3.0 * beta;
    std::vector<double> logits(segs.size());
    for (std::size_t m = 0; m < segs.size(); ++m)
        logits[m] = scale * dot(query, segs.rows[m]) - repel * occupancy[m];
    return softmax_stable(logits);
}

// Smallest attention-mass >= 0.5 cover, returned as segment indices in
// original order. Ties broken toward lower index.
std::vector<std::size_t> top_mass_cover(const std::vector<double>& w) {
    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    std::vector<std::size_t> cover;
    double mass = 0.0;
    for (const std::size_t m : order) {
        cover.push_back(m);
        mass += w[m];
        if (mass >= 0.5) break;
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

}  // namespace

void DecomposeConfig::validate() const {
    if (beta < 0.0 || !std::isfinite(beta)) throw ConfigError("decompose.beta must be finite and >= 0");
    if (child_k < 1) throw ConfigError("decompose.child_k must be >= 1");
}

QuerySet make_queries(const Vec& task_embedding, int k, double beta, std::uint64_t seed) {
    if (k < 1) throw ConfigError("query count must be >= 1");
    QuerySet qs;
    qs.diversity_beta = beta;
    qs.queries.reserve(static_cast<std::size_t>(k));
    if (beta == 0.0) {
        qs.queries.assign(static_cast<std::size_t>(k), task_embedding);
        return qs;
    }
    const std::uint64_t base = mix_seed(seed, "query-direction");
    for (int i = 0; i < k; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt <= 8; ++attempt) {
            const Vec u = random_unit(
                mix_seed(base, (static_cast<std::uint64_t>(i) << 8) | static_cast<std::uint64_t>(attempt)),
                static_cast<int>(task_embedding.size()));
            Vec cand = task_embedding;
            add_scaled(cand, u, beta);
            if (!is_zero(cand)) {
                qs.queries.push_back(normalized(cand));
                placed = true;
                break;
            }
        }
        if (!placed) throw DegenerateQueryError("query " + std::to_string(i) + " degenerate after 8 retries");
    }
    return qs;
}

std::vector<double> attention_weights(const Vec& query, const SegmentMatrix& segs) {
    const double inv_scale = 1.0 / std::sqrt(static_cast<double>(query.size()));
    std::vector<double> logits(segs.size());
    for (std::size_t m = 0; m < segs.size(); ++m) logits[m] = inv_scale * dot(query, segs.rows[m]);
    return softmax_stable(logits);
}

SubtaskPlan decompose(const Vec& task_embedding, const SegmentMatrix& segs, int k,
                      const DecomposeConfig& cfg) {
    cfg.validate();
    if (k < 1) throw ConfigError("decompose k must be >= 1");
    if (segs.size() == 0) throw EmptyTaskError("segment matrix is empty");

    const QuerySet qs = make_queries(task_embedding, k, cfg.beta, cfg.seed);
    SubtaskPlan plan;
    plan.subtasks.reserve(static_cast<std::size_t>(k));
    std::vector<double> occupancy(segs.size(), 0.0);
    for (int i = 0; i < k; ++i) {
        const std::vector<double> w = construction_weights(
            qs.queries[static_cast<std::size_t>(i)], segs, occupancy, cfg.beta);
        for (std::size_t m = 0; m < segs.size(); ++m) occupancy[m] += w[m];
        Vec sum = zeros(task_embedding.size());
        for (std::size_t m = 0; m < segs.size(); ++m) add_scaled(sum, segs.rows[m], w[m]);
        if (is_zero(sum)) throw DegenerateSubtaskError("subtask " + std::to_string(i) + " weighted sum degenerate");

        Subtask sub;
        sub.id = i;
        sub.embedding = normalized(sum);
        sub.attention = w;
        std::string text;
        for (const std::size_t m : top_mass_cover(w)) {
            if (!text.empty()) text.push_back(' ');
            text += segs.segment_texts[m];
        }
        sub.extracted_text = std::move(text);
        plan.subtasks.push_back(std::move(sub));
    }
    return plan;
}

SubtaskPlan decompose_hierarchical(const SubtaskPlan& plan, int depth,
                                   const DecomposeConfig& cfg, const EncoderConfig& enc) {
    if (depth < 1) throw ConfigError("depth must be >= 1");
    if (depth == 1) return plan;

    SubtaskPlan cur = plan;
    for (int level = 2; level <= depth; ++level) {
        SubtaskPlan next;
        next.depth = level;
        for (const Subtask& sub : cur.subtasks) {
            std::vector<Subtask> children;
            try {
                const Vec h = encode(sub.extracted_text, enc);
                const SegmentMatrix segs = segment(sub.extracted_text, enc);
                children = decompose(h, segs, cfg.child_k, cfg).subtasks;
            } catch (const EmptyTaskError&) {
                // Nothing to split; the subtask is its own leaf.
            }
            if (children.empty()) {
                Subtask leaf = sub;
                leaf.id = static_cast<int>(next.subtasks.size());
                next.subtasks.push_back(std::move(leaf));
                continue;
            }
            for (Subtask& child : children) {
                child.parent = sub.id;
                child.id = static_cast<int>(next.subtasks.size());
                next.subtasks.push_back(std::move(child));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

std::string plan_to_jsonl(const SubtaskPlan& plan) {
    std::string out;
    for (const Subtask& sub : plan.subtasks) {
        nlohmann::json j;
        j["id"] = sub.id;
        if (sub.parent) j["parent"] = *sub.parent;
        else j["parent"] = nullptr;
        j["attention"] = sub.attention;
        j["embedding"] = sub.embedding;
        j["extracted_text"] = sub.extracted_text;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

SubtaskPlan plan_from_jsonl(const std::string& text) {
    SubtaskPlan plan;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
        Subtask sub;
        sub.id = j.at("id").get<int>();
        if (!j.at("parent").is_null()) sub.parent = j.at("parent").get<int>();
        sub.attention = j.at("attention").get<std::vector<double>>();
        sub.embedding = j.at("embedding").get<Vec>();
        sub.extracted_text = j.at("extracted_text").get<std::string>();
        plan.subtasks.push_back(std::move(sub));
    }
    return plan;
}

}  // namespace macs
