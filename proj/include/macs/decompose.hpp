#pragma once
// Attention-based task decomposition: one subtask embedding per query, each a
// weighted combination of task segments, plus the extracted text that carries
// hierarchy and inspection.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "macs/semantics.hpp"
#include "macs/vec.hpp"

namespace macs {

struct QuerySet {
    std::vector<Vec> queries;
    double diversity_beta = 1.0;
};

struct Subtask {
    int id = 0;
    std::optional<int> parent;   // set by hierarchical expansion
    Vec embedding;               // unit norm
    std::vector<double> attention;  // probability simplex over segments
    std::string extracted_text;
};

struct SubtaskPlan {
    std::vector<Subtask> subtasks;
    int depth = 1;
};

struct DecomposeConfig {
    double beta = 1.0;      // query diversity coefficient
    std::uint64_t seed = 0;
    int child_k = 2;        // fan-out per subtask when recursing

    void validate() const;
};

/// Perturbed-task-direction queries: q_i = normalize(h_T + beta * u_i) with
/// u_i the i-th seeded pseudo-random unit direction. beta = 0 returns K exact
/// copies of the task embedding.
QuerySet make_queries(const Vec& task_embedding, int k, double beta, std::uint64_t seed);

/// softmax over segments of dot(q, row) / sqrt(d), max-stabilized.
std::vector<double> attention_weights(const Vec& query, const SegmentMatrix& segs);

/// Decompose a task into k subtasks. Every embedding is the attention-weighted
/// mean of segment rows, normalized; extracted_text concatenates the smallest
/// top-attention segment set reaching 0.5 mass, in original segment order.
///
/// Weighting detail: with unit-norm queries and rows, dot products are
/// cosines in [-1, 1], so the 1/sqrt(d) softmax scale collapses to uniform
/// weights as d grows (at d = 64 the logit spread is under 0.25). The
/// attention used here therefore scales the cosine by sqrt(d) — the logit
/// scale Eq-style attention produces when vector entries are O(1) rather
/// than O(1/sqrt(d)) — which keeps the weights query-dependent at any d.
/// attention_weights above retains the plain 1/sqrt(d) form.
SubtaskPlan decompose(const Vec& task_embedding, const SegmentMatrix& segs, int k,
                      const DecomposeConfig& cfg);

/// depth = 1 returns the plan unchanged. depth > 1 re-decomposes each
/// subtask's extracted text into child_k children per level and returns the
/// flattened leaves, renumbered 0..L-1, each tagged with the id its parent
/// held in the previous level. A subtask whose extracted text has no tokens
/// is kept as its own leaf.
SubtaskPlan decompose_hierarchical(const SubtaskPlan& plan, int depth,
                                   const DecomposeConfig& cfg, const EncoderConfig& enc);

/// One subtask per line: id, parent, attention, embedding, extracted_text.
std::string plan_to_jsonl(const SubtaskPlan& plan);
SubtaskPlan plan_from_jsonl(const std::string& text);

}  // namespace macs
