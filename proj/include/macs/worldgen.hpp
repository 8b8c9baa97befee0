#pragma once
// Synthetic task instances with known reference decompositions, plus JSONL
// corpus ingestion for externally prepared tasks.
//
// Each generated task entangles every per-subtask target with one shared
// component (mix gamma): an agent that only ever sees its own subtask signal
// converges to the local direction and stops short of the per-subtask success
// threshold, while neighbor states carry the shared component. That makes
// message passing causally useful rather than decorative.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "macs/semantics.hpp"
#include "macs/vec.hpp"

namespace macs {

struct WorldSpec {
    std::uint64_t seed = 0;
    int k_ref = 5;                // reference subtask count
    int vocab_per_subtask = 12;   // tokens per reference subtask (and shared sentence)
    double gamma = 0.4;           // shared-component mix in [0, 1]
    int d = 64;
    // Window and stride default to the block size so segment boundaries line
    // up with reference subtasks and attention can recover the partition.
    int window = 12;
    int stride = 12;
    double rho = 0.3;             // update rate used for the closed-form L_opt

    void validate() const;
    EncoderConfig encoder() const;
};

struct TaskInstance {
    std::string task_text;
    std::vector<std::string> reference_subtask_texts;
    std::vector<Vec> local_targets;   // l_i = encode(reference text i)
    Vec shared_vector;                // g, zero sentinel when absent
    std::vector<Vec> targets;         // t_i = normalize(gamma*g + (1-gamma)*l_i)
    Vec global_target;                // t_O = normalize(sum t_i)
    double optimal_steps = 0.0;       // L_opt
    EncoderConfig encoder;            // the encoder this instance was built with
};

struct CorpusRecord {
    std::string id;
    std::string task_text;
    std::vector<std::string> reference_subtasks;
    std::map<std::string, std::string> metadata;
};

/// Smallest integer t >= 1 with (1 - rho)^t <= 0.1.
int contraction_steps(double rho);

/// Deterministic synthetic instance: disjoint per-subtask token sets drawn
/// from a pseudo-word vocabulary, a shared sentence included once, targets
/// per the gamma mix, L_opt = k_ref * contraction_steps(rho).
TaskInstance generate(const WorldSpec& spec);

/// Parse and validate a JSONL corpus. Throws ParseError / SchemaError with
/// the offending line number.
std::vector<CorpusRecord> ingest(const std::string& path);

/// Build a runnable instance from an ingested record. External corpora carry
/// no shared-component ground truth, so gamma is forced to 0.
TaskInstance to_task(const CorpusRecord& record, const EncoderConfig& enc, double rho = 0.3);

/// One record per line; inverse of ingest.
void write_corpus(const std::vector<CorpusRecord>& records, const std::string& path);

}  // namespace macs
