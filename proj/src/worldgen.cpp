#include "macs/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "macs/errors.hpp"
#include "macs/rng.hpp"

namespace macs {
namespace {

// Injective index -> pronounceable pseudo-word, base-16 syllable digits.
const char* kSyllables[16] = {"ba", "de", "fi", "go", "hu", "ka", "le", "mi",
                              "no", "pu", "ra", "se", "ti", "vo", "wy", "zu"};

std::string vocab_word(std::uint64_t index) {
    std::string w;
    do {
        w += kSyllables[index % 16];
        index /= 16;
    } while (index != 0);
    return w;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace

void WorldSpec::validate() const {
    if (k_ref < 1) throw SpecError("world.k_ref must be >= 1");
    if (vocab_per_subtask < 1) throw SpecError("world.vocab_per_subtask must be >= 1");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw SpecError("world.gamma must be in [0, 1]");
    if (d < 2) throw SpecError("world.d must be >= 2");
    if (window < 1 || stride < 1) throw SpecError("world.window and world.stride must be >= 1");
    if (!(rho > 0.0 && rho < 1.0)) throw SpecError("world.rho must be in (0, 1)");
}

EncoderConfig WorldSpec::encoder() const {
    EncoderConfig enc;
    enc.d = d;
    enc.seed = seed;
    enc.window = window;
    enc.stride = stride;
    return enc;
}

int contraction_steps(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw SpecError("rho must be in (0, 1)");
    int t = 1;
    double residual = 1.0 - rho;
    while (residual > 0.1) {
        residual *= 1.0 - rho;
        ++t;
    }
    return t;
}

TaskInstance generate(const WorldSpec& spec) {
    spec.validate();
    const EncoderConfig enc = spec.encoder();
    const int groups = spec.k_ref + 1;  // shared sentence + k_ref subtasks

    for (std::uint64_t round = 0;; ++round) {
        Stream stream(mix_seed(mix_seed(spec.seed, "worldgen"), round));

        // Disjoint token sets: a seeded draw without replacement over a vocab
        // comfortably larger than what one instance consumes.
        const std::uint64_t vocab_size =
            std::max<std::uint64_t>(256, 4ULL * static_cast<std::uint64_t>(groups) *
                                             static_cast<std::uint64_t>(spec.vocab_per_subtask));
        std::vector<std::uint64_t> indices(vocab_size);
        std::iota(indices.begin(), indices.end(), 0);
        shuffle(indices, stream);

        std::vector<std::vector<std::string>> group_tokens(static_cast<std::size_t>(groups));
        std::size_t next = 0;
        for (auto& tokens : group_tokens) {
            tokens.reserve(static_cast<std::size_t>(spec.vocab_per_subtask));
            for (int t = 0; t < spec.vocab_per_subtask; ++t) tokens.push_back(vocab_word(indices[next++]));
        }

        TaskInstance task;
        task.encoder = enc;
        const std::string shared_text = join(group_tokens[0]);
        task.shared_vector = encode(shared_text, enc);
        task.reference_subtask_texts.reserve(static_cast<std::size_t>(spec.k_ref));
        task.local_targets.reserve(static_cast<std::size_t>(spec.k_ref));
        for (int i = 1; i <= spec.k_ref; ++i) {
            const std::string text = join(group_tokens[static_cast<std::size_t>(i)]);
            task.local_targets.push_back(encode(text, enc));
            task.reference_subtask_texts.push_back(text);
        }

        // Resample-on-collision: disjoint token sets make near-parallel
        // directions vanishingly rare, but the gamma monotonicity guarantees
        // need them strictly non-parallel.
        bool collision = false;
        for (const Vec& l : task.local_targets) {
            if (std::abs(cosine(l, task.shared_vector)) > 0.99) collision = true;
        }
        for (std::size_t i = 0; i + 1 < task.local_targets.size() && !collision; ++i) {
            for (std::size_t j = i + 1; j < task.local_targets.size(); ++j) {
                if (std::abs(cosine(task.local_targets[i], task.local_targets[j])) > 0.99) collision = true;
            }
        }
        if (collision) {
            if (round >= 16) throw SpecError("could not sample non-parallel targets");
            continue;
        }

        // Task text: shared sentence first, then subtask texts in seeded order.
        std::vector<std::size_t> order(static_cast<std::size_t>(spec.k_ref));
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, stream);
        std::string text = shared_text;
        for (const std::size_t i : order) {
            text.push_back(' ');
            text += task.reference_subtask_texts[i];
        }
        task.task_text = std::move(text);

        task.targets.reserve(task.local_targets.size());
        for (const Vec& l : task.local_targets) {
            if (spec.gamma == 0.0) {
                task.targets.push_back(l);
            } else if (spec.gamma == 1.0) {
                task.targets.push_back(task.shared_vector);
            } else {
                Vec t = zeros(l.size());
                add_scaled(t, task.shared_vector, spec.gamma);
                add_scaled(t, l, 1.0 - spec.gamma);
                task.targets.push_back(normalized(t));
            }
        }

        Vec sum = zeros(static_cast<std::size_t>(spec.d));
        for (const Vec& t : task.targets) add_scaled(sum, t, 1.0);
        if (is_zero(sum)) {
            if (round >= 16) throw SpecError("global target degenerate");
            continue;
        }
        task.global_target = normalized(sum);
        task.optimal_steps = static_cast<double>(spec.k_ref * contraction_steps(spec.rho));
        return task;
    }
}

std::vector<CorpusRecord> ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path);

    std::vector<CorpusRecord> records;
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
        auto require = [&](const char* field) -> const nlohmann::json& {
            if (!j.contains(field))
                throw SchemaError("line " + std::to_string(lineno) + ": missing field '" + field + "'");
            return j.at(field);
        };
        CorpusRecord rec;
        if (!require("id").is_string())
            throw SchemaError("line " + std::to_string(lineno) + ": field 'id' must be a string");
        rec.id = j.at("id").get<std::string>();
        if (!require("task_text").is_string() || j.at("task_text").get<std::string>().empty())
            throw SchemaError("line " + std::to_string(lineno) + ": field 'task_text' must be a non-empty string");
        rec.task_text = j.at("task_text").get<std::string>();
        const auto& refs = require("reference_subtasks");
        if (!refs.is_array() || refs.empty())
            throw SchemaError("line " + std::to_string(lineno) + ": field 'reference_subtasks' must be a non-empty array");
        for (const auto& r : refs) {
            if (!r.is_string())
                throw SchemaError("line " + std::to_string(lineno) + ": reference_subtasks entries must be strings");
            rec.reference_subtasks.push_back(r.get<std::string>());
        }
        if (j.contains("metadata")) {
            if (!j.at("metadata").is_object())
                throw SchemaError("line " + std::to_string(lineno) + ": field 'metadata' must be an object");
            for (const auto& [k, v] : j.at("metadata").items()) {
                rec.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

TaskInstance to_task(const CorpusRecord& record, const EncoderConfig& enc, double rho) {
    TaskInstance task;
    task.encoder = enc;
    task.task_text = record.task_text;
    task.reference_subtask_texts = record.reference_subtasks;
    task.shared_vector = zeros(static_cast<std::size_t>(enc.d));  // gamma = 0: no shared ground truth
    Vec sum = zeros(static_cast<std::size_t>(enc.d));
    for (const std::string& text : record.reference_subtasks) {
        Vec l = encode(text, enc);
        add_scaled(sum, l, 1.0);
        task.local_targets.push_back(l);
        task.targets.push_back(std::move(l));
    }
    if (is_zero(sum)) throw DegenerateSumError("reference subtasks cancel; no global target");
    task.global_target = normalized(sum);
    task.optimal_steps =
        static_cast<double>(record.reference_subtasks.size()) * contraction_steps(rho);
    return task;
}

void write_corpus(const std::vector<CorpusRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const CorpusRecord& rec : records) {
        nlohmann::json j;
        j["id"] = rec.id;
        j["task_text"] = rec.task_text;
        j["reference_subtasks"] = rec.reference_subtasks;
        j["metadata"] = rec.metadata;
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace macs
