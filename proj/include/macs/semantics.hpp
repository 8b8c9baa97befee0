#pragma once
// Text -> unit-norm semantic vectors.
//
// The default encoder is a deterministic feature-hashing bag of tokens:
//
//   tokenize: lowercase (ASCII), split on Unicode whitespace and ASCII
//             punctuation; no stemming.
//   token_vector(tok): a SplitMix64 counter stream seeded with
//             mix(fnv1a64(tok), cfg.seed) yields d components in [-1, 1).
//   encode:   normalize(sum of token vectors over the token multiset),
//             summed in lexicographic token order so the result is
//             bit-identical under any permutation of the input tokens.
//
// The scheme is fixed: traces and stored targets are only comparable across
// builds because every constant above is pinned.
//
// Other encoders can be plugged in behind the Encoder interface; they must be
// deterministic given their own configuration (adapters for remote services
// should cache responses so replays stay bit-exact).

#include <cstdint>
#include <string>
#include <vector>

#include "macs/errors.hpp"
#include "macs/vec.hpp"

namespace macs {

struct EncoderConfig {
    int d = 64;
    std::uint64_t seed = 0;
    int window = 8;  // tokens per segment
    int stride = 8;  // tokens advanced between segments

    void validate() const;
};

/// Segment-level view of a task text: one unit-norm row per token window.
struct SegmentMatrix {
    std::vector<Vec> rows;
    std::vector<std::string> segment_texts;
    int window = 0;
    int stride = 0;

    std::size_t size() const { return rows.size(); }
};

/// Deterministic encoder interface. encode() must be a pure function of the
/// text and the encoder's own configuration.
class Encoder {
public:
    virtual ~Encoder() = default;
    virtual Vec encode(const std::string& text) const = 0;
    virtual int dim() const = 0;
};

/// Lowercase, split on Unicode whitespace and ASCII punctuation.
std::vector<std::string> tokenize(const std::string& text);

/// d components in [-1, 1) from a counter-mode expansion of the token hash.
Vec token_vector(const std::string& token, const EncoderConfig& cfg);

/// normalize(sum of token vectors). Throws EmptyTaskError when no tokens
/// survive tokenization, DegenerateSumError when the sum has norm < 1e-9.
Vec encode(const std::string& text, const EncoderConfig& cfg);

/// Window the token list (final partial window kept) and encode each window.
/// M = ceil(max(tokens - window, 0) / stride) + 1 for non-empty input.
SegmentMatrix segment(const std::string& text, const EncoderConfig& cfg);

/// The default encoder as an Encoder implementation.
class HashingEncoder final : public Encoder {
public:
    explicit HashingEncoder(EncoderConfig cfg) : cfg_(cfg) { cfg_.validate(); }
    Vec encode(const std::string& text) const override { return macs::encode(text, cfg_); }
    int dim() const override { return cfg_.d; }
    const EncoderConfig& config() const { return cfg_; }

private:
    EncoderConfig cfg_;
};

}  // namespace macs
