#include "macs/semantics.hpp"

#include <algorithm>
#include <cstdint>

#include "macs/rng.hpp"

namespace macs {
namespace {

// Unicode whitespace beyond ASCII, as code points.
bool is_unicode_space(std::uint32_t cp) {
    switch (cp) {
        case 0x0085: case 0x00A0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_ascii_space(std::uint32_t cp) {
    return cp == ' ' || (cp >= 0x09 && cp <= 0x0D);
}

bool is_ascii_punct(std::uint32_t cp) {
    return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
           (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
}

// Minimal UTF-8 decode; malformed bytes are treated as Latin-1 so tokenization
// never fails on arbitrary input.
std::uint32_t decode_utf8(const std::string& s, std::size_t& i) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    if (c < 0x80) {
        i += 1;
        return c;
    }
    if ((c & 0xE0) == 0xC0 && cont(1)) {
        const std::uint32_t cp = ((c & 0x1Fu) << 6) |
                                 (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
        i += 2;
        return cp;
    }
    if ((c & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        const std::uint32_t cp = ((c & 0x0Fu) << 12) |
                                 ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 6) |
                                 (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
        i += 3;
        return cp;
    }
    if ((c & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        const std::uint32_t cp = ((c & 0x07u) << 18) |
                                 ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 12) |
                                 ((static_cast<unsigned char>(s[i + 2]) & 0x3Fu) << 6) |
                                 (static_cast<unsigned char>(s[i + 3]) & 0x3Fu);
        i += 4;
        return cp;
    }
    i += 1;
    return c;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string join_tokens(const std::vector<std::string>& tokens,
                        std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace

void EncoderConfig::validate() const {
    if (d < 2) throw ConfigError("encoder.d must be >= 2");
    if (window < 1) throw ConfigError("encoder.window must be >= 1");
    if (stride < 1) throw ConfigError("encoder.stride must be >= 1");
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::uint32_t cp = decode_utf8(text, i);
        if (is_ascii_space(cp) || is_unicode_space(cp) || is_ascii_punct(cp)) {
            if (!cur.empty()) {
                tokens.push_back(std::move(cur));
                cur.clear();
            }
            continue;
        }
        if (cp >= 'A' && cp <= 'Z') {
            cur.push_back(static_cast<char>(cp - 'A' + 'a'));
        } else {
            append_utf8(cur, cp);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

Vec token_vector(const std::string& token, const EncoderConfig& cfg) {
    Stream s(mix_seed(fnv1a64(token), cfg.seed));
    Vec v(static_cast<std::size_t>(cfg.d));
    for (auto& x : v) x = s.next_symmetric();
    return v;
}

namespace {

Vec encode_tokens(std::vector<std::string> tokens, const EncoderConfig& cfg) {
    if (tokens.empty()) throw EmptyTaskError("no tokens survive tokenization");
    // Lexicographic order makes the float sum permutation-invariant bit for bit.
    std::sort(tokens.begin(), tokens.end());
    Vec sum = zeros(static_cast<std::size_t>(cfg.d));
    for (const auto& tok : tokens) add_scaled(sum, token_vector(tok, cfg), 1.0);
    if (is_zero(sum)) throw DegenerateSumError("token vectors cancel; refusing to invent a direction");
    return normalized(sum);
}

}  // namespace

Vec encode(const std::string& text, const EncoderConfig& cfg) {
    cfg.validate();
    return encode_tokens(tokenize(text), cfg);
}

SegmentMatrix segment(const std::string& text, const EncoderConfig& cfg) {
    cfg.validate();
    const std::vector<std::string> tokens = tokenize(text);
    if (tokens.empty()) throw EmptyTaskError("no tokens survive tokenization");

    const std::size_t n = tokens.size();
    const std::size_t window = static_cast<std::size_t>(cfg.window);
    const std::size_t stride = static_cast<std::size_t>(cfg.stride);
    const std::size_t over = n > window ? n - window : 0;
    const std::size_t m = (over + stride - 1) / stride + 1;

    SegmentMatrix segs;
    segs.window = cfg.window;
    segs.stride = cfg.stride;
    segs.rows.reserve(m);
    segs.segment_texts.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        // stride > window can push the last start past the end; keep at least
        // one token so every row stays well-defined.
        const std::size_t begin = std::min(k * stride, n - 1);
        const std::size_t end = std::min(begin + window, n);
        segs.segment_texts.push_back(join_tokens(tokens, begin, end));
        segs.rows.push_back(encode_tokens({tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(end)},
                                          cfg));
    }
    return segs;
}

}  // namespace macs
