#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <thread>
#include <vector>

#include "macs/errors.hpp"
#include "macs/rng.hpp"
#include "macs/semantics.hpp"

using namespace macs;

namespace {

EncoderConfig cfg64(std::uint64_t seed = 7) {
    EncoderConfig cfg;
    cfg.d = 64;
    cfg.seed = seed;
    return cfg;
}

std::string tokens_text(int n, const char* prefix = "tok") {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out.push_back(' ');
        out += prefix + std::to_string(i);
    }
    return out;
}

// Independent reference: Kahan-compensated long double dot product.
double reference_dot(const Vec& a, const Vec& b) {
    long double sum = 0.0L, comp = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double term = static_cast<long double>(a[i]) * static_cast<long double>(b[i]) - comp;
        const long double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on whitespace and punctuation") {
    CHECK(tokenize("Alpha, beta!  GAMMA") == std::vector<std::string>{"alpha", "beta", "gamma"});
    CHECK(tokenize("a\tb\nc") == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize("...!!!") == std::vector<std::string>{});
    // U+00A0 no-break space separates
    CHECK(tokenize("a\xC2\xA0m") == std::vector<std::string>{"a", "m"});
}

TEST_CASE("encode rejects empty input") {
    CHECK_THROWS_AS(encode("", cfg64()), EmptyTaskError);
    CHECK_THROWS_AS(encode("  .,;  ", cfg64()), EmptyTaskError);
}

TEST_CASE("encode is unit norm and permutation invariant bit for bit") {
    const Vec a = encode("alpha beta", cfg64());
    const Vec b = encode("beta alpha", cfg64());
    CHECK(a == b);
    CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-9));

    const Vec c = encode("alpha    beta", cfg64());
    CHECK(a == c);  // repeated whitespace is invisible
}

TEST_CASE("encode is deterministic across threads") {
    const std::string text = "deterministic encoding of the same task text";
    const Vec expect = encode(text, cfg64());
    std::vector<Vec> got(8);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&, t] { got[static_cast<std::size_t>(t)] = encode(text, cfg64()); });
    for (auto& th : threads) th.join();
    for (const Vec& v : got) CHECK(v == expect);
}

TEST_CASE("encode depends on seed and dimension") {
    const Vec a = encode("alpha beta", cfg64(1));
    const Vec b = encode("alpha beta", cfg64(2));
    CHECK(a != b);
    EncoderConfig small = cfg64(1);
    small.d = 16;
    CHECK(encode("alpha beta", small).size() == 16);
}

TEST_CASE("segment window arithmetic") {
    EncoderConfig cfg = cfg64();

    SUBCASE("17 tokens, window 8, stride 8 -> 3 windows of 8, 8, 1") {
        const SegmentMatrix segs = segment(tokens_text(17), cfg);
        REQUIRE(segs.size() == 3);
        CHECK(tokenize(segs.segment_texts[0]).size() == 8);
        CHECK(tokenize(segs.segment_texts[1]).size() == 8);
        CHECK(tokenize(segs.segment_texts[2]).size() == 1);
    }
    SUBCASE("5 tokens, window 8 -> single row equals encode of the text") {
        const std::string text = tokens_text(5);
        const SegmentMatrix segs = segment(text, cfg);
        REQUIRE(segs.size() == 1);
        CHECK(segs.rows[0] == encode(text, cfg));
    }
    SUBCASE("16 tokens, window 8, stride 4 -> 3 windows") {
        cfg.stride = 4;
        CHECK(segment(tokens_text(16), cfg).size() == 3);
    }
}

TEST_CASE("segment rows are unit norm and re-encode bit-exactly") {
    const SegmentMatrix segs = segment(tokens_text(29, "word"), cfg64());
    for (std::size_t m = 0; m < segs.size(); ++m) {
        CHECK(norm(segs.rows[m]) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(encode(segs.segment_texts[m], cfg64()) == segs.rows[m]);
    }
}

TEST_CASE("cosine identities") {
    const Vec v = encode("some task text", cfg64());
    Vec neg = v;
    for (auto& x : neg) x = -x;
    CHECK(cosine(v, v) == 1.0);
    CHECK(cosine(v, neg) == -1.0);
}

TEST_CASE("cosine matches a high-precision reference dot product") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Vec a = random_unit(mix_seed(11, s), 64);
        const Vec b = random_unit(mix_seed(12, s), 64);
        const double expect = reference_dot(a, b);
        CHECK(std::abs(cosine(a, b) - expect) < 1e-12);
    }
}

TEST_CASE("disjoint token sets are nearly orthogonal at d = 64") {
    // Statistical smoke test, fixed seed: |cos| < 0.5 for at least 95% of
    // 1000 random disjoint token-set pairs.
    int ok = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        EncoderConfig cfg = cfg64(static_cast<std::uint64_t>(trial));
        std::string left, right;
        Stream s(mix_seed(99, static_cast<std::uint64_t>(trial)));
        for (int t = 0; t < 10; ++t) {
            left += " l" + std::to_string(s.next_below(100000));
            right += " r" + std::to_string(s.next_below(100000));
        }
        if (std::abs(cosine(encode(left, cfg), encode(right, cfg))) < 0.5) ++ok;
    }
    CHECK(ok >= 950);
}

TEST_CASE("config validation rejects bad dimensions") {
    EncoderConfig bad = cfg64();
    bad.d = 1;
    CHECK_THROWS_AS(encode("x", bad), ConfigError);
    bad = cfg64();
    bad.window = 0;
    CHECK_THROWS_AS(segment("x y", bad), ConfigError);
}
