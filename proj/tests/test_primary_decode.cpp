#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gifc/primary_decode.hpp"
#include "oracles.hpp"

using namespace gifc;

namespace {

std::vector<int> random_messages(const TrellisCode& code, long long stages, NoiseSource& rng) {
    std::vector<int> msgs(stages);
    for (int& u : msgs) u = rng.uniform_int(code.message_alphabet_size);
    return msgs;
}

}  // namespace

TEST_CASE("noiseless sequences decode exactly") {
    for (const std::string& id : builtin_code_ids()) {
        const TrellisCode code = make_code_by_id(id);
        NoiseSource rng(51, 0);
        const std::vector<int> msgs = random_messages(code, 200, rng);
        auto [signal, fs] = encode(code, 0, msgs, 6.0);
        (void)fs;
        CHECK(viterbi_decode(code, signal.values, 6.0, 0) == msgs);
        if (code.num_states == 1) CHECK(ml_block_decode(code, signal.values, 6.0) == msgs);
    }
}

TEST_CASE("viterbi equals per-stage ML on one-state codes") {
    for (const std::string& id : {"uncoded-bpsk", "rep-2-1-2", "ehc-8-4-4"}) {
        const TrellisCode code = make_code_by_id(id);
        NoiseSource rng(52, 1);
        const std::vector<int> msgs = random_messages(code, 500, rng);
        auto [signal, fs] = encode(code, 0, msgs, 2.0);
        (void)fs;
        const std::vector<double> y = awgn_output(signal.values, rng);
        CHECK(viterbi_decode(code, y, 2.0, 0) == ml_block_decode(code, y, 2.0));
    }
}

TEST_CASE("invalid inputs are rejected") {
    const TrellisCode cc = make_code_by_id("cc-2-1-2");
    std::vector<double> wrong(5, 0.0);  // not a multiple of n = 2
    CHECK_THROWS_AS(viterbi_decode(cc, wrong, 6.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(ml_block_decode(cc, std::vector<double>(4, 0.0), 6.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(measure_theta(cc, DecoderKind::ml_block, 6.0, 10, NoiseSource(0, 0)),
                    std::invalid_argument);
}

TEST_CASE("theta is exactly the mean of the per-stage errors") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    const DecodeResult r = measure_theta(bpsk, DecoderKind::ml_block, 2.0, 5000, NoiseSource(3, 0));
    long long errors = 0;
    for (auto e : r.per_stage_errors) errors += e;
    CHECK(r.theta_n == static_cast<double>(errors) / r.per_stage_errors.size());
    CHECK(r.theta_n >= 0.0);
    CHECK(r.theta_n <= 1.0);
}

TEST_CASE("silent noise gives zero theta") {
    for (const std::string& id : builtin_code_ids()) {
        const TrellisCode code = make_code_by_id(id);
        const DecoderKind kind =
            code.num_states == 1 ? DecoderKind::ml_block : DecoderKind::viterbi;
        const DecodeResult r = measure_theta(code, kind, 6.0, 300, NoiseSource::silent());
        CHECK(r.theta_n == 0.0);
    }
}

TEST_CASE("uncoded BPSK error rate matches the Q-function") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    const long long trials = 2'000'000;
    const BerCount count =
        ber_experiment(bpsk, DecoderKind::ml_block, 6.0, trials, NoiseSource(4, 0));
    const double ber = static_cast<double>(count.symbol_errors) / trials;
    const double expected = oracle::q_function(std::sqrt(6.0));
    const double se = std::sqrt(expected * (1.0 - expected) / trials);
    CHECK(std::abs(ber - expected) <= 3.0 * se);
}

TEST_CASE("theta concentrates as the block count grows") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    auto spread = [&bpsk](long long stages, std::uint64_t seed_base) {
        double mean = 0.0, sq = 0.0;
        const int runs = 20;
        for (int r = 0; r < runs; ++r) {
            const double theta =
                measure_theta(bpsk, DecoderKind::ml_block, 2.0, stages, NoiseSource(seed_base, r))
                    .theta_n;
            mean += theta;
            sq += theta * theta;
        }
        mean /= runs;
        return std::sqrt(sq / runs - mean * mean);
    };
    const double wide = spread(2'000, 60);
    const double narrow = spread(32'000, 61);
    // 16x the stages should shrink the spread by about 4; allow slack.
    CHECK(narrow < wide / 2.0);
}

TEST_CASE("error rate is invariant to the transmitted message for linear codes") {
    const TrellisCode cc = make_code_by_id("cc-2-1-2");
    const double p1 = 2.0;
    const long long stages = 120'000;

    // All-zero transmission.
    std::vector<int> zeros(stages, 0);
    auto [zero_sig, fs1] = encode(cc, 0, zeros, p1);
    (void)fs1;
    NoiseSource noise_a(71, 0);
    const std::vector<double> y0 = awgn_output(zero_sig.values, noise_a);
    const DecodeResult r0 = score_decode(zeros, viterbi_decode(cc, y0, p1, 0));

    // Random transmission.
    const DecodeResult r1 = measure_theta(cc, DecoderKind::viterbi, p1, stages, NoiseSource(71, 1));

    const double pooled = 0.5 * (r0.theta_n + r1.theta_n);
    const double se = std::sqrt(2.0 * pooled * (1.0 - pooled) / stages);
    CHECK(std::abs(r0.theta_n - r1.theta_n) <= 3.0 * std::max(se, 1e-9));
}

TEST_CASE("random codebooks respect power and differ across seeds") {
    const SecondaryAlphabet alphabet = make_bpsk_alphabet(2, 1.5);
    const SecondaryCodebook one = random_secondary_codebook(alphabet, 64, 1, NoiseSource(8, 0));
    CHECK(one.rate_bits_per_dim() == 0.0);

    const SecondaryCodebook a = random_secondary_codebook(alphabet, 64, 8, NoiseSource(8, 1));
    const SecondaryCodebook b = random_secondary_codebook(alphabet, 64, 8, NoiseSource(8, 2));
    CHECK(a.codewords != b.codewords);
    for (const auto& word : a.codewords) {
        double energy = 0.0;
        for (double v : word) energy += v * v;
        CHECK(energy == doctest::Approx(2 * 64 * 1.5));  // n * N * P2 exactly for BPSK
    }
}

TEST_CASE("two-stage decoding recovers everything without noise") {
    const TrellisCode cc = make_code_by_id("cc-2-1-2");
    const GifcParams params{std::sqrt(1.5), std::sqrt(1.5), 6.0, 1.5};
    const SecondaryAlphabet alphabet = make_bpsk_alphabet(2, params.p2);
    NoiseSource rng(9, 0);
    const SecondaryCodebook book = random_secondary_codebook(alphabet, 48, 8, rng.spawn(0));

    NoiseSource msg_rng = rng.spawn(1);
    std::vector<int> msgs = random_messages(cc, 48, msg_rng);
    const int w2 = 5;
    auto [x1, fs] = encode(cc, 0, msgs, params.p1);
    (void)fs;
    std::vector<double> y1(x1.values.size());
    for (std::size_t i = 0; i < y1.size(); ++i)
        y1[i] = x1.values[i] + params.a21 * book.codewords[w2][i];

    const TwoStageResult result = two_stage_decode(cc, book, y1, params, 0, msgs);
    CHECK(result.w2_hat == w2);
    CHECK(result.primary.theta_n == 0.0);
    CHECK(result.primary.decoded_messages == msgs);
}

TEST_CASE("with a21 = 0 the second stage is plain primary decoding") {
    const TrellisCode cc = make_code_by_id("cc-2-1-2");
    const GifcParams params{std::sqrt(1.5), 0.0, 6.0, 1.5};
    const SecondaryAlphabet alphabet = make_bpsk_alphabet(2, params.p2);
    NoiseSource rng(10, 0);
    const SecondaryCodebook book = random_secondary_codebook(alphabet, 64, 4, rng.spawn(0));

    NoiseSource msg_rng = rng.spawn(1);
    std::vector<int> msgs = random_messages(cc, 64, msg_rng);
    auto [x1, fs] = encode(cc, 0, msgs, params.p1);
    (void)fs;
    NoiseSource ch = rng.spawn(2);
    const std::vector<double> y1 = awgn_output(x1.values, ch);

    const TwoStageResult result = two_stage_decode(cc, book, y1, params, 0, msgs);
    CHECK(result.primary.decoded_messages == viterbi_decode(cc, y1, params.p1, 0));
}

TEST_CASE("genie-aided subtraction behaves like the interference-free link") {
    const TrellisCode cc = make_code_by_id("cc-2-1-2");
    const GifcParams params{std::sqrt(1.5), std::sqrt(1.5), 2.0, 1.5};
    const SecondaryAlphabet alphabet = make_bpsk_alphabet(2, params.p2);

    const long long block = 4000;
    const int trials = 30;
    long long genie_errors = 0;
    long long clean_errors = 0;
    NoiseSource base(11, 0);
    for (int trial = 0; trial < trials; ++trial) {
        NoiseSource rng = base.spawn(trial);
        const SecondaryCodebook book = random_secondary_codebook(alphabet, block, 4, rng.spawn(0));
        NoiseSource msg_rng = rng.spawn(1);
        std::vector<int> msgs = random_messages(cc, block, msg_rng);
        const int w2 = msg_rng.uniform_int(4);
        auto [x1, fs] = encode(cc, 0, msgs, params.p1);
        (void)fs;
        NoiseSource ch = rng.spawn(2);
        std::vector<double> y1(x1.values.size());
        for (std::size_t i = 0; i < y1.size(); ++i)
            y1[i] = x1.values[i] + params.a21 * book.codewords[w2][i] + ch.gaussian();

        const DecodeResult genie = subtract_and_decode(cc, y1, book.codewords[w2], params, 0, msgs);
        for (auto e : genie.per_stage_errors) genie_errors += e;

        const DecodeResult clean =
            measure_theta(cc, DecoderKind::viterbi, params.p1, block, base.spawn(1000 + trial));
        for (auto e : clean.per_stage_errors) clean_errors += e;
    }
    const double total = static_cast<double>(block) * trials;
    const double genie_theta = genie_errors / total;
    const double clean_theta = clean_errors / total;
    const double pooled = 0.5 * (genie_theta + clean_theta);
    const double se = std::sqrt(2.0 * pooled * (1.0 - pooled) / total);
    CHECK(std::abs(genie_theta - clean_theta) <= 3.0 * se);
}

TEST_CASE("secondary decoding improves with block length at fixed codebook size") {
    const TrellisCode bpsk = make_uncoded_bpsk();
    const GifcParams params{std::sqrt(1.5), std::sqrt(1.5), 6.0, 1.0};
    const SecondaryAlphabet alphabet = make_bpsk_alphabet(1, params.p2);

    auto eps1 = [&](long long block, std::uint64_t seed) {
        const int trials = 60;
        int errors = 0;
        NoiseSource base(seed, 0);
        for (int trial = 0; trial < trials; ++trial) {
            NoiseSource rng = base.spawn(trial);
            const SecondaryCodebook book =
                random_secondary_codebook(alphabet, block, 16, rng.spawn(0));
            NoiseSource msg_rng = rng.spawn(1);
            std::vector<int> msgs = random_messages(bpsk, block, msg_rng);
            const int w2 = msg_rng.uniform_int(16);
            auto [x1, fs] = encode(bpsk, 0, msgs, params.p1);
            (void)fs;
            NoiseSource ch = rng.spawn(2);
            std::vector<double> y1(x1.values.size());
            for (std::size_t i = 0; i < y1.size(); ++i)
                y1[i] = x1.values[i] + params.a21 * book.codewords[w2][i] + ch.gaussian();
            errors += two_stage_decode(bpsk, book, y1, params, 0, msgs).w2_hat != w2;
        }
        return static_cast<double>(errors) / trials;
    };

    const double short_blocks = eps1(8, 14);
    const double long_blocks = eps1(96, 15);
    CHECK(long_blocks < short_blocks);
    CHECK(long_blocks <= 0.05);
}
