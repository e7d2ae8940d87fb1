#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gifc/channel.hpp"
#include "gifc/fsc_entropy.hpp"
#include "gifc/trellis.hpp"

namespace gifc {

// Decoded message sequence scored against the transmitted one. theta_n is
// the fraction of erroneous stages, exactly mean(per_stage_errors).
struct DecodeResult {
    std::vector<int> decoded_messages;
    std::vector<std::uint8_t> per_stage_errors;
    double theta_n = 0.0;
};

DecodeResult score_decode(const std::vector<int>& true_messages,
                          std::vector<int> decoded_messages);

enum class DecoderKind { viterbi, ml_block };

// Maximum-likelihood sequence decoding of y = sqrt(p1) * c + z over the
// trellis, starting from the known initial state, with full traceback.
std::vector<int> viterbi_decode(const TrellisCode& code, std::span<const double> y, double p1,
                                int initial_state);

// Per-stage ML decisions over the parallel branches of a one-state code.
std::vector<int> ml_block_decode(const TrellisCode& code, std::span<const double> y, double p1);

// Simulates interference-free transmission of n_stages i.u.d. messages,
// decodes, and scores. The whole realization is kept in memory; intended
// for desk-scale runs.
DecodeResult measure_theta(const TrellisCode& code, DecoderKind decoder, double p1,
                           long long n_stages, NoiseSource noise, int initial_state = 0);

// Streaming error-rate measurement without retained sequences. One-state
// codes are processed in chunks, so trial counts of 1e8 and beyond are fine;
// multi-state codes run a single full Viterbi pass.
struct BerCount {
    long long trials = 0;
    long long symbol_errors = 0;
    long long bit_errors = 0;  // within-message bit errors, log2(M) per stage
};
BerCount ber_experiment(const TrellisCode& code, DecoderKind decoder, double p1, long long trials,
                        NoiseSource noise, int initial_state = 0);

// Block code for the secondary user: M2 signal sequences of block_stages
// stages over the alphabet.
struct SecondaryCodebook {
    std::vector<std::vector<double>> codewords;  // each of length n * block_stages
    long long block_stages = 0;
    int dimension = 1;

    double rate_bits_per_dim() const;
};

// Draws every codeword stage i.u.d. from the alphabet.
SecondaryCodebook random_secondary_codebook(const SecondaryAlphabet& alphabet,
                                            long long block_stages, int num_codewords,
                                            NoiseSource noise);

// Step 2 of the two-stage decoder: subtract the re-encoded secondary signal
// from y1 and run the primary decoder.
DecodeResult subtract_and_decode(const TrellisCode& code, std::span<const double> y1,
                                 std::span<const double> x2_hat, const GifcParams& params,
                                 int initial_state, const std::vector<int>& true_messages);

struct TwoStageResult {
    int w2_hat = 0;
    DecodeResult primary;
};

// The two-stage decoder: pick the codeword maximizing the finite-state
// channel likelihood f(y1 | x2, s0), then subtract its interference and run
// the primary decoder. true_messages is needed to score theta.
TwoStageResult two_stage_decode(const TrellisCode& code, const SecondaryCodebook& codebook,
                                std::span<const double> y1, const GifcParams& params,
                                int initial_state, const std::vector<int>& true_messages);

}  // namespace gifc
