#include "gifc/primary_decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gifc {

namespace {

int popcount_diff(int a, int b) { return __builtin_popcount(static_cast<unsigned>(a ^ b)); }

}  // namespace

DecodeResult score_decode(const std::vector<int>& true_messages, std::vector<int> decoded_messages) {
    if (true_messages.size() != decoded_messages.size())
        throw std::invalid_argument("decoded length does not match transmitted length");
    DecodeResult result;
    result.decoded_messages = std::move(decoded_messages);
    result.per_stage_errors.resize(true_messages.size());
    long long errors = 0;
    for (std::size_t t = 0; t < true_messages.size(); ++t) {
        const bool err = result.decoded_messages[t] != true_messages[t];
        result.per_stage_errors[t] = err ? 1 : 0;
        errors += err;
    }
    result.theta_n = true_messages.empty() ? 0.0 : static_cast<double>(errors) / true_messages.size();
    return result;
}

std::vector<int> viterbi_decode(const TrellisCode& code, std::span<const double> y, double p1,
                                int initial_state) {
    const int n = code.signal_dimension;
    if (y.size() % static_cast<std::size_t>(n) != 0)
        throw std::invalid_argument("received length is not a multiple of the signal dimension");
    if (initial_state < 0 || initial_state >= code.num_states)
        throw std::invalid_argument("initial state out of range");
    if (code.branches.size() > UINT16_MAX)
        throw std::invalid_argument("too many branches for the survivor storage");

    const long long stages = static_cast<long long>(y.size()) / n;
    const int num_states = code.num_states;
    const double scale = std::sqrt(p1);
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> metric(num_states, inf);
    std::vector<double> next_metric(num_states, inf);
    metric[initial_state] = 0.0;

    // Survivor branch per (stage, state); uint16 suffices for every desk-scale code.
    std::vector<std::uint16_t> survivor(static_cast<std::size_t>(stages) * num_states, 0);

    for (long long t = 0; t < stages; ++t) {
        const double* yt = y.data() + t * n;
        std::fill(next_metric.begin(), next_metric.end(), inf);
        for (std::size_t bi = 0; bi < code.branches.size(); ++bi) {
            const Branch& b = code.branches[bi];
            if (metric[b.start_state] == inf) continue;
            double dist = 0.0;
            for (int d = 0; d < n; ++d) {
                const double diff = yt[d] - scale * b.output_signal[d];
                dist += diff * diff;
            }
            const double cand = metric[b.start_state] + dist;
            if (cand < next_metric[b.end_state]) {
                next_metric[b.end_state] = cand;
                survivor[static_cast<std::size_t>(t) * num_states + b.end_state] =
                    static_cast<std::uint16_t>(bi);
            }
        }
        metric.swap(next_metric);
    }

    int state = 0;
    for (int s = 1; s < num_states; ++s) {
        if (metric[s] < metric[state]) state = s;
    }

    std::vector<int> messages(stages, 0);
    for (long long t = stages - 1; t >= 0; --t) {
        const Branch& b = code.branches[survivor[static_cast<std::size_t>(t) * num_states + state]];
        messages[t] = b.input_symbol;
        state = b.start_state;
    }
    return messages;
}

std::vector<int> ml_block_decode(const TrellisCode& code, std::span<const double> y, double p1) {
    if (code.num_states != 1) throw std::invalid_argument("ml_block_decode requires a one-state code");
    const int n = code.signal_dimension;
    if (y.size() % static_cast<std::size_t>(n) != 0)
        throw std::invalid_argument("received length is not a multiple of the signal dimension");

    const long long stages = static_cast<long long>(y.size()) / n;
    const double scale = std::sqrt(p1);

    std::vector<int> messages(stages, 0);
    for (long long t = 0; t < stages; ++t) {
        const double* yt = y.data() + t * n;
        double best = std::numeric_limits<double>::infinity();
        int best_u = 0;
        for (const Branch& b : code.branches) {
            double dist = 0.0;
            for (int d = 0; d < n; ++d) {
                const double diff = yt[d] - scale * b.output_signal[d];
                dist += diff * diff;
            }
            if (dist < best) {
                best = dist;
                best_u = b.input_symbol;
            }
        }
        messages[t] = best_u;
    }
    return messages;
}

DecodeResult measure_theta(const TrellisCode& code, DecoderKind decoder, double p1,
                           long long n_stages, NoiseSource noise, int initial_state) {
    if (n_stages < 1) throw std::invalid_argument("n_stages must be >= 1");
    if (decoder == DecoderKind::ml_block && code.num_states != 1)
        throw std::invalid_argument("ml_block decoder requires a one-state code");

    std::vector<int> messages(n_stages);
    for (int& u : messages) u = noise.uniform_int(code.message_alphabet_size);

    auto [signal, final_state] = encode(code, initial_state, messages, p1);
    (void)final_state;
    std::vector<double> y = awgn_output(signal.values, noise);

    std::vector<int> decoded = decoder == DecoderKind::viterbi
                                   ? viterbi_decode(code, y, p1, initial_state)
                                   : ml_block_decode(code, y, p1);
    return score_decode(messages, std::move(decoded));
}

BerCount ber_experiment(const TrellisCode& code, DecoderKind decoder, double p1, long long trials,
                        NoiseSource noise, int initial_state) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");

    BerCount count;
    count.trials = trials;

    if (code.num_states == 1 || decoder == DecoderKind::ml_block) {
        if (code.num_states != 1) throw std::invalid_argument("ml_block decoder requires a one-state code");
        const long long chunk = 1 << 16;
        std::vector<int> messages;
        for (long long done = 0; done < trials; done += chunk) {
            const long long now = std::min(chunk, trials - done);
            messages.resize(now);
            for (int& u : messages) u = noise.uniform_int(code.message_alphabet_size);
            auto [signal, fs] = encode(code, 0, messages, p1);
            (void)fs;
            std::vector<double> y = awgn_output(signal.values, noise);
            std::vector<int> decoded = ml_block_decode(code, y, p1);
            for (long long t = 0; t < now; ++t) {
                if (decoded[t] != messages[t]) {
                    count.symbol_errors += 1;
                    count.bit_errors += popcount_diff(decoded[t], messages[t]);
                }
            }
        }
        return count;
    }

    DecodeResult result = measure_theta(code, DecoderKind::viterbi, p1, trials, std::move(noise),
                                        initial_state);
    for (std::uint8_t e : result.per_stage_errors) count.symbol_errors += e;
    count.bit_errors = count.symbol_errors;  // M = 2 for every built-in multi-state code
    return count;
}

double SecondaryCodebook::rate_bits_per_dim() const {
    if (codewords.empty() || block_stages == 0) return 0.0;
    return std::log2(static_cast<double>(codewords.size())) /
           (static_cast<double>(dimension) * block_stages);
}

SecondaryCodebook random_secondary_codebook(const SecondaryAlphabet& alphabet,
                                            long long block_stages, int num_codewords,
                                            NoiseSource noise) {
    if (num_codewords < 1) throw std::invalid_argument("codebook needs at least one codeword");
    if (block_stages < 1) throw std::invalid_argument("block_stages must be >= 1");

    const int n = alphabet.dimension();
    SecondaryCodebook book;
    book.block_stages = block_stages;
    book.dimension = n;
    book.codewords.reserve(num_codewords);
    for (int m = 0; m < num_codewords; ++m) {
        std::vector<double> word;
        word.reserve(static_cast<std::size_t>(n) * block_stages);
        for (long long t = 0; t < block_stages; ++t) {
            const int point = alphabet.size() == 1 ? 0 : noise.uniform_int(alphabet.size());
            for (int d = 0; d < n; ++d) word.push_back(alphabet.points[point][d]);
        }
        book.codewords.push_back(std::move(word));
    }
    return book;
}

DecodeResult subtract_and_decode(const TrellisCode& code, std::span<const double> y1,
                                 std::span<const double> x2_hat, const GifcParams& params,
                                 int initial_state, const std::vector<int>& true_messages) {
    if (y1.size() != x2_hat.size())
        throw std::invalid_argument("y1 and secondary codeword length mismatch");
    std::vector<double> cleaned(y1.size());
    for (std::size_t i = 0; i < y1.size(); ++i) cleaned[i] = y1[i] - params.a21 * x2_hat[i];
    std::vector<int> decoded = viterbi_decode(code, cleaned, params.p1, initial_state);
    return score_decode(true_messages, std::move(decoded));
}

TwoStageResult two_stage_decode(const TrellisCode& code, const SecondaryCodebook& codebook,
                                std::span<const double> y1, const GifcParams& params,
                                int initial_state, const std::vector<int>& true_messages) {
    if (codebook.codewords.empty()) throw std::invalid_argument("empty codebook");
    if (codebook.codewords.size() > (1u << 16))
        throw std::invalid_argument("codebook too large for exhaustive ML");

    double best = -std::numeric_limits<double>::infinity();
    int best_m = 0;
    for (std::size_t m = 0; m < codebook.codewords.size(); ++m) {
        const double ll = fsc_sequence_log2_likelihood(code, y1, codebook.codewords[m], 1.0,
                                                       params.a21, params.p1, initial_state);
        if (ll > best) {
            best = ll;
            best_m = static_cast<int>(m);
        }
    }

    TwoStageResult result;
    result.w2_hat = best_m;
    result.primary = subtract_and_decode(code, y1, codebook.codewords[best_m], params,
                                         initial_state, true_messages);
    return result;
}

}  // namespace gifc
