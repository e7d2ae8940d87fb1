#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gifc/channel.hpp"
#include "gifc/trellis.hpp"

namespace gifc {

// Raised when a conditional output density underflows to zero during the
// forward recursion. Per-stage normalization makes this unreachable for the
// built-in codes at double precision, but the guard stays.
struct degeneracy_error : std::runtime_error {
    explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

// Finite secondary signal set X2, a list of distinct n-dimensional points
// used with the uniform distribution. power_budget records the per-stage
// constraint E||X2||^2 <= n * P2.
struct SecondaryAlphabet {
    std::vector<std::vector<double>> points;
    double power_budget = 0.0;

    int dimension() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
    int size() const { return static_cast<int>(points.size()); }
};

// Per-dimension BPSK of power p2: all sign patterns of sqrt(p2), |X2| = 2^n.
// Meets the power constraint with equality. p2 == 0 degenerates to the
// single zero point so that alphabet points stay distinct.
SecondaryAlphabet make_bpsk_alphabet(int dimension, double p2);

// The single all-zero point; used to estimate interference-plus-noise
// entropies such as h(a12*X1 + Z2).
SecondaryAlphabet make_zero_alphabet(int dimension);

// One branch of the expanded trellis: a primary branch paired with one
// secondary point. The received stage signal is modeled as
// mean + unit-variance Gaussian noise.
struct ExpandedBranch {
    int start_state = 0;
    int end_state = 0;
    int primary_branch = 0;   // index into the source code's branch list
    int secondary_index = 0;  // index into the alphabet's point list
    std::vector<double> mean; // primary_gain*sqrt(p1)*c + secondary_gain*x2
};

// Trellis of a secondary link viewed as a finite-state channel with the
// primary code's state as the channel state. Every primary branch is
// expanded into |X2| parallel branches.
//
// For the link X2 -> Y2 use gains (a12, 1); for X2 -> Y1 use (1, a21).
class ExpandedTrellis {
public:
    ExpandedTrellis(const TrellisCode& code, const SecondaryAlphabet& alphabet,
                    double primary_gain, double secondary_gain, double p1);

    int num_states() const { return num_states_; }
    int signal_dimension() const { return dimension_; }
    int message_alphabet_size() const { return message_alphabet_size_; }
    int alphabet_size() const { return alphabet_size_; }
    double primary_gain() const { return primary_gain_; }
    double secondary_gain() const { return secondary_gain_; }
    double primary_power() const { return primary_power_; }

    const std::vector<ExpandedBranch>& branches() const { return branches_; }

    // State pairs (s, s') connected by at least one branch, in the order used
    // by the gamma vector of the forward recursion.
    struct StatePair {
        int start = 0;
        int end = 0;
        int first_branch = 0;  // range into branches(), which is sorted
        int branch_count = 0;
    };
    const std::vector<StatePair>& state_pairs() const { return state_pairs_; }

    // True when the alphabet is an exact per-dimension product set, enabling
    // the factorized metric evaluation (identical sums, reassociated).
    bool has_product_form() const { return product_form_; }

    // gamma(s, s') = sum of branch metrics over the pair's parallel branches,
    // one entry per state_pairs() element.
    void stage_gammas(std::span<const double> y_t, std::vector<double>& gammas) const;

    // Same quantity summed directly over the expanded branch list; reference
    // path for tests and non-product alphabets.
    void stage_gammas_reference(std::span<const double> y_t, std::vector<double>& gammas) const;

private:
    int num_states_ = 1;
    int dimension_ = 1;
    int message_alphabet_size_ = 2;
    int alphabet_size_ = 1;
    double primary_gain_ = 1.0;
    double secondary_gain_ = 1.0;
    double primary_power_ = 1.0;
    std::vector<ExpandedBranch> branches_;
    std::vector<StatePair> state_pairs_;
    std::vector<int> pair_of_primary_branch_;

    // Factorized-path tables.
    bool product_form_ = false;
    std::vector<std::vector<double>> secondary_levels_;      // [dim][level], scaled
    std::vector<std::vector<double>> primary_levels_;        // [dim][level], scaled
    std::vector<std::vector<std::uint8_t>> primary_level_index_;  // [primary branch][dim]
};

// Joint density-weight of one expanded branch for the stage observation y_t,
// including the uniform priors over messages and secondary points:
//
//   (1/M) (1/|X2|) (2*pi)^(-n/2) exp(-||y_t - mean||^2 / 2)
double branch_metric(const ExpandedTrellis& trellis, const ExpandedBranch& branch,
                     std::span<const double> y_t);

// Forward recursion state: the posterior over trellis states given the
// observations so far, plus the running -sum log2 of conditional densities.
struct ForwardState {
    std::vector<double> alpha;
    double log2_accumulator = 0.0;
    long long stages = 0;
};

ForwardState make_forward_state(const ExpandedTrellis& trellis, int initial_state);

// One recursion step: returns the conditional density f(y_t | y^(t-1)),
// renormalizes alpha, and adds -log2 of the density to the accumulator.
// Throws degeneracy_error when the density underflows to zero.
double forward_step(ForwardState& state, const ExpandedTrellis& trellis,
                    std::span<const double> y_t);

// Monte Carlo entropy-rate estimate in bits per real dimension, with a
// batch-means standard error.
struct EntropyEstimate {
    double bits_per_dimension = 0.0;
    long long num_stages = 0;
    int num_batches = 0;
    double batch_std_error = 0.0;
};

constexpr int kEntropyBatches = 20;

// Simulates one long realization of the link modeled by `trellis` (uniform
// messages through `code`, uniform secondary points, unit Gaussian noise) and
// runs the forward recursion over it, returning
//
//   -(1 / (n*N)) * sum_t log2 f(y_t | y^(t-1))
//
// as the output entropy rate. The same initial state seeds both the encoder
// and the recursion.
EntropyEstimate estimate_output_entropy_rate(const ExpandedTrellis& trellis, const TrellisCode& code,
                                             const SecondaryAlphabet& alphabet, long long n_stages,
                                             NoiseSource noise, int initial_state = 0);

enum class Link { y1, y2 };

// I(X2; Y_link) in bits per dimension as a difference of two entropy-rate
// estimates on independent derived noise streams:
//   link y2:  h(Y2)/n - h(a12*X1 + Z2)/n
//   link y1:  h(Y1)/n - h(X1 + Z1)/n
EntropyEstimate estimate_mutual_information_rate(const TrellisCode& code,
                                                 const SecondaryAlphabet& alphabet,
                                                 const GifcParams& params, Link link,
                                                 long long n_stages, NoiseSource noise,
                                                 int initial_state = 0);

// log2 f(y | x2, s0) for a fixed secondary sequence, computed by the scaled
// forward pass over the primary trellis with the final state summed out.
// `y` and `x2_sequence` are concatenations of n-dimensional stage vectors.
// Gains follow the same convention as ExpandedTrellis.
double fsc_sequence_log2_likelihood(const TrellisCode& code, std::span<const double> y,
                                    std::span<const double> x2_sequence, double primary_gain,
                                    double secondary_gain, double p1, int initial_state);

}  // namespace gifc
