#include "gifc/fsc_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace gifc {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kLog2_2Pi = 2.651496129472319;  // log2(2*pi)

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

// Scaled one-dimensional normal density (2*pi)^(-1/2) exp(-t^2/2).
inline double phi1(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

}  // namespace

SecondaryAlphabet make_bpsk_alphabet(int dimension, double p2) {
    if (dimension < 1 || dimension > 16)
        throw std::invalid_argument("bpsk alphabet dimension must be in [1,16]");
    if (p2 < 0.0) throw std::invalid_argument("p2 must be >= 0");

    SecondaryAlphabet alphabet;
    alphabet.power_budget = p2;
    if (p2 == 0.0) {
        alphabet.points.push_back(std::vector<double>(dimension, 0.0));
        return alphabet;
    }
    const double level = std::sqrt(p2);
    const std::size_t count = std::size_t{1} << dimension;
    alphabet.points.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::vector<double> point(dimension);
        for (int d = 0; d < dimension; ++d) point[d] = (mask >> d) & 1 ? level : -level;
        alphabet.points.push_back(std::move(point));
    }
    return alphabet;
}

SecondaryAlphabet make_zero_alphabet(int dimension) {
    SecondaryAlphabet alphabet;
    alphabet.power_budget = 0.0;
    alphabet.points.push_back(std::vector<double>(dimension, 0.0));
    return alphabet;
}

ExpandedTrellis::ExpandedTrellis(const TrellisCode& code, const SecondaryAlphabet& alphabet,
                                 double primary_gain, double secondary_gain, double p1)
    : num_states_(code.num_states),
      dimension_(code.signal_dimension),
      message_alphabet_size_(code.message_alphabet_size),
      alphabet_size_(alphabet.size()),
      primary_gain_(primary_gain),
      secondary_gain_(secondary_gain),
      primary_power_(p1) {
    if (alphabet.size() == 0) throw std::invalid_argument("secondary alphabet is empty");
    if (alphabet.dimension() != code.signal_dimension)
        throw std::invalid_argument("alphabet dimension does not match code signal dimension");
    if (p1 < 0.0) throw std::invalid_argument("p1 must be >= 0");
    for (int i = 0; i < alphabet.size(); ++i) {
        for (int j = i + 1; j < alphabet.size(); ++j) {
            if (alphabet.points[i] == alphabet.points[j])
                throw std::invalid_argument("secondary alphabet points must be distinct");
        }
    }

    const double scale = primary_gain_ * std::sqrt(p1);
    const int n = dimension_;

    // Branches sorted by (start, end) so each state pair owns one contiguous
    // range; primary branch order is kept within a pair.
    std::vector<int> order(code.branches.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&code](int a, int b) {
        const Branch& ba = code.branches[a];
        const Branch& bb = code.branches[b];
        if (ba.start_state != bb.start_state) return ba.start_state < bb.start_state;
        return ba.end_state < bb.end_state;
    });

    pair_of_primary_branch_.assign(code.branches.size(), -1);
    for (int idx : order) {
        const Branch& pb = code.branches[idx];
        if (state_pairs_.empty() || state_pairs_.back().start != pb.start_state ||
            state_pairs_.back().end != pb.end_state) {
            state_pairs_.push_back({pb.start_state, pb.end_state,
                                    static_cast<int>(branches_.size()), 0});
        }
        pair_of_primary_branch_[idx] = static_cast<int>(state_pairs_.size()) - 1;
        for (int a = 0; a < alphabet.size(); ++a) {
            ExpandedBranch eb;
            eb.start_state = pb.start_state;
            eb.end_state = pb.end_state;
            eb.primary_branch = idx;
            eb.secondary_index = a;
            eb.mean.resize(n);
            for (int d = 0; d < n; ++d)
                eb.mean[d] = scale * pb.output_signal[d] + secondary_gain_ * alphabet.points[a][d];
            branches_.push_back(std::move(eb));
            state_pairs_.back().branch_count += 1;
        }
    }

    // Detect an exact per-dimension product structure of the alphabet; when
    // present the metric sum over parallel secondary branches factorizes.
    std::vector<std::vector<double>> levels(n);
    for (int d = 0; d < n; ++d) {
        for (const auto& p : alphabet.points) {
            if (std::find(levels[d].begin(), levels[d].end(), p[d]) == levels[d].end())
                levels[d].push_back(p[d]);
        }
        std::sort(levels[d].begin(), levels[d].end());
    }
    std::size_t product = 1;
    for (int d = 0; d < n; ++d) product *= levels[d].size();
    product_form_ = (product == static_cast<std::size_t>(alphabet.size()));

    if (product_form_) {
        secondary_levels_.resize(n);
        for (int d = 0; d < n; ++d) {
            secondary_levels_[d].resize(levels[d].size());
            for (std::size_t l = 0; l < levels[d].size(); ++l)
                secondary_levels_[d][l] = secondary_gain_ * levels[d][l];
        }
        primary_levels_.assign(n, {});
        primary_level_index_.assign(code.branches.size(), std::vector<std::uint8_t>(n, 0));
        for (std::size_t b = 0; b < code.branches.size(); ++b) {
            for (int d = 0; d < n; ++d) {
                const double v = scale * code.branches[b].output_signal[d];
                auto& lv = primary_levels_[d];
                auto it = std::find(lv.begin(), lv.end(), v);
                if (it == lv.end()) {
                    if (lv.size() >= 255) {
                        product_form_ = false;
                        return;
                    }
                    lv.push_back(v);
                    it = std::prev(lv.end());
                }
                primary_level_index_[b][d] = static_cast<std::uint8_t>(it - lv.begin());
            }
        }
    }
}

void ExpandedTrellis::stage_gammas_reference(std::span<const double> y_t,
                                             std::vector<double>& gammas) const {
    const int n = dimension_;
    const double prior = 1.0 / (static_cast<double>(message_alphabet_size_) * alphabet_size_);
    const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * n);
    gammas.assign(state_pairs_.size(), 0.0);
    for (std::size_t p = 0; p < state_pairs_.size(); ++p) {
        const StatePair& pair = state_pairs_[p];
        double acc = 0.0;
        for (int i = 0; i < pair.branch_count; ++i) {
            const ExpandedBranch& eb = branches_[pair.first_branch + i];
            acc += std::exp(-0.5 * squared_distance(y_t, eb.mean));
        }
        gammas[p] = prior * norm * acc;
    }
}

void ExpandedTrellis::stage_gammas(std::span<const double> y_t, std::vector<double>& gammas) const {
    if (!product_form_) {
        stage_gammas_reference(y_t, gammas);
        return;
    }
    const int n = dimension_;
    thread_local std::vector<double> table;

    // table[d * stride + level] = mean over secondary levels of the scaled
    // 1-D normal density around each distinct primary level.
    std::size_t stride = 0;
    for (int d = 0; d < n; ++d) stride = std::max(stride, primary_levels_[d].size());
    table.assign(static_cast<std::size_t>(n) * stride, 0.0);
    for (int d = 0; d < n; ++d) {
        const auto& pl = primary_levels_[d];
        const auto& sl = secondary_levels_[d];
        const double inv_sl = 1.0 / static_cast<double>(sl.size());
        for (std::size_t i = 0; i < pl.size(); ++i) {
            double acc = 0.0;
            const double base = y_t[d] - pl[i];
            for (double s : sl) acc += phi1(base - s);
            table[d * stride + i] = acc * inv_sl;
        }
    }

    const double inv_m = 1.0 / static_cast<double>(message_alphabet_size_);
    gammas.assign(state_pairs_.size(), 0.0);
    for (std::size_t b = 0; b < primary_level_index_.size(); ++b) {
        const auto& idx = primary_level_index_[b];
        double w = 1.0;
        for (int d = 0; d < n; ++d) w *= table[d * stride + idx[d]];
        gammas[pair_of_primary_branch_[b]] += w * inv_m;
    }
}

double branch_metric(const ExpandedTrellis& trellis, const ExpandedBranch& branch,
                     std::span<const double> y_t) {
    if (static_cast<int>(y_t.size()) != trellis.signal_dimension())
        throw std::invalid_argument("observation has wrong dimension");
    const double prior =
        1.0 / (static_cast<double>(trellis.message_alphabet_size()) * trellis.alphabet_size());
    const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * trellis.signal_dimension());
    return prior * norm * std::exp(-0.5 * squared_distance(y_t, branch.mean));
}

ForwardState make_forward_state(const ExpandedTrellis& trellis, int initial_state) {
    if (initial_state < 0 || initial_state >= trellis.num_states())
        throw std::invalid_argument("initial state out of range");
    ForwardState state;
    state.alpha.assign(trellis.num_states(), 0.0);
    state.alpha[initial_state] = 1.0;
    return state;
}

namespace {

// Shared recursion step; alpha is replaced by the next posterior.
double step_alpha(const ExpandedTrellis& trellis, std::span<const double> y_t,
                  std::vector<double>& alpha, std::vector<double>& next_alpha,
                  std::vector<double>& gammas) {
    trellis.stage_gammas(y_t, gammas);
    next_alpha.assign(alpha.size(), 0.0);
    double density = 0.0;
    const auto& pairs = trellis.state_pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double w = alpha[pairs[p].start] * gammas[p];
        next_alpha[pairs[p].end] += w;
        density += w;
    }
    if (!(density > 0.0) || !std::isfinite(density))
        throw degeneracy_error("conditional output density underflowed to zero");
    const double inv = 1.0 / density;
    for (double& a : next_alpha) a *= inv;
    alpha.swap(next_alpha);
    return density;
}

}  // namespace

double forward_step(ForwardState& state, const ExpandedTrellis& trellis,
                    std::span<const double> y_t) {
    if (static_cast<int>(y_t.size()) != trellis.signal_dimension())
        throw std::invalid_argument("observation has wrong dimension");
    thread_local std::vector<double> next_alpha;
    thread_local std::vector<double> gammas;
    const double density = step_alpha(trellis, y_t, state.alpha, next_alpha, gammas);
    state.log2_accumulator -= std::log2(density);
    state.stages += 1;
    return density;
}

EntropyEstimate estimate_output_entropy_rate(const ExpandedTrellis& trellis, const TrellisCode& code,
                                             const SecondaryAlphabet& alphabet, long long n_stages,
                                             NoiseSource noise, int initial_state) {
    if (n_stages < 1) throw std::invalid_argument("n_stages must be >= 1");
    if (alphabet.dimension() != code.signal_dimension)
        throw std::invalid_argument("alphabet dimension does not match code");
    if (initial_state < 0 || initial_state >= code.num_states)
        throw std::invalid_argument("initial state out of range");

    const int n = code.signal_dimension;
    const int num_points = alphabet.size();
    const double scale = trellis.primary_gain() * std::sqrt(trellis.primary_power());
    const double sec_gain = trellis.secondary_gain();

    // Per-state input lookup for the encoder walk.
    std::vector<const Branch*> lookup(static_cast<std::size_t>(code.num_states) *
                                      code.message_alphabet_size);
    for (const Branch& b : code.branches)
        lookup[static_cast<std::size_t>(b.start_state) * code.message_alphabet_size +
               b.input_symbol] = &b;

    std::vector<double> alpha(code.num_states, 0.0);
    alpha[initial_state] = 1.0;
    std::vector<double> next_alpha;
    std::vector<double> gammas;
    std::vector<double> y(n);

    const int num_batches = static_cast<int>(std::min<long long>(kEntropyBatches, n_stages));
    std::vector<double> batch_neg_log2(num_batches, 0.0);
    std::vector<long long> batch_stages(num_batches, 0);

    int state = initial_state;
    for (long long t = 0; t < n_stages; ++t) {
        const int u = noise.uniform_int(code.message_alphabet_size);
        const Branch* b = lookup[static_cast<std::size_t>(state) * code.message_alphabet_size + u];
        const int point = num_points == 1 ? 0 : noise.uniform_int(num_points);
        for (int d = 0; d < n; ++d)
            y[d] = scale * b->output_signal[d] + sec_gain * alphabet.points[point][d] +
                   noise.gaussian();
        state = b->end_state;

        const double density = step_alpha(trellis, y, alpha, next_alpha, gammas);
        const int batch = static_cast<int>(t * num_batches / n_stages);
        batch_neg_log2[batch] -= std::log2(density);
        batch_stages[batch] += 1;
    }

    double total = 0.0;
    for (double v : batch_neg_log2) total += v;

    EntropyEstimate est;
    est.bits_per_dimension = total / (static_cast<double>(n) * n_stages);
    est.num_stages = n_stages;
    est.num_batches = num_batches;
    if (num_batches > 1) {
        std::vector<double> means(num_batches);
        double mean_of_means = 0.0;
        for (int i = 0; i < num_batches; ++i) {
            means[i] = batch_neg_log2[i] / (static_cast<double>(n) * batch_stages[i]);
            mean_of_means += means[i];
        }
        mean_of_means /= num_batches;
        double ss = 0.0;
        for (double m : means) ss += (m - mean_of_means) * (m - mean_of_means);
        est.batch_std_error = std::sqrt(ss / (num_batches - 1)) / std::sqrt(double(num_batches));
    }
    return est;
}

EntropyEstimate estimate_mutual_information_rate(const TrellisCode& code,
                                                 const SecondaryAlphabet& alphabet,
                                                 const GifcParams& params, Link link,
                                                 long long n_stages, NoiseSource noise,
                                                 int initial_state) {
    const double primary_gain = link == Link::y2 ? params.a12 : 1.0;
    const double secondary_gain = link == Link::y2 ? 1.0 : params.a21;

    const ExpandedTrellis output_trellis(code, alphabet, primary_gain, secondary_gain, params.p1);
    const SecondaryAlphabet zero = make_zero_alphabet(code.signal_dimension);
    const ExpandedTrellis noise_trellis(code, zero, primary_gain, secondary_gain, params.p1);

    const EntropyEstimate h_output = estimate_output_entropy_rate(
        output_trellis, code, alphabet, n_stages, noise.spawn(0), initial_state);
    const EntropyEstimate h_noise = estimate_output_entropy_rate(
        noise_trellis, code, zero, n_stages, noise.spawn(1), initial_state);

    EntropyEstimate est;
    est.bits_per_dimension = h_output.bits_per_dimension - h_noise.bits_per_dimension;
    est.num_stages = n_stages;
    est.num_batches = h_output.num_batches;
    est.batch_std_error = std::sqrt(h_output.batch_std_error * h_output.batch_std_error +
                                    h_noise.batch_std_error * h_noise.batch_std_error);
    return est;
}

double fsc_sequence_log2_likelihood(const TrellisCode& code, std::span<const double> y,
                                    std::span<const double> x2_sequence, double primary_gain,
                                    double secondary_gain, double p1, int initial_state) {
    const int n = code.signal_dimension;
    if (y.size() != x2_sequence.size()) throw std::invalid_argument("y and x2 length mismatch");
    if (y.size() % static_cast<std::size_t>(n) != 0)
        throw std::invalid_argument("sequence length is not a multiple of the signal dimension");
    if (initial_state < 0 || initial_state >= code.num_states)
        throw std::invalid_argument("initial state out of range");

    const long long stages = static_cast<long long>(y.size()) / n;
    const double scale = primary_gain * std::sqrt(p1);
    const double inv_m = 1.0 / code.message_alphabet_size;

    std::vector<double> like(code.num_states, 0.0);
    std::vector<double> next(code.num_states, 0.0);
    like[initial_state] = 1.0;

    double log2_total = 0.0;
    for (long long t = 0; t < stages; ++t) {
        const double* yt = y.data() + t * n;
        const double* x2t = x2_sequence.data() + t * n;
        std::fill(next.begin(), next.end(), 0.0);
        for (const Branch& b : code.branches) {
            if (like[b.start_state] == 0.0) continue;
            double dist = 0.0;
            for (int d = 0; d < n; ++d) {
                const double diff = yt[d] - scale * b.output_signal[d] - secondary_gain * x2t[d];
                dist += diff * diff;
            }
            next[b.end_state] += like[b.start_state] * inv_m * std::exp(-0.5 * dist);
        }
        double mass = 0.0;
        for (double v : next) mass += v;
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw degeneracy_error("sequence likelihood underflowed to zero");
        const double inv = 1.0 / mass;
        for (double& v : next) v *= inv;
        like.swap(next);
        log2_total += std::log2(mass) - 0.5 * n * kLog2_2Pi;
    }
    return log2_total;
}

}  // namespace gifc
