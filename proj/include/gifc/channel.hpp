#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace gifc {

// Interference coefficients and transmit powers of the standardized
// two-user channel
//
//     y1 = x1 + a21 * x2 + z1
//     y2 = a12 * x1 + x2 + z2
//
// with unit-variance white Gaussian noise per dimension.
struct GifcParams {
    double a12 = 0.0;
    double a21 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

// Deterministic Gaussian noise generator addressed by (seed, stream).
// Identical (seed, stream) pairs reproduce identical sample sequences on
// every platform: the engine is a seed_seq-initialized mt19937_64 and the
// normal variates come from an explicit Box-Muller transform rather than
// std::normal_distribution, whose output is implementation-defined.
class NoiseSource {
public:
    NoiseSource(std::uint64_t seed, std::uint64_t stream);

    // Test hook: gaussian() returns exactly zero; integer draws still work.
    static NoiseSource silent();

    double gaussian();
    std::vector<double> gaussian_vector(std::size_t len);

    std::uint64_t next_u64();
    // Uniform on {0, ..., m-1}, unbiased by rejection.
    int uniform_int(int m);

    // A derived independent stream; deterministic in (seed, stream, k).
    NoiseSource spawn(std::uint64_t k) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    bool is_silent() const { return silent_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::mt19937_64 engine_;
    bool silent_ = false;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// y[i] = x[i] + z[i] with z i.i.d. standard normal.
std::vector<double> awgn_output(const std::vector<double>& x, NoiseSource& noise);

// Componentwise standardized interference channel. x1 and x2 must have equal
// length; noise1 and noise2 should be distinct streams.
std::pair<std::vector<double>, std::vector<double>> gifc_output(const std::vector<double>& x1,
                                                                const std::vector<double>& x2,
                                                                const GifcParams& params,
                                                                NoiseSource& noise1,
                                                                NoiseSource& noise2);

}  // namespace gifc
