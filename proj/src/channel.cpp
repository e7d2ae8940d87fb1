#include "gifc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace gifc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

NoiseSource NoiseSource::silent() {
    NoiseSource src(0, 0);
    src.silent_ = true;
    return src;
}

std::uint64_t NoiseSource::next_u64() { return engine_(); }

int NoiseSource::uniform_int(int m) {
    if (m <= 0) throw std::invalid_argument("uniform_int needs m >= 1");
    const std::uint64_t range = static_cast<std::uint64_t>(m);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<int>(x % range);
}

double NoiseSource::gaussian() {
    if (silent_) return 0.0;
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 in (0,1], u2 in [0,1).
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

std::vector<double> NoiseSource::gaussian_vector(std::size_t len) {
    std::vector<double> z(len);
    for (double& v : z) v = gaussian();
    return z;
}

NoiseSource NoiseSource::spawn(std::uint64_t k) const {
    NoiseSource src(seed_, splitmix64(stream_ * 0x9E3779B97F4A7C15ULL ^ (k + 1)));
    src.silent_ = silent_;
    return src;
}

std::vector<double> awgn_output(const std::vector<double>& x, NoiseSource& noise) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + noise.gaussian();
    return y;
}

std::pair<std::vector<double>, std::vector<double>> gifc_output(const std::vector<double>& x1,
                                                                const std::vector<double>& x2,
                                                                const GifcParams& params,
                                                                NoiseSource& noise1,
                                                                NoiseSource& noise2) {
    if (x1.size() != x2.size()) throw std::invalid_argument("gifc_output: x1 and x2 length mismatch");
    std::vector<double> y1(x1.size());
    std::vector<double> y2(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) {
        y1[i] = x1[i] + params.a21 * x2[i] + noise1.gaussian();
        y2[i] = params.a12 * x1[i] + x2[i] + noise2.gaussian();
    }
    return {std::move(y1), std::move(y2)};
}

}  // namespace gifc
