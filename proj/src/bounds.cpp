#include "gifc/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <stdexcept>
#include <thread>

namespace gifc {

const std::vector<double>& default_p2_grid() {
    static const std::vector<double> grid = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0};
    return grid;
}

BoundsPoint compute_bounds_point(const TrellisCode& code, const GifcParams& params,
                                 long long n_stages, const NoiseSource& noise) {
    const SecondaryAlphabet alphabet = make_bpsk_alphabet(code.signal_dimension, params.p2);

    const EntropyEstimate i_y2 = estimate_mutual_information_rate(code, alphabet, params, Link::y2,
                                                                  n_stages, noise.spawn(0));
    const EntropyEstimate i_y1 = estimate_mutual_information_rate(code, alphabet, params, Link::y1,
                                                                  n_stages, noise.spawn(1));

    BoundsPoint point;
    point.p2 = params.p2;
    point.i_x2_y1 = i_y1.bits_per_dimension;
    point.i_x2_y2 = i_y2.bits_per_dimension;
    point.se_i_y1 = i_y1.batch_std_error;
    point.se_i_y2 = i_y2.batch_std_error;
    point.c_u_iud = point.i_x2_y2;
    point.se_u = point.se_i_y2;
    if (point.i_x2_y1 <= point.i_x2_y2) {
        point.c_l_iud = point.i_x2_y1;
        point.se_l = point.se_i_y1;
    } else {
        point.c_l_iud = point.i_x2_y2;
        point.se_l = point.se_i_y2;
    }
    point.n_stages = n_stages;
    return point;
}

std::vector<BoundsPoint> sweep_p2(const TrellisCode& code, double a12, double a21, double p1,
                                  const std::vector<double>& p2_grid, long long n_stages,
                                  std::uint64_t seed, int max_workers) {
    if (p2_grid.empty()) throw std::invalid_argument("p2 grid must be nonempty");
    for (double p2 : p2_grid) {
        if (p2 < 0.0) throw std::invalid_argument("p2 grid values must be >= 0");
    }

    int workers = max_workers > 0 ? max_workers
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<int>(workers, static_cast<int>(p2_grid.size()));

    std::vector<BoundsPoint> points(p2_grid.size());
    auto run_point = [&](std::size_t i) {
        GifcParams params{a12, a21, p1, p2_grid[i]};
        points[i] = compute_bounds_point(code, params, n_stages,
                                         NoiseSource(seed, static_cast<std::uint64_t>(i)));
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < p2_grid.size(); ++i) run_point(i);
        return points;
    }

    std::atomic<std::size_t> cursor{0};
    std::vector<std::future<void>> jobs;
    jobs.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&]() {
            for (std::size_t i = cursor.fetch_add(1); i < p2_grid.size(); i = cursor.fetch_add(1))
                run_point(i);
        }));
    }
    for (auto& job : jobs) job.get();
    return points;
}

std::vector<CodeSweepRow> compare_codes(const std::vector<TrellisCode>& codes,
                                        const GifcParams& params_template,
                                        const std::vector<double>& p2_grid, long long n_stages,
                                        std::uint64_t seed, int max_workers) {
    std::vector<CodeSweepRow> rows;
    for (std::size_t k = 0; k < codes.size(); ++k) {
        std::vector<BoundsPoint> points =
            sweep_p2(codes[k], params_template.a12, params_template.a21, params_template.p1,
                     p2_grid, n_stages, seed + k, max_workers);
        for (BoundsPoint& p : points) rows.push_back({codes[k].id, std::move(p)});
    }
    return rows;
}

}  // namespace gifc
