#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gifc/channel.hpp"
#include "gifc/fsc_entropy.hpp"
#include "gifc/trellis.hpp"

namespace gifc {

// One sweep record: mutual-information rates of both secondary links under
// i.u.d. BPSK inputs at power p2, and the derived bounds
//   c_u_iud = i_x2_y2
//   c_l_iud = min(i_x2_y1, i_x2_y2)
struct BoundsPoint {
    double p2 = 0.0;
    double c_u_iud = 0.0;
    double c_l_iud = 0.0;
    double i_x2_y1 = 0.0;
    double i_x2_y2 = 0.0;
    double se_u = 0.0;     // standard error of c_u_iud
    double se_l = 0.0;     // standard error of c_l_iud
    double se_i_y1 = 0.0;
    double se_i_y2 = 0.0;
    long long n_stages = 0;
};

// P2 values used by the CLI sweep when no grid is given.
const std::vector<double>& default_p2_grid();

// Estimates both link rates with the per-dimension BPSK secondary alphabet
// at params.p2 and assembles the record. Derived noise streams are spawned
// from `noise`.
BoundsPoint compute_bounds_point(const TrellisCode& code, const GifcParams& params,
                                 long long n_stages, const NoiseSource& noise);

// One BoundsPoint per grid value with an independent noise stream per grid
// index: point i uses NoiseSource(seed, i). Points are independent jobs and
// run on up to `max_workers` threads; the result order follows the grid.
std::vector<BoundsPoint> sweep_p2(const TrellisCode& code, double a12, double a21, double p1,
                                  const std::vector<double>& p2_grid, long long n_stages,
                                  std::uint64_t seed, int max_workers = 0);

struct CodeSweepRow {
    std::string code_id;
    BoundsPoint point;
};

// Merged sweep table over several codes with the same channel coefficients;
// code k is swept with base seed (seed + k).
std::vector<CodeSweepRow> compare_codes(const std::vector<TrellisCode>& codes,
                                        const GifcParams& params_template,
                                        const std::vector<double>& p2_grid, long long n_stages,
                                        std::uint64_t seed, int max_workers = 0);

}  // namespace gifc
