#include "gifc/trellis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace gifc {

double TrellisCode::rate_bits_per_dim() const {
    return std::log2(static_cast<double>(message_alphabet_size)) / signal_dimension;
}

const Branch* TrellisCode::find_branch(int state, int input) const {
    for (const Branch& b : branches) {
        if (b.start_state == state && b.input_symbol == input) return &b;
    }
    return nullptr;
}

namespace {

std::vector<double> bpsk_signal(const std::vector<int>& bits) {
    std::vector<double> s(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? 1.0 : -1.0;
    return s;
}

// Reduced row echelon form over GF(2). Returns the pivot column of each row.
std::vector<int> rref_gf2(std::vector<std::vector<int>>& m) {
    const size_t rows = m.size();
    const size_t cols = m.empty() ? 0 : m[0].size();
    std::vector<int> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        for (size_t i = 0; i < rows; ++i) {
            if (i != r && m[i][c]) {
                for (size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
            }
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

}  // namespace

TrellisCode make_uncoded_bpsk() {
    TrellisCode code;
    code.id = "uncoded-bpsk";
    code.num_states = 1;
    code.message_alphabet_size = 2;
    code.signal_dimension = 1;
    code.branches = {{0, 0, {-1.0}, 0}, {0, 1, {+1.0}, 0}};
    return code;
}

TrellisCode make_repetition_bpsk() {
    TrellisCode code;
    code.id = "rep-2-1-2";
    code.num_states = 1;
    code.message_alphabet_size = 2;
    code.signal_dimension = 2;
    code.branches = {{0, 0, {-1.0, -1.0}, 0}, {0, 1, {+1.0, +1.0}, 0}};
    return code;
}

TrellisCode make_extended_hamming_bpsk() {
    const std::vector<std::vector<int>> parity_check = {
        {1, 0, 1, 1, 1, 0, 0, 0},
        {0, 1, 0, 1, 1, 1, 0, 0},
        {0, 0, 1, 0, 1, 1, 1, 0},
        {1, 1, 1, 1, 1, 1, 1, 1},
    };
    const int n = 8;
    const int k = 4;

    std::vector<std::vector<int>> h = parity_check;
    std::vector<int> pivots = rref_gf2(h);
    if (static_cast<int>(pivots.size()) != n - k)
        throw std::logic_error("parity-check matrix is rank deficient");

    // Non-pivot columns carry message bits, MSB first in ascending order.
    std::vector<int> info_cols;
    for (int c = 0; c < n; ++c) {
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) info_cols.push_back(c);
    }

    TrellisCode code;
    code.id = "ehc-8-4-4";
    code.num_states = 1;
    code.message_alphabet_size = 16;
    code.signal_dimension = n;
    for (int u = 0; u < 16; ++u) {
        std::vector<int> cw(n, 0);
        for (int i = 0; i < k; ++i) {
            int bit = (u >> (k - 1 - i)) & 1;  // MSB-first
            cw[info_cols[i]] = bit;
        }
        // Pivot columns solve H c = 0: each RREF row has exactly one pivot.
        for (size_t r = 0; r < pivots.size(); ++r) {
            int acc = 0;
            for (int i = 0; i < k; ++i) acc ^= h[r][info_cols[i]] & cw[info_cols[i]];
            cw[pivots[r]] = acc;
        }
        code.branches.push_back({0, u, bpsk_signal(cw), 0});
    }
    return code;
}

TrellisCode make_conv_code_bpsk(const std::vector<unsigned>& generator_taps, int memory) {
    if (generator_taps.empty()) throw std::invalid_argument("conv code needs at least one generator polynomial");
    if (memory < 1) throw std::invalid_argument("conv code memory must be >= 1");
    for (unsigned g : generator_taps) {
        if (g >= (1u << (memory + 1)))
            throw std::invalid_argument("generator polynomial degree exceeds memory");
    }

    const int num_states = 1 << memory;
    const unsigned state_mask = num_states - 1;

    TrellisCode code;
    code.num_states = num_states;
    code.message_alphabet_size = 2;
    code.signal_dimension = static_cast<int>(generator_taps.size());
    code.id = "cc-" + std::to_string(code.signal_dimension) + "-1-" + std::to_string(memory);
    for (int s = 0; s < num_states; ++s) {
        for (int u = 0; u < 2; ++u) {
            std::vector<int> out_bits;
            out_bits.reserve(generator_taps.size());
            for (unsigned g : generator_taps) {
                // Register bit i-1 of the state holds the input from i stages ago.
                unsigned acc = (g & 1u) & static_cast<unsigned>(u);
                acc ^= static_cast<unsigned>(__builtin_popcount((g >> 1) & static_cast<unsigned>(s)) & 1);
                out_bits.push_back(static_cast<int>(acc));
            }
            int next = static_cast<int>(((static_cast<unsigned>(s) << 1) | static_cast<unsigned>(u)) & state_mask);
            code.branches.push_back({s, u, bpsk_signal(out_bits), next});
        }
    }
    return code;
}

const std::vector<std::string>& builtin_code_ids() {
    static const std::vector<std::string> ids = {"uncoded-bpsk", "rep-2-1-2", "ehc-8-4-4",
                                                 "cc-2-1-2", "cc-3-1-2"};
    return ids;
}

TrellisCode make_code_by_id(const std::string& code_id) {
    if (code_id == "uncoded-bpsk") return make_uncoded_bpsk();
    if (code_id == "rep-2-1-2") return make_repetition_bpsk();
    if (code_id == "ehc-8-4-4") return make_extended_hamming_bpsk();
    if (code_id == "cc-2-1-2") return make_conv_code_bpsk({0b101, 0b111}, 2);
    if (code_id == "cc-3-1-2") return make_conv_code_bpsk({0b011, 0b101, 0b111}, 2);
    throw std::invalid_argument("unknown code id: " + code_id);
}

ValidationReport validate(const TrellisCode& code) {
    ValidationReport report;
    auto fail = [&report](std::string msg) {
        report.passed = false;
        report.failures.push_back(std::move(msg));
    };

    if (code.num_states < 1) fail("num_states must be >= 1");
    if (code.message_alphabet_size < 2) fail("message alphabet size must be >= 2");
    if (code.signal_dimension < 1) fail("signal dimension must be >= 1");

    const int M = code.message_alphabet_size;
    std::vector<int> branches_per_state(std::max(code.num_states, 1), 0);
    std::vector<double> energy_per_state(std::max(code.num_states, 1), 0.0);
    std::vector<std::pair<int, int>> seen;

    for (size_t i = 0; i < code.branches.size(); ++i) {
        const Branch& b = code.branches[i];
        if (b.start_state < 0 || b.start_state >= code.num_states ||
            b.end_state < 0 || b.end_state >= code.num_states) {
            fail("branch " + std::to_string(i) + " has a state index out of range");
            continue;
        }
        if (b.input_symbol < 0 || b.input_symbol >= M)
            fail("branch " + std::to_string(i) + " has an input symbol out of range");
        if (static_cast<int>(b.output_signal.size()) != code.signal_dimension)
            fail("branch " + std::to_string(i) + " has wrong signal dimension");

        auto key = std::make_pair(b.start_state, b.input_symbol);
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            fail("duplicate (state,input) pair (" + std::to_string(key.first) + "," +
                 std::to_string(key.second) + ")");
        seen.push_back(key);

        branches_per_state[b.start_state] += 1;
        double e = 0.0;
        for (double v : b.output_signal) e += v * v;
        energy_per_state[b.start_state] += e;
    }

    for (int s = 0; s < code.num_states; ++s) {
        if (branches_per_state[s] != M)
            fail("state " + std::to_string(s) + " emits " + std::to_string(branches_per_state[s]) +
                 " branches, expected " + std::to_string(M));
        double avg = energy_per_state[s] / M;
        if (std::abs(avg - code.signal_dimension) > 1e-12)
            fail("state " + std::to_string(s) + " violates energy normalization: avg " +
                 std::to_string(avg));
    }
    return report;
}

std::pair<SignalSequence, int> encode(const TrellisCode& code, int initial_state,
                                      const std::vector<int>& messages, double power) {
    if (initial_state < 0 || initial_state >= code.num_states)
        throw std::invalid_argument("initial state out of range");
    if (power < 0.0) throw std::invalid_argument("power must be >= 0");

    const double scale = std::sqrt(power);
    const int n = code.signal_dimension;

    SignalSequence out;
    out.power = power;
    out.values.reserve(messages.size() * static_cast<size_t>(n));

    int state = initial_state;
    for (int u : messages) {
        if (u < 0 || u >= code.message_alphabet_size)
            throw std::invalid_argument("message symbol out of range: " + std::to_string(u));
        const Branch* b = code.find_branch(state, u);
        if (b == nullptr)
            throw std::invalid_argument("no branch for (state,input) = (" + std::to_string(state) +
                                        "," + std::to_string(u) + ")");
        for (double c : b->output_signal) out.values.push_back(scale * c);
        state = b->end_state;
    }
    return {std::move(out), state};
}

std::vector<std::vector<double>> state_transition_matrix(const TrellisCode& code) {
    std::vector<std::vector<double>> p(code.num_states, std::vector<double>(code.num_states, 0.0));
    for (const Branch& b : code.branches) p[b.start_state][b.end_state] += 1.0;
    for (auto& row : p) {
        for (double& v : row) v /= code.message_alphabet_size;
    }
    return p;
}

}  // namespace gifc
