#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gifc {

// One section branch of a time-invariant trellis code: entering state
// `start_state` with message symbol `input_symbol` emits the n-dimensional
// unit-power signal `output_signal` and moves to `end_state`.
struct Branch {
    int start_state = 0;
    int input_symbol = 0;
    std::vector<double> output_signal;
    int end_state = 0;
};

// A generalized trellis code: |S| states, M branches leaving each state,
// n-dimensional real branch signals. Covers plain modulations, block codes
// (single state, M parallel branches) and convolutional codes alike.
//
// The struct is a plain value; structural invariants are checked by
// validate(), not by the constructor, so that tests can build broken codes
// on purpose.
struct TrellisCode {
    std::string id;
    int num_states = 1;
    int message_alphabet_size = 2;  // M
    int signal_dimension = 1;       // n
    std::vector<Branch> branches;   // sorted by (start_state, input_symbol)

    // R1 = log2(M) / n in bits per real dimension.
    double rate_bits_per_dim() const;

    // The unique branch with the given (state, input), or nullptr.
    const Branch* find_branch(int state, int input) const;
};

struct ValidationReport {
    bool passed = true;
    std::vector<std::string> failures;
};

// Scaled encoder output: per-stage signal is sqrt(power) * c_t, so the
// value vector has length n * N.
struct SignalSequence {
    std::vector<double> values;
    double power = 1.0;
};

// Built-in example codes -----------------------------------------------

// BPSK as a one-state trellis: message 0 -> -1, message 1 -> +1.
TrellisCode make_uncoded_bpsk();

// [2,1,2] repetition code with BPSK signaling: 0 -> (-1,-1), 1 -> (+1,+1).
TrellisCode make_repetition_bpsk();

// [8,4,4] extended Hamming code with BPSK signaling, one state and sixteen
// parallel branches. The parity-check matrix is
//
//     1 0 1 1 1 0 0 0
//     0 1 0 1 1 1 0 0
//     0 0 1 0 1 1 1 0
//     1 1 1 1 1 1 1 1
//
// The message-to-codeword map is derived from the reduced row echelon form
// of this matrix: the four non-pivot columns carry the message bits
// (most-significant bit first, in ascending column order) and the pivot
// columns carry parity. Bit b maps to the signal component 2b - 1.
TrellisCode make_extended_hamming_bpsk();

// Feedforward binary convolutional code with BPSK signaling. Each generator
// polynomial is a bit mask with bit i holding the coefficient of D^i, e.g.
// 1 + D^2 == 0b101. States are the shift-register contents read as a binary
// integer with the newest message bit in the least-significant position.
TrellisCode make_conv_code_bpsk(const std::vector<unsigned>& generator_taps, int memory);

// Registry used by the CLI: "uncoded-bpsk", "rep-2-1-2", "ehc-8-4-4",
// "cc-2-1-2", "cc-3-1-2".
const std::vector<std::string>& builtin_code_ids();
TrellisCode make_code_by_id(const std::string& code_id);

// Operations ------------------------------------------------------------

// Checks every structural invariant: M branches per state, unique
// (state, input) pairs, state indices in range, signal dimensions equal to
// n, and per-state energy normalization (1/M) * sum ||c||^2 == n within
// 1e-12. Failures name the offending state or branch.
ValidationReport validate(const TrellisCode& code);

// Runs the encoder from `initial_state` over the message sequence and
// scales each stage signal by sqrt(power). Returns the signal sequence and
// the final trellis state.
std::pair<SignalSequence, int> encode(const TrellisCode& code, int initial_state,
                                      const std::vector<int>& messages, double power);

// Row-stochastic |S| x |S| matrix with entry (s, s') equal to the number of
// branches from s to s' divided by M. This is the free-running state chain
// of the code under uniform message input.
std::vector<std::vector<double>> state_transition_matrix(const TrellisCode& code);

}  // namespace gifc
