#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gifc {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes of the experiment runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDegeneracy = 3;

// Parsed experiment configuration. Squared interference coefficients match
// the reporting convention; the runner uses their positive square roots.
struct RunConfig {
    std::string command;  // ber | entropy | bounds | sweep | two-stage | validate
    std::string code_id = "uncoded-bpsk";
    double a12_sq = 0.0;
    double a21_sq = 0.0;
    double p1 = 6.0;
    double p2 = 1.0;
    std::vector<double> p2_grid;  // empty -> default grid (sweep only)
    long long n_stages = 1'000'000;
    long long trials = 1'000'000;
    std::string link = "y2";        // entropy only
    std::string alphabet = "bpsk";  // entropy only: bpsk | zero
    int m2 = 16;                    // two-stage codebook size
    long long block_stages = 256;   // two-stage block length in stages
    std::uint64_t seed = 1;
    std::string out_path;  // empty -> stdout
    int max_workers = 0;   // 0 -> hardware concurrency
};

// Executes the experiment, writes the artifact (JSON or CSV with a metadata
// header) to out_path or stdout, and returns the exit code. Diagnostics go
// to stderr.
int run(const RunConfig& config);

// Structural and stationarity checks of every built-in code; rendered by the
// `validate` command.
struct CodeCheck {
    std::string code_id;
    int num_states = 0;
    int message_alphabet_size = 0;
    int signal_dimension = 0;
    double rate_bits_per_dim = 0.0;
    bool structure_ok = false;
    bool uniform_stationary = false;  // power iteration reaches uniform within 1e-9
    std::vector<std::string> failures;
};
std::vector<CodeCheck> validate_all();

}  // namespace gifc
