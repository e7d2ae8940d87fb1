#include "gifc/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gifc/bounds.hpp"
#include "gifc/channel.hpp"
#include "gifc/fsc_entropy.hpp"
#include "gifc/primary_decode.hpp"
#include "gifc/trellis.hpp"

namespace gifc {

namespace {

using ordered_json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_artifact(const RunConfig& config, const std::string& content) {
    if (config.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output path: " + config.out_path);
    out << content;
    if (!out) throw ConfigError("failed writing output path: " + config.out_path);
}

ordered_json meta_block(const RunConfig& config) {
    ordered_json meta;
    meta["command"] = config.command;
    meta["version"] = kToolVersion;
    meta["code"] = config.code_id;
    meta["a12_sq"] = config.a12_sq;
    meta["a21_sq"] = config.a21_sq;
    meta["p1"] = config.p1;
    meta["p2"] = config.p2;
    meta["n_stages"] = config.n_stages;
    meta["trials"] = config.trials;
    meta["seed"] = config.seed;
    return meta;
}

void check_common(const RunConfig& config) {
    if (config.a12_sq < 0.0 || config.a21_sq < 0.0)
        throw ConfigError("squared interference coefficients must be >= 0");
    if (config.p1 < 0.0 || config.p2 < 0.0) throw ConfigError("powers must be >= 0");
    if (config.n_stages < 1) throw ConfigError("n_stages must be >= 1");
    if (config.trials < 1) throw ConfigError("trials must be >= 1");
}

GifcParams params_of(const RunConfig& config) {
    return GifcParams{std::sqrt(config.a12_sq), std::sqrt(config.a21_sq), config.p1, config.p2};
}

std::string run_ber(const RunConfig& config) {
    const TrellisCode code = make_code_by_id(config.code_id);
    const DecoderKind kind = code.num_states == 1 ? DecoderKind::ml_block : DecoderKind::viterbi;
    const BerCount count =
        ber_experiment(code, kind, config.p1, config.trials, NoiseSource(config.seed, 0));

    const double ber = static_cast<double>(count.symbol_errors) / count.trials;
    const double se = std::sqrt(std::max(ber * (1.0 - ber), 0.0) / count.trials);
    const int bits = static_cast<int>(std::lround(std::log2(code.message_alphabet_size)));
    const double ber_bit = static_cast<double>(count.bit_errors) / (count.trials * bits);

    ordered_json j;
    j["meta"] = meta_block(config);
    j["code"] = code.id;
    j["p1"] = config.p1;
    j["n"] = code.signal_dimension;
    j["errors"] = count.symbol_errors;
    j["trials"] = count.trials;
    j["ber"] = ber;
    j["se"] = se;
    j["bit_errors"] = count.bit_errors;
    j["ber_per_bit"] = ber_bit;
    return j.dump(2) + "\n";
}

std::string run_entropy(const RunConfig& config) {
    const TrellisCode code = make_code_by_id(config.code_id);
    const GifcParams params = params_of(config);
    if (config.link != "y1" && config.link != "y2") throw ConfigError("link must be y1 or y2");
    if (config.alphabet != "bpsk" && config.alphabet != "zero")
        throw ConfigError("alphabet must be bpsk or zero");

    const double primary_gain = config.link == "y2" ? params.a12 : 1.0;
    const double secondary_gain = config.link == "y2" ? 1.0 : params.a21;
    const SecondaryAlphabet alphabet = config.alphabet == "bpsk"
                                           ? make_bpsk_alphabet(code.signal_dimension, config.p2)
                                           : make_zero_alphabet(code.signal_dimension);

    const ExpandedTrellis trellis(code, alphabet, primary_gain, secondary_gain, params.p1);
    const EntropyEstimate est = estimate_output_entropy_rate(trellis, code, alphabet,
                                                             config.n_stages,
                                                             NoiseSource(config.seed, 0));

    ordered_json j;
    j["meta"] = meta_block(config);
    j["code"] = code.id;
    j["alphabet"] = config.alphabet;
    j["link"] = config.link;
    j["gains"] = {primary_gain, secondary_gain};
    j["p1"] = config.p1;
    j["p2"] = config.p2;
    j["n_stages"] = est.num_stages;
    j["seed"] = config.seed;
    j["bits_per_dim"] = est.bits_per_dimension;
    j["std_error"] = est.batch_std_error;
    return j.dump(2) + "\n";
}

std::string run_bounds(const RunConfig& config) {
    const TrellisCode code = make_code_by_id(config.code_id);
    const BoundsPoint point = compute_bounds_point(code, params_of(config), config.n_stages,
                                                   NoiseSource(config.seed, 0));
    ordered_json j;
    j["meta"] = meta_block(config);
    j["code"] = code.id;
    j["p2"] = point.p2;
    j["c_u_iud"] = point.c_u_iud;
    j["c_l_iud"] = point.c_l_iud;
    j["i_x2_y1"] = point.i_x2_y1;
    j["i_x2_y2"] = point.i_x2_y2;
    j["se_u"] = point.se_u;
    j["se_l"] = point.se_l;
    j["n_stages"] = point.n_stages;
    j["seed"] = config.seed;
    return j.dump(2) + "\n";
}

std::string run_sweep(const RunConfig& config) {
    const TrellisCode code = make_code_by_id(config.code_id);
    const GifcParams params = params_of(config);
    const std::vector<double>& grid = config.p2_grid.empty() ? default_p2_grid() : config.p2_grid;
    const std::vector<BoundsPoint> points = sweep_p2(code, params.a12, params.a21, params.p1, grid,
                                                     config.n_stages, config.seed,
                                                     config.max_workers);

    std::ostringstream out;
    out << "# command: sweep\n";
    out << "# version: " << kToolVersion << "\n";
    out << "# code: " << code.id << "\n";
    out << "# a12_sq: " << fmt(config.a12_sq) << " a21_sq: " << fmt(config.a21_sq)
        << " p1: " << fmt(config.p1) << "\n";
    out << "# n_stages: " << config.n_stages << " seed: " << config.seed << "\n";
    out << "code,a12_sq,a21_sq,p1,p2,c_u_iud,c_l_iud,i_x2_y1,i_x2_y2,se_u,se_l,n_stages,seed\n";
    for (const BoundsPoint& p : points) {
        out << code.id << ',' << fmt(config.a12_sq) << ',' << fmt(config.a21_sq) << ','
            << fmt(config.p1) << ',' << fmt(p.p2) << ',' << fmt(p.c_u_iud) << ',' << fmt(p.c_l_iud)
            << ',' << fmt(p.i_x2_y1) << ',' << fmt(p.i_x2_y2) << ',' << fmt(p.se_u) << ','
            << fmt(p.se_l) << ',' << p.n_stages << ',' << config.seed << "\n";
    }
    return out.str();
}

std::string run_two_stage(const RunConfig& config) {
    const TrellisCode code = make_code_by_id(config.code_id);
    const GifcParams params = params_of(config);
    if (config.m2 < 1 || config.m2 > (1 << 16)) throw ConfigError("m2 must be in [1, 65536]");
    if (config.block_stages < 1) throw ConfigError("block_stages must be >= 1");

    const SecondaryAlphabet alphabet = make_bpsk_alphabet(code.signal_dimension, config.p2);
    NoiseSource base(config.seed, 0);

    long long w2_errors = 0;
    long long theta_stages = 0;
    long long theta_errors = 0;
    for (long long trial = 0; trial < config.trials; ++trial) {
        NoiseSource rng = base.spawn(trial);
        const SecondaryCodebook book =
            random_secondary_codebook(alphabet, config.block_stages, config.m2, rng.spawn(0));

        NoiseSource msg_rng = rng.spawn(1);
        std::vector<int> messages(config.block_stages);
        for (int& u : messages) u = msg_rng.uniform_int(code.message_alphabet_size);
        const int w2 = msg_rng.uniform_int(config.m2);

        auto [x1, fs] = encode(code, 0, messages, params.p1);
        (void)fs;
        NoiseSource ch_rng = rng.spawn(2);
        std::vector<double> y1(x1.values.size());
        for (std::size_t i = 0; i < y1.size(); ++i)
            y1[i] = x1.values[i] + params.a21 * book.codewords[w2][i] + ch_rng.gaussian();

        const TwoStageResult result = two_stage_decode(code, book, y1, params, 0, messages);
        w2_errors += result.w2_hat != w2;
        theta_stages += config.block_stages;
        for (std::uint8_t e : result.primary.per_stage_errors) theta_errors += e;
    }

    // Interference-free baseline over the same total number of stages.
    const DecodeResult baseline = measure_theta(code, DecoderKind::viterbi, params.p1, theta_stages,
                                                base.spawn(0xBA5E), 0);

    ordered_json j;
    j["meta"] = meta_block(config);
    j["m2"] = config.m2;
    j["block_stages"] = config.block_stages;
    j["trials"] = config.trials;
    j["eps1_hat"] = static_cast<double>(w2_errors) / config.trials;
    j["theta_tilde"] = static_cast<double>(theta_errors) / theta_stages;
    j["theta_interference_free"] = baseline.theta_n;
    return j.dump(2) + "\n";
}

std::string run_validate(const RunConfig& config) {
    ordered_json codes = ordered_json::array();
    bool all_ok = true;
    for (const CodeCheck& check : validate_all()) {
        ordered_json c;
        c["code"] = check.code_id;
        c["num_states"] = check.num_states;
        c["message_alphabet_size"] = check.message_alphabet_size;
        c["signal_dimension"] = check.signal_dimension;
        c["rate_bits_per_dim"] = check.rate_bits_per_dim;
        c["structure_ok"] = check.structure_ok;
        c["uniform_stationary"] = check.uniform_stationary;
        c["failures"] = check.failures;
        codes.push_back(c);
        all_ok = all_ok && check.structure_ok && check.uniform_stationary;
    }
    ordered_json j;
    j["meta"] = meta_block(config);
    j["codes"] = codes;
    j["all_ok"] = all_ok;
    return j.dump(2) + "\n";
}

}  // namespace

std::vector<CodeCheck> validate_all() {
    std::vector<CodeCheck> checks;
    for (const std::string& id : builtin_code_ids()) {
        const TrellisCode code = make_code_by_id(id);
        CodeCheck check;
        check.code_id = id;
        check.num_states = code.num_states;
        check.message_alphabet_size = code.message_alphabet_size;
        check.signal_dimension = code.signal_dimension;
        check.rate_bits_per_dim = code.rate_bits_per_dim();
        ValidationReport report = validate(code);
        check.structure_ok = report.passed;
        check.failures = std::move(report.failures);

        // Power iteration of the state chain toward the uniform distribution.
        const auto p = state_transition_matrix(code);
        std::vector<double> dist(code.num_states, 0.0);
        dist[0] = 1.0;
        for (int iter = 0; iter < 4096; ++iter) {
            std::vector<double> next(code.num_states, 0.0);
            for (int s = 0; s < code.num_states; ++s) {
                for (int t = 0; t < code.num_states; ++t) next[t] += dist[s] * p[s][t];
            }
            dist.swap(next);
        }
        const double uniform = 1.0 / code.num_states;
        check.uniform_stationary = true;
        for (double v : dist) {
            if (std::abs(v - uniform) > 1e-9) check.uniform_stationary = false;
        }
        checks.push_back(std::move(check));
    }
    return checks;
}

int run(const RunConfig& config) {
    try {
        check_common(config);
        std::string content;
        if (config.command == "ber") {
            content = run_ber(config);
        } else if (config.command == "entropy") {
            content = run_entropy(config);
        } else if (config.command == "bounds") {
            content = run_bounds(config);
        } else if (config.command == "sweep") {
            content = run_sweep(config);
        } else if (config.command == "two-stage") {
            content = run_two_stage(config);
        } else if (config.command == "validate") {
            content = run_validate(config);
        } else {
            throw ConfigError("unknown command: " + config.command);
        }
        write_artifact(config, content);
        return kExitOk;
    } catch (const degeneracy_error& e) {
        std::cerr << "numerical degeneracy: " << e.what() << "\n";
        return kExitDegeneracy;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

}  // namespace gifc
