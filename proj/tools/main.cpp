// Experiment CLI: accessible-capacity bounds, entropy rates, and primary-link
// error rates on the standardized two-user Gaussian interference channel.

#include <cmath>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gifc/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gaussian interference channel simulator"};
    app.require_subcommand(1);

    gifc::RunConfig config;
    double trials_flag = static_cast<double>(config.trials);
    double stages_flag = static_cast<double>(config.n_stages);

    auto add_channel_flags = [&config](CLI::App* cmd) {
        cmd->add_option("--code", config.code_id, "Built-in code id")->capture_default_str();
        cmd->add_option("--a12-sq", config.a12_sq, "Squared interference coefficient a12^2")
            ->capture_default_str();
        cmd->add_option("--a21-sq", config.a21_sq, "Squared interference coefficient a21^2")
            ->capture_default_str();
        cmd->add_option("--p1", config.p1, "Primary transmit power")->capture_default_str();
        cmd->add_option("--seed", config.seed, "64-bit experiment seed")->capture_default_str();
        cmd->add_option("--out", config.out_path, "Output file (default: stdout)");
    };

    CLI::App* ber = app.add_subcommand("ber", "Interference-free primary-link error rate");
    add_channel_flags(ber);
    ber->add_option("--trials", trials_flag, "Number of decoded stages (1e7 style accepted)")
        ->capture_default_str();

    CLI::App* entropy = app.add_subcommand("entropy", "Output entropy rate of one secondary link");
    add_channel_flags(entropy);
    entropy->add_option("--p2", config.p2, "Secondary transmit power")->capture_default_str();
    entropy->add_option("--link", config.link, "Observed link: y1 or y2")->capture_default_str();
    entropy->add_option("--alphabet", config.alphabet, "Secondary alphabet: bpsk or zero")
        ->capture_default_str();
    entropy->add_option("--n-stages", stages_flag, "Trellis stages to simulate")
        ->capture_default_str();

    CLI::App* bounds = app.add_subcommand("bounds", "Accessible-capacity bounds at one P2");
    add_channel_flags(bounds);
    bounds->add_option("--p2", config.p2, "Secondary transmit power")->capture_default_str();
    bounds->add_option("--n-stages", stages_flag, "Trellis stages per estimate")
        ->capture_default_str();

    CLI::App* sweep = app.add_subcommand("sweep", "Bounds over a P2 grid, CSV output");
    add_channel_flags(sweep);
    sweep->add_option("--p2-grid", config.p2_grid, "P2 grid values (default grid when omitted)");
    sweep->add_option("--n-stages", stages_flag, "Trellis stages per estimate")
        ->capture_default_str();
    sweep->add_option("--workers", config.max_workers, "Max parallel sweep points (0 = auto)")
        ->capture_default_str();

    CLI::App* two_stage = app.add_subcommand("two-stage", "Two-stage decoder simulation");
    add_channel_flags(two_stage);
    two_stage->add_option("--p2", config.p2, "Secondary transmit power")->capture_default_str();
    two_stage->add_option("--m2", config.m2, "Secondary codebook size")->capture_default_str();
    two_stage->add_option("--block-stages", config.block_stages, "Stages per secondary block")
        ->capture_default_str();
    two_stage->add_option("--trials", trials_flag, "Independent block trials")
        ->capture_default_str();

    CLI::App* validate = app.add_subcommand("validate", "Check all built-in codes");
    validate->add_option("--out", config.out_path, "Output file (default: stdout)");
    validate->add_option("--seed", config.seed, "Recorded in the metadata header")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : gifc::kExitConfigError;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.trials = static_cast<long long>(std::llround(trials_flag));
    config.n_stages = static_cast<long long>(std::llround(stages_flag));
    return gifc::run(config);
}
