#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_common_options(CLI::App* cmd, homdet::cli::CommandOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides the config's seed)");
    cmd->add_option("--out", opts.out_path, "Output file (default: stdout)");
    cmd->add_option("--format", opts.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--preset", opts.preset,
                    "Built-in preset: bell-witness or quantum-join-fig4");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement detection via Hong-Ou-Mandel fidelity estimation"};
    app.require_subcommand(1);

    homdet::cli::CommandOptions witness_opts, exact_opts, simulate_opts, circuit_opts;
    auto* witness = app.add_subcommand(
        "witness", "Approximate and separable-approximate a witness");
    add_common_options(witness, witness_opts);
    auto* exact = app.add_subcommand(
        "exact", "Exact expectations, overlaps, and coincidence rate for (rho, W)");
    add_common_options(exact, exact_opts);
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo coincidence-counting experiment");
    add_common_options(simulate, simulate_opts);
    auto* circuit = app.add_subcommand(
        "circuit-verify", "Run the joining + OAM-encoding circuit on amplitudes x");
    add_common_options(circuit, circuit_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : homdet::cli::kExitValidation;
    }

    if (witness->parsed()) return homdet::cli::cmd_witness(witness_opts);
    if (exact->parsed()) return homdet::cli::cmd_exact(exact_opts);
    if (simulate->parsed()) return homdet::cli::cmd_simulate(simulate_opts);
    if (circuit->parsed()) return homdet::cli::cmd_circuit_verify(circuit_opts);
    return homdet::cli::kExitValidation;
}
