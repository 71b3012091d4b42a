#include "commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "homdet/experiment.hpp"
#include "homdet/hom.hpp"
#include "homdet/json_io.hpp"
#include "homdet/optics.hpp"
#include "homdet/witness.hpp"

namespace homdet::cli {

namespace {

using io::json;

json load_config(const CommandOptions& opts) {
    if (!opts.config_path) return json::object();
    std::ifstream in(*opts.config_path);
    if (!in) throw ValidationError("cannot open config file: " + *opts.config_path);
    return json::parse(in); // parse_error propagates
}

void write_output(const CommandOptions& opts, const std::string& text) {
    if (opts.out_path) {
        std::ofstream out(*opts.out_path);
        if (!out) throw ValidationError("cannot open output file: " + *opts.out_path);
        out << text;
    } else {
        std::cout << text;
    }
}

void emit_json(const CommandOptions& opts, const json& doc) {
    io::ensure_finite(doc);
    write_output(opts, doc.dump(2) + "\n");
}

void require_json_format(const CommandOptions& opts) {
    if (opts.format != "json")
        throw ValidationError("csv output is only available for the simulate command");
}

PureState bell_phi_plus() {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return PureState(v, {2, 2});
}

Witness resolve_witness(const json& config, const CommandOptions& opts) {
    if (opts.preset) {
        if (*opts.preset == "bell-witness") return projector_witness(bell_phi_plus());
        if (*opts.preset == optics::kJoinPresetName)
            throw ValidationError("preset '" + *opts.preset + "' is a circuit preset");
        throw ValidationError("unknown preset: " + *opts.preset);
    }
    if (config.contains("witness")) return io::parse_witness(config["witness"]);
    if (config.contains("target")) {
        auto parsed = io::parse_state(config["target"]);
        if (!parsed.pure)
            throw ValidationError("witness target must be a pure-state record");
        return projector_witness(*parsed.pure);
    }
    throw ValidationError("no witness given: need --preset, 'witness', or 'target'");
}

std::uint64_t resolve_seed(const json& config, const CommandOptions& opts,
                           bool required) {
    if (opts.seed) return *opts.seed;
    if (config.contains("seed")) return config["seed"].get<std::uint64_t>();
    if (required) throw ValidationError("a seed is required (--seed or config)");
    return 1;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kExitConsistency;
    }
}

} // namespace

int cmd_witness(const CommandOptions& opts) {
    return guarded([&] {
        require_json_format(opts);
        json config = load_config(opts);
        Witness w = resolve_witness(config, opts);
        ApproxWitness aew = approximate(w);
        SeparableApproxWitness saew = separable_approximate(w);

        json out = io::report_json(aew);
        out["p_s"] = saew.p_s;
        out["mode"] = saew.mode == SepMode::exact ? "exact" : "ppt-lower-bound";
        if (config.value("decompose", false)) {
            int ensemble_size = config.value("ensemble_size", 256);
            int restarts = config.value("restarts", 4);
            if (attach_decomposition(saew, ensemble_size, resolve_seed(config, opts, false),
                                     restarts))
                out["decomposition"] = io::decomposition_json(*saew.decomposition);
            else
                out["decomposition"] = nullptr; // not found; says nothing about entanglement
        }
        emit_json(opts, out);
        return kExitOk;
    });
}

int cmd_exact(const CommandOptions& opts) {
    return guarded([&] {
        require_json_format(opts);
        json config = load_config(opts);
        if (!config.contains("rho")) throw ValidationError("config needs a 'rho' state record");
        auto rho = io::parse_state(config["rho"]);
        Witness w = resolve_witness(config, opts);
        ApproxWitness aew = approximate(w);
        int d = w.local_dim();

        double direct = w.expectation(rho.density);
        double f_ave = overlap(aew.matrix, rho.density);
        double reconstructed = reconstruct_expectation(f_ave, aew.p_star, d);
        double p_c = coincidence_mixed(aew.matrix, rho.density).p_coincidence;

        if (std::abs(direct - reconstructed) > 1e-9 * std::max(1.0, std::abs(direct)))
            throw ConsistencyError("reconstructed expectation deviates from direct trace");

        json out{{"trace_rho_w", direct},
                 {"overlap_rho_aew", f_ave},
                 {"reconstructed_trace", reconstructed},
                 {"p_star", aew.p_star},
                 {"p_coincidence", p_c}};

        if (config.value("decompose", false)) {
            SeparableApproxWitness saew = separable_approximate(w);
            int ensemble_size = config.value("ensemble_size", 256);
            int restarts = config.value("restarts", 4);
            out["p_s"] = saew.p_s;
            if (attach_decomposition(saew, ensemble_size, resolve_seed(config, opts, false),
                                     restarts)) {
                double locc = locc_expectation(*saew.decomposition, rho.density);
                double overlap_s = overlap(saew.matrix, rho.density);
                double allowance = std::max(
                    tol::kDecomposition,
                    10.0 * saew.matrix.dim() * saew.decomposition->residual);
                if (std::abs(locc - overlap_s) > allowance)
                    throw ConsistencyError("LOCC expectation deviates from the overlap");
                out["locc_expectation"] = locc;
                out["overlap_rho_saew"] = overlap_s;
            } else {
                out["locc_expectation"] = nullptr;
            }
        }
        emit_json(opts, out);
        return kExitOk;
    });
}

int cmd_simulate(const CommandOptions& opts) {
    return guarded([&] {
        json config = load_config(opts);
        if (!config.contains("rho")) throw ValidationError("config needs a 'rho' state record");
        if (!config.contains("n_copies"))
            throw ValidationError("config needs 'n_copies'");

        Witness w = resolve_witness(config, opts);
        ApproxWitness aew = approximate(w);
        int d = w.local_dim();

        std::string pipeline_name = config.value("pipeline", "two_interferometers");
        Pipeline pipeline;
        if (pipeline_name == "two_interferometers")
            pipeline = Pipeline::two_interferometers;
        else if (pipeline_name == "single_interferometer_dumped")
            pipeline = Pipeline::single_interferometer_dumped;
        else
            throw ValidationError("unknown pipeline: " + pipeline_name);

        auto rho = io::parse_state(config["rho"]);
        ExperimentConfig cfg{config["n_copies"].get<long long>(),
                             resolve_seed(config, opts, /*required=*/true),
                             pipeline,
                             aew,
                             io::ensemble_from_state(rho),
                             ensemble_of(aew.matrix),
                             config.value("variance_reduced", false),
                             config.value("batch_size", static_cast<long long>(65536))};

        RunResult run = run_experiment(cfg);
        DetectionReport report = estimate(run.totals, aew.p_star, d, pipeline);

        if (opts.format == "csv") {
            std::ostringstream csv;
            csv << "batch,n_used,n_c_upper,n_c_lower,n_discarded\n";
            for (std::size_t b = 0; b < run.batches.size(); ++b) {
                const auto& c = run.batches[b];
                csv << b << ',' << c.n_used << ',' << c.n_c_upper << ',' << c.n_c_lower
                    << ',' << c.n_discarded << '\n';
            }
            write_output(opts, csv.str());
            return kExitOk;
        }

        json out{{"config",
                  {{"n_copies", cfg.n_copies},
                   {"seed", cfg.seed},
                   {"pipeline", pipeline_name},
                   {"p_star", aew.p_star},
                   {"d", d},
                   {"variance_reduced", cfg.variance_reduced}}},
                 {"counts", io::counts_json(run.totals)},
                 {"report", io::report_json(report)}};
        emit_json(opts, out);
        return kExitOk; // the decision lives in the payload, never the exit code
    });
}

int cmd_circuit_verify(const CommandOptions& opts) {
    return guarded([&] {
        require_json_format(opts);
        json config = load_config(opts);
        if (opts.preset && *opts.preset != optics::kJoinPresetName)
            throw ValidationError("unknown circuit preset: " + *opts.preset);
        if (!config.contains("x"))
            throw ValidationError("config needs 'x': four complex amplitudes");
        Eigen::VectorXcd xv = io::vector_from_json(config["x"]);
        if (xv.size() != 4) throw ValidationError("'x' must have exactly four entries");
        int q = config.value("q", 1);

        Eigen::Vector4cd x = xv;
        auto join = optics::quantum_join(x);
        auto encoded = optics::oam_encode(join.joined, q);

        Eigen::Vector4cd joined_vec = Eigen::Vector4cd::Zero();
        for (const auto& [key, amp] : join.joined.terms()) {
            const auto& m = key.front();
            int idx = (m.path == "b2" ? 2 : 0) + (m.pol == optics::Pol::V ? 1 : 0);
            joined_vec(idx) += amp;
        }
        double join_fidelity = std::abs(x.dot(joined_vec));
        double encoded_fidelity = std::abs(x.dot(encoded.c1.amplitudes()));

        json steps = json::array();
        for (const auto& [name, norm] : join.step_norms)
            steps.push_back(json{{"step", name}, {"norm", norm}});

        json out{{"probability", join.probability},
                 {"join_fidelity", join_fidelity},
                 {"encoded_fidelity", encoded_fidelity},
                 {"q", q},
                 {"step_norms", std::move(steps)},
                 {"encoded_c1", io::state_record(encoded.c1)},
                 {"encoded_c2", io::state_record(encoded.c2)},
                 {"c2_sign_pattern", json::array({1, 1, -1, -1})}};
        emit_json(opts, out);
        return kExitOk;
    });
}

} // namespace homdet::cli
