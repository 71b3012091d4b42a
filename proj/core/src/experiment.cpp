#include "homdet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "homdet/hom.hpp"

namespace homdet {

namespace {

std::vector<double> cdf_of(const Ensemble& ensemble) {
    std::vector<double> cdf;
    cdf.reserve(ensemble.size());
    double acc = 0.0;
    for (const auto& e : ensemble.entries()) {
        acc += e.weight;
        cdf.push_back(acc);
    }
    cdf.back() = 1.0;
    return cdf;
}

std::size_t sample_index(const std::vector<double>& cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
}

} // namespace

TrialModel build_trial_model(const ExperimentConfig& config) {
    if (config.n_copies < 0)
        throw ValidationError("ExperimentConfig: n_copies must be >= 0");
    const auto& aew = config.aew_ensemble;
    const auto& st = config.state_ensemble;
    if (aew.entries().front().state.dim() != st.entries().front().state.dim() ||
        aew.entries().front().state.dim() != config.witness.matrix.dim())
        throw ValidationError("ExperimentConfig: ensemble/witness dimension mismatch");

    TrialModel model;
    model.aew_cdf = cdf_of(aew);
    model.state_cdf = cdf_of(st);
    model.coincidence_prob.resize(aew.size(), st.size());
    for (std::size_t i = 0; i < aew.size(); ++i)
        for (std::size_t j = 0; j < st.size(); ++j)
            model.coincidence_prob(i, j) =
                coincidence_pure(aew.entries()[i].state, st.entries()[j].state)
                    .p_coincidence;
    model.mixed_coincidence_prob =
        coincidence_mixed(aew.mix(), st.mix()).p_coincidence;
    model.pipeline = config.pipeline;
    model.variance_reduced = config.variance_reduced;
    return model;
}

TrialOutcome run_trial(rng::SplitMix64& gen, const TrialModel& model) {
    double p;
    if (model.variance_reduced) {
        p = model.mixed_coincidence_prob;
    } else {
        std::size_t i = sample_index(model.aew_cdf, gen.uniform01());
        std::size_t j = sample_index(model.state_cdf, gen.uniform01());
        p = model.coincidence_prob(i, j);
    }
    bool rho_upper = gen.uniform01() < 0.5;
    bool aew_upper = gen.uniform01() < 0.5;
    if (rho_upper != aew_upper) return {Routing::discard, false};
    Routing routing = rho_upper ? Routing::upper : Routing::lower;
    if (model.pipeline == Pipeline::single_interferometer_dumped &&
        routing == Routing::upper)
        return {Routing::discard, false};
    bool coincidence = gen.uniform01() < p;
    return {routing, coincidence};
}

namespace {

int env_thread_count() {
    const char* env = std::getenv("HOMDET_THREADS");
    if (!env) return 1;
    int t = std::atoi(env);
    return t < 1 ? 1 : t;
}

} // namespace

RunResult run_experiment(const ExperimentConfig& config) {
    TrialModel model = build_trial_model(config);
    const long long n = config.n_copies;
    const long long batch_size =
        config.batch_size > 0 ? config.batch_size : std::max<long long>(n, 1);
    const long long n_batches = n == 0 ? 0 : (n + batch_size - 1) / batch_size;

    RunResult result;
    result.batches.assign(static_cast<std::size_t>(n_batches), ExperimentCounts{});

    // Batches are fixed index ranges with per-trial substreams, so the tallies
    // do not depend on which thread runs them.
    auto process_batch = [&](long long b) {
        ExperimentCounts counts;
        const long long begin = b * batch_size;
        const long long end = std::min(n, begin + batch_size);
        for (long long t = begin; t < end; ++t) {
            auto gen = rng::substream(config.seed, static_cast<std::uint64_t>(t));
            TrialOutcome outcome = run_trial(gen, model);
            switch (outcome.routing) {
                case Routing::discard:
                    ++counts.n_discarded;
                    break;
                case Routing::upper:
                    ++counts.n_used;
                    if (outcome.coincidence) ++counts.n_c_upper;
                    break;
                case Routing::lower:
                    ++counts.n_used;
                    if (outcome.coincidence) ++counts.n_c_lower;
                    break;
            }
        }
        result.batches[static_cast<std::size_t>(b)] = counts;
    };

    const int threads =
        static_cast<int>(std::min<long long>(env_thread_count(), n_batches));
    if (threads <= 1) {
        for (long long b = 0; b < n_batches; ++b) process_batch(b);
    } else {
        std::atomic<long long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int k = 0; k < threads; ++k)
            pool.emplace_back([&] {
                for (long long b = next++; b < n_batches; b = next++) process_batch(b);
            });
        for (auto& th : pool) th.join();
    }

    for (const auto& batch : result.batches) {
        result.totals.n_used += batch.n_used;
        result.totals.n_c_upper += batch.n_c_upper;
        result.totals.n_c_lower += batch.n_c_lower;
        result.totals.n_discarded += batch.n_discarded;
    }
    return result;
}

DetectionReport estimate(const ExperimentCounts& counts, double p_star, int d,
                         Pipeline mode) {
    const long long n = counts.n_copies();
    if (n <= 0) throw ValidationError("estimate: zero copies");
    if (counts.n_c_total() > counts.n_used)
        throw ValidationError("estimate: more coincidences than used copies");
    if (d < 2) throw ValidationError("estimate: d must be >= 2");
    if (!(p_star > 0.0) || !(p_star < 1.0))
        throw ValidationError("estimate: p_star must lie in (0, 1)");
    if (mode == Pipeline::single_interferometer_dumped && counts.n_c_upper != 0)
        throw ValidationError("estimate: upper counts present in dumped mode");

    const double nd = static_cast<double>(n);
    const bool dumped = (mode == Pipeline::single_interferometer_dumped);
    const double count = dumped ? static_cast<double>(counts.n_c_lower)
                                : static_cast<double>(counts.n_c_total());
    const double interfering_fraction = dumped ? 0.25 : 0.5;

    DetectionReport report;
    report.p_c_hat = count / (nd * interfering_fraction);
    report.f_ave_hat = 1.0 - 2.0 * report.p_c_hat;
    // The reconstruction map, applied without the [0,1] fidelity gate: a small
    // sample can push f_ave_hat below 0 and the report must still come out.
    report.witness_expectation_hat =
        (report.f_ave_hat - p_star / (d * d)) / (1.0 - p_star);

    // N_c is the per-interferometer count under the symmetric idealization
    // N_c^U = N_c^L; half the summed counters reproduces it in expectation.
    report.n_c_equivalent = dumped ? count : count / 2.0;
    report.threshold_counts = (nd / 8.0) * (1.0 - p_star / (d * d));
    report.decision = report.n_c_equivalent > report.threshold_counts
                          ? Decision::entangled
                          : Decision::not_detected;

    // Binomial error on the raw count, pushed through the affine maps.
    double q = count / nd;
    if (count <= 0.0 || count >= nd) q = (count + 0.5) / (nd + 1.0);
    const double se_count = std::sqrt(nd * q * (1.0 - q));
    const double se_pc = se_count / (nd * interfering_fraction);
    report.std_error = 2.0 * se_pc / (1.0 - p_star);
    const double se_equiv = dumped ? se_count : se_count / 2.0;
    report.z_score = (report.n_c_equivalent - report.threshold_counts) / se_equiv;
    return report;
}

Decision decide(const ExperimentCounts& counts, double p_star, int d, Pipeline mode) {
    return estimate(counts, p_star, d, mode).decision;
}

} // namespace homdet
