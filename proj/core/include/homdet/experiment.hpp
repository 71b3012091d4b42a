#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "homdet/rng.hpp"
#include "homdet/states.hpp"
#include "homdet/witness.hpp"

namespace homdet {

enum class Pipeline {
    two_interferometers,         // both (c1,~c1) and (c2,~c2) pairings counted
    single_interferometer_dumped // upper arms dumped; only (c2,~c2) survives
};

struct ExperimentConfig {
    long long n_copies;       // N: copies entering the OAM-merge stage
    std::uint64_t seed;
    Pipeline pipeline = Pipeline::two_interferometers;
    ApproxWitness witness;
    Ensemble state_ensemble;  // rho as a mixture {beta_j, |Psi_j>}
    Ensemble aew_ensemble;    // W~ as a mixture {alpha_i, |phi_i>}
    // Sample the coincidence Bernoulli at the mixed-state rate instead of
    // drawing ensemble indices per copy.
    bool variance_reduced = false;
    long long batch_size = 65536;
};

struct ExperimentCounts {
    long long n_used = 0;      // copies whose photons met at the same splitter
    long long n_c_upper = 0;   // coincidences at BS_HOM^U
    long long n_c_lower = 0;   // coincidences at BS_HOM^L
    long long n_discarded = 0;

    long long n_copies() const { return n_used + n_discarded; }
    long long n_c_total() const { return n_c_upper + n_c_lower; }
};

enum class Routing { upper, lower, discard };

struct TrialOutcome {
    Routing routing;
    bool coincidence;
};

/// Per-run precomputation: ensemble CDFs and the pure-pair coincidence
/// probabilities (1 - |<phi_i|Psi_j>|^2)/2.
struct TrialModel {
    std::vector<double> aew_cdf;
    std::vector<double> state_cdf;
    Eigen::MatrixXd coincidence_prob; // row i: AEW member, col j: state member
    double mixed_coincidence_prob;
    Pipeline pipeline;
    bool variance_reduced;
};

TrialModel build_trial_model(const ExperimentConfig& config);

/// One copy: draw ensemble members, route each photon through its 50:50
/// merge (upper/lower uniformly), discard mismatched pairings, and sample the
/// HOM coincidence on interfering ones.
TrialOutcome run_trial(rng::SplitMix64& gen, const TrialModel& model);

struct RunResult {
    ExperimentCounts totals;
    std::vector<ExperimentCounts> batches; // per-batch tallies, for CSV export
};

/// Aggregates n_copies trials over per-trial substreams of the seed, so the
/// result is reproducible and independent of batch partitioning. Batches run
/// on HOMDET_THREADS worker threads when that variable is set (default 1);
/// the counts are identical either way.
RunResult run_experiment(const ExperimentConfig& config);

enum class Decision { entangled, not_detected };

/// Count-based estimate of the witness expectation.
/// n_c_equivalent is the symmetric per-interferometer count N_c (the
/// N_c^U = N_c^L idealization): (N_c^U + N_c^L)/2 when both interferometers
/// run, N_c^L alone in dumped mode. The decision compares it against
/// threshold_counts = (N/8)(1 - p*/d^2).
struct DetectionReport {
    double p_c_hat = 0.0;
    double f_ave_hat = 0.0;
    double witness_expectation_hat = 0.0;
    double std_error = 0.0; // propagated to witness_expectation_hat
    double n_c_equivalent = 0.0;
    double threshold_counts = 0.0;
    double z_score = 0.0;   // excess of n_c_equivalent over threshold
    Decision decision = Decision::not_detected;
};

DetectionReport estimate(const ExperimentCounts& counts, double p_star, int d,
                         Pipeline mode);

Decision decide(const ExperimentCounts& counts, double p_star, int d, Pipeline mode);

} // namespace homdet
