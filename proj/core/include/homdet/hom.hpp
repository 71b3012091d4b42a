#pragma once

#include <map>
#include <optional>
#include <utility>

#include "homdet/states.hpp"

namespace homdet {

/// Outcome statistics of two photons meeting at a 50:50 beam splitter.
/// p_coincidence never exceeds 1/2: identical photons bunch completely,
/// orthogonal ones coincide half the time.
struct CoincidenceResult {
    double p_coincidence = 0.0;
    double p_bunched = 0.0;
    /// Per-(i, j) probability of one photon in detector mode c_i and one in
    /// d_j. Filled by the mode-expansion oracle only.
    std::optional<std::map<std::pair<int, int>, double>> breakdown;
};

/// Closed form p_c = (1 - |<psi2|psi1>|^2) / 2.
CoincidenceResult coincidence_pure(const PureState& psi1, const PureState& psi2);

/// Mixed-state form p_c = (1 - tr[sigma1 sigma2]) / 2; the ensemble average
/// of the pure case over any decompositions of the inputs.
CoincidenceResult coincidence_mixed(const DensityMatrix& sigma1,
                                    const DensityMatrix& sigma2);

/// Brute-force two-photon oracle: expands the input through the
/// beam-splitter substitution a_i -> (c_i + d_i)/sqrt2, b_i -> (c_i - d_i)/sqrt2,
/// collects normalized two-photon Fock outcomes (double occupation carries
/// the bosonic sqrt2), and sums coincident ones. Independent check of the
/// closed form.
CoincidenceResult bs_oracle(const PureState& psi1, const PureState& psi2);

/// sum_ij alpha_i beta_j |<phi_i|psi_j>|^2; equals the overlap of the two
/// mixed states for any choice of decompositions.
double average_fidelity(const Ensemble& rho_ensemble, const Ensemble& sigma_ensemble);

} // namespace homdet
