#include "homdet/hom.hpp"

#include <cmath>

namespace homdet {

namespace {

constexpr double kHalf = 0.5;

void check_same_dim(const PureState& a, const PureState& b, const char* what) {
    if (a.dim() != b.dim()) throw ValidationError(std::string(what) + ": dimension mismatch");
}

} // namespace

CoincidenceResult coincidence_pure(const PureState& psi1, const PureState& psi2) {
    check_same_dim(psi1, psi2, "coincidence_pure");
    double f = std::norm(psi2.amplitudes().dot(psi1.amplitudes()));
    CoincidenceResult r;
    r.p_coincidence = kHalf * (1.0 - f);
    r.p_bunched = 1.0 - r.p_coincidence;
    return r;
}

CoincidenceResult coincidence_mixed(const DensityMatrix& sigma1,
                                    const DensityMatrix& sigma2) {
    CoincidenceResult r;
    r.p_coincidence = kHalf * (1.0 - overlap(sigma1, sigma2));
    r.p_bunched = 1.0 - r.p_coincidence;
    return r;
}

CoincidenceResult bs_oracle(const PureState& psi1, const PureState& psi2) {
    check_same_dim(psi1, psi2, "bs_oracle");
    const int d = psi1.dim();
    const auto& a = psi1.amplitudes();
    const auto& b = psi2.amplitudes();
    const double sqrt2 = std::sqrt(2.0);

    // Two-photon amplitudes over normalized Fock outcomes. Both-in-c and
    // both-in-d outcomes are indexed by the unordered mode pair.
    std::map<std::pair<int, int>, cxd> coincident; // (c_i, d_j), ordered by port
    std::map<std::pair<int, int>, cxd> both_c;     // i <= j
    std::map<std::pair<int, int>, cxd> both_d;

    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cxd g = kHalf * a(i) * b(j); // (c_i + d_i)(c_j - d_j) / 2
            coincident[{i, j}] += -g;    // -c_i d_j
            coincident[{j, i}] += g;     // +d_i c_j == +c_j d_i
            auto key = std::minmax(i, j);
            // c_i c_j and -d_i d_j; equal modes pick up the bosonic sqrt2
            cxd w = (i == j) ? g * sqrt2 : g;
            both_c[{key.first, key.second}] += w;
            both_d[{key.first, key.second}] += -w;
        }

    CoincidenceResult r;
    r.breakdown.emplace();
    double pc = 0.0, pb = 0.0;
    for (const auto& [key, amp] : coincident) {
        double p = std::norm(amp);
        pc += p;
        (*r.breakdown)[key] = p;
    }
    for (const auto& [key, amp] : both_c) pb += std::norm(amp);
    for (const auto& [key, amp] : both_d) pb += std::norm(amp);
    r.p_coincidence = pc;
    r.p_bunched = pb;
    return r;
}

double average_fidelity(const Ensemble& rho_ensemble, const Ensemble& sigma_ensemble) {
    if (rho_ensemble.entries().front().state.dim() !=
        sigma_ensemble.entries().front().state.dim())
        throw ValidationError("average_fidelity: dimension mismatch");
    double acc = 0.0;
    for (const auto& ei : rho_ensemble.entries())
        for (const auto& ej : sigma_ensemble.entries())
            acc += ei.weight * ej.weight *
                   std::norm(ei.state.amplitudes().dot(ej.state.amplitudes()));
    return acc;
}

} // namespace homdet
