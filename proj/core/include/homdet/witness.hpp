#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "homdet/states.hpp"

namespace homdet {

/// Hermitian unit-trace observable on a d (x) d space with at least one
/// negative eigenvalue: nonnegative expectation on every separable state,
/// negative on some entangled state.
class Witness {
public:
    Witness(Eigen::MatrixXcd matrix, std::vector<int> dims);

    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const std::vector<int>& dims() const { return dims_; }
    int local_dim() const { return dims_[0]; }
    int dim() const { return static_cast<int>(mat_.rows()); }
    double lambda_min() const { return lambda_min_; }

    double expectation(const DensityMatrix& rho) const;

private:
    Eigen::MatrixXcd mat_;
    std::vector<int> dims_;
    double lambda_min_;
};

/// Standard projector witness for a pure entangled target:
/// (lmax^2 I - |t><t|) normalized to unit trace, lmax the largest Schmidt
/// coefficient. Nonnegative on all separable states, negative on the target.
Witness projector_witness(const PureState& target);

/// Positive mixture (1 - p*) W + p* I/D with minimal p*, itself a quantum
/// state. p* = D|lmin| / (1 + D|lmin|).
struct ApproxWitness {
    Witness source;
    double p_star;
    DensityMatrix matrix;
};

ApproxWitness approximate(const Witness& w);

/// Inverts the mixing: tr[rho W] = (f_ave - p*/d^2) / (1 - p*) for a genuine
/// average fidelity f_ave = tr[rho W~] in [0, 1]. The count estimator applies
/// the same affine map to its (possibly out-of-range) sampled value.
double reconstruct_expectation(double f_ave, double p_star, int d);

enum class SepMode {
    exact,           // PPT is necessary and sufficient (2x2, 2x3)
    ppt_lower_bound, // PPT necessary only; p_s is a lower bound
};

struct ProductTerm {
    double weight;
    DensityMatrix w_a;
    DensityMatrix w_b;
};

struct SeparableDecomposition {
    std::vector<ProductTerm> terms;
    double residual; // max elementwise error of the reconstructed mixture
};

struct SeparableApproxWitness {
    Witness source;
    double p_s;
    DensityMatrix matrix;
    SepMode mode;
    std::optional<SeparableDecomposition> decomposition;
};

/// Minimal p such that (1-p) W + p I/D is PSD and has PSD partial transpose,
/// found by bisection. Exact separability for local dims with dA*dB <= 6,
/// a lower bound otherwise (mode records which).
SeparableApproxWitness separable_approximate(const Witness& w,
                                             double tolerance = tol::kBisection);

struct DecompositionResult {
    std::optional<SeparableDecomposition> decomposition; // empty on failure
    double best_residual;
};

/// Best-effort separable decomposition of a (presumed separable) state:
/// nonnegative least-squares fit over a dictionary of product projectors.
/// The dictionary mixes structured local states (computational basis plus
/// two-level superpositions; the Pauli eigenbases for qubits) with
/// ensemble_size random product states per restart. A failure outcome means
/// the fit did not converge, not that the state is entangled.
DecompositionResult find_separable_decomposition(const DensityMatrix& target,
                                                 int ensemble_size, std::uint64_t seed,
                                                 int restarts = 4);

/// Convenience: run the search against saew.matrix and attach on success.
bool attach_decomposition(SeparableApproxWitness& saew, int ensemble_size,
                          std::uint64_t seed, int restarts = 4);

/// sum_k p_k tr[(w_k^A (x) w_k^B) rho]; equals tr[rho M] for the mixture M
/// the decomposition reconstructs.
double locc_expectation(const SeparableDecomposition& decomposition,
                        const DensityMatrix& rho);

} // namespace homdet
