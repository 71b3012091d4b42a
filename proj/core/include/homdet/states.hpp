#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "homdet/errors.hpp"
#include "homdet/tolerances.hpp"

namespace homdet {

using cxd = std::complex<double>;

/// Normalized pure state on a finite tensor-product space.
/// dims lists the subsystem dimensions; subsystem 0 is the left tensor factor.
class PureState {
public:
    PureState(Eigen::VectorXcd amplitudes, std::vector<int> dims);

    /// Normalizes the vector before constructing (norm must be nonzero).
    static PureState normalized(Eigen::VectorXcd amplitudes, std::vector<int> dims);

    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    const std::vector<int>& dims() const { return dims_; }
    int dim() const { return static_cast<int>(amps_.size()); }

    /// |<a|b>| = 1 test; global phase is physically meaningless.
    bool approx_equal(const PureState& other, double tolerance = tol::kSpectral) const;

private:
    Eigen::VectorXcd amps_;
    std::vector<int> dims_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
/// Eigenvalues in [-1e-10, 0) are tolerated as roundoff; anything more
/// negative is rejected.
class DensityMatrix {
public:
    DensityMatrix(Eigen::MatrixXcd matrix, std::vector<int> dims);

    static DensityMatrix from_pure(const PureState& psi);

    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const std::vector<int>& dims() const { return dims_; }
    int dim() const { return static_cast<int>(mat_.rows()); }

private:
    Eigen::MatrixXcd mat_;
    std::vector<int> dims_;
};

/// Convex mixture {(weight, state)} realizing a density matrix. The member
/// states need not be orthogonal.
class Ensemble {
public:
    struct Entry {
        double weight;
        PureState state;
    };

    explicit Ensemble(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<int>& dims() const;

    /// Sum of weight * |psi><psi|.
    DensityMatrix mix() const;

private:
    std::vector<Entry> entries_;
};

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// tr[rho sigma]. Equals the average fidelity of the two states, for any
/// pure-state decompositions. Real and in [0, 1] up to roundoff.
double overlap(const DensityMatrix& rho, const DensityMatrix& sigma);

struct EigenPair {
    double value;
    PureState vector;
};

/// Eigenvalues ascending, eigenvectors orthonormal. Input must be Hermitian
/// within tolerance; dims defaults to the single-factor {D}.
std::vector<EigenPair> eigendecompose(const Eigen::MatrixXcd& h, std::vector<int> dims = {});

/// Block transpose on one subsystem of a bipartite operator. The result is
/// Hermitian and trace-preserving but in general not positive.
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, int dim_a, int dim_b,
                                   int subsystem);
Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, int subsystem);

struct SchmidtDecomposition {
    Eigen::VectorXd coefficients;  // descending, nonnegative, min(dA,dB) entries
    Eigen::MatrixXcd left;         // orthonormal columns in C^dA
    Eigen::MatrixXcd right;        // orthonormal columns in C^dB
};

/// psi = sum_k c_k left_k (x) right_k with sum c_k^2 = 1.
SchmidtDecomposition schmidt(const PureState& psi, int dim_a, int dim_b);

/// Canonical eigen-ensemble: (eigenvalue, eigenvector) pairs with eigenvalue
/// above 1e-12, weights renormalized.
Ensemble ensemble_of(const DensityMatrix& rho);

} // namespace homdet
