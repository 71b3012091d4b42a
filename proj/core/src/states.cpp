#include "homdet/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace homdet {

namespace {

int product_of(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) {
        if (d < 1) throw ValidationError("subsystem dimension must be >= 1");
        p *= d;
    }
    return p;
}

void check_dims_match(const std::vector<int>& dims, int size, const char* what) {
    if (!dims.empty() && product_of(dims) != size)
        throw ValidationError(std::string(what) + ": product of dims does not match size");
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace

PureState::PureState(Eigen::VectorXcd amplitudes, std::vector<int> dims)
    : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (amps_.size() == 0) throw ValidationError("PureState: empty amplitude vector");
    if (dims_.empty()) dims_ = {static_cast<int>(amps_.size())};
    check_dims_match(dims_, static_cast<int>(amps_.size()), "PureState");
    if (std::abs(amps_.norm() - 1.0) > tol::kStructure)
        throw ValidationError("PureState: amplitudes are not normalized");
}

PureState PureState::normalized(Eigen::VectorXcd amplitudes, std::vector<int> dims) {
    double n = amplitudes.norm();
    if (n < 1e-300) throw ValidationError("PureState: cannot normalize a zero vector");
    return PureState(amplitudes / n, std::move(dims));
}

bool PureState::approx_equal(const PureState& other, double tolerance) const {
    if (dims_ != other.dims_) return false;
    return std::abs(std::abs(amps_.dot(other.amps_)) - 1.0) < tolerance;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, std::vector<int> dims)
    : mat_(std::move(matrix)), dims_(std::move(dims)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
        throw ValidationError("DensityMatrix: matrix must be square and nonempty");
    if (dims_.empty()) dims_ = {static_cast<int>(mat_.rows())};
    check_dims_match(dims_, static_cast<int>(mat_.rows()), "DensityMatrix");
    if (hermiticity_defect(mat_) > tol::kStructure)
        throw ValidationError("DensityMatrix: not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > tol::kStructure ||
        std::abs(mat_.trace().imag()) > tol::kStructure)
        throw ValidationError("DensityMatrix: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol::kPsdSlack)
        throw ValidationError("DensityMatrix: negative eigenvalue beyond roundoff slack");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    const auto& v = psi.amplitudes();
    return DensityMatrix(v * v.adjoint(), psi.dims());
}

Ensemble::Ensemble(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("Ensemble: no entries");
    double total = 0.0;
    for (const auto& e : entries_) {
        if (e.weight < 0.0) throw ValidationError("Ensemble: negative weight");
        if (e.state.dims() != entries_.front().state.dims())
            throw ValidationError("Ensemble: member states have mismatched dims");
        total += e.weight;
    }
    if (std::abs(total - 1.0) > tol::kStructure)
        throw ValidationError("Ensemble: weights do not sum to 1");
}

const std::vector<int>& Ensemble::dims() const { return entries_.front().state.dims(); }

DensityMatrix Ensemble::mix() const {
    int d = entries_.front().state.dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& e : entries_) {
        const auto& v = e.state.amplitudes();
        m += e.weight * (v * v.adjoint());
    }
    return DensityMatrix(m, dims());
}

PureState tensor(const PureState& a, const PureState& b) {
    Eigen::VectorXcd out(a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i)
        out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return PureState(std::move(out), std::move(dims));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    int da = a.dim(), db = b.dim();
    Eigen::MatrixXcd out(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return DensityMatrix(std::move(out), std::move(dims));
}

double overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dims() != sigma.dims())
        throw ValidationError("overlap: dimension mismatch");
    cxd tr = (rho.matrix() * sigma.matrix()).trace();
    if (std::abs(tr.imag()) > tol::kStructure)
        throw ConsistencyError("overlap: trace has a non-negligible imaginary part");
    return tr.real();
}

std::vector<EigenPair> eigendecompose(const Eigen::MatrixXcd& h, std::vector<int> dims) {
    if (h.rows() != h.cols()) throw ValidationError("eigendecompose: matrix must be square");
    if (hermiticity_defect(h) > tol::kStructure)
        throw ValidationError("eigendecompose: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw ConsistencyError("eigendecompose: solver failed");
    std::vector<EigenPair> out;
    out.reserve(h.rows());
    for (int k = 0; k < h.rows(); ++k)
        out.push_back({es.eigenvalues()(k), PureState(es.eigenvectors().col(k), dims)});
    return out;
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, int dim_a, int dim_b,
                                   int subsystem) {
    if (dim_a * dim_b != m.rows() || m.rows() != m.cols())
        throw ValidationError("partial_transpose: dims do not match matrix");
    if (subsystem != 0 && subsystem != 1)
        throw ValidationError("partial_transpose: subsystem index out of range");
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (int a = 0; a < dim_a; ++a)
        for (int b = 0; b < dim_b; ++b)
            for (int ap = 0; ap < dim_a; ++ap)
                for (int bp = 0; bp < dim_b; ++bp) {
                    int row = a * dim_b + b, col = ap * dim_b + bp;
                    int trow = subsystem == 0 ? ap * dim_b + b : a * dim_b + bp;
                    int tcol = subsystem == 0 ? a * dim_b + bp : ap * dim_b + b;
                    out(trow, tcol) = m(row, col);
                }
    return out;
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, int subsystem) {
    if (rho.dims().size() != 2)
        throw ValidationError("partial_transpose: state is not bipartite");
    return partial_transpose(rho.matrix(), rho.dims()[0], rho.dims()[1], subsystem);
}

SchmidtDecomposition schmidt(const PureState& psi, int dim_a, int dim_b) {
    if (psi.dims() != std::vector<int>{dim_a, dim_b})
        throw ValidationError("schmidt: state dims are not [dA, dB]");
    // Row-major reshape: amplitude (a, b) sits at index a*dB + b.
    Eigen::MatrixXcd m(dim_a, dim_b);
    for (int a = 0; a < dim_a; ++a)
        for (int b = 0; b < dim_b; ++b) m(a, b) = psi.amplitudes()(a * dim_b + b);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    int k = std::min(dim_a, dim_b);
    SchmidtDecomposition out;
    out.coefficients = svd.singularValues().head(k);
    out.left = svd.matrixU().leftCols(k);
    // m = U S V^dag, so psi = sum_k s_k u_k (x) conj(v_k).
    out.right = svd.matrixV().leftCols(k).conjugate();
    return out;
}

Ensemble ensemble_of(const DensityMatrix& rho) {
    auto pairs = eigendecompose(rho.matrix(), rho.dims());
    std::vector<Ensemble::Entry> entries;
    double total = 0.0;
    for (const auto& p : pairs) {
        if (p.value > 1e-12) {
            entries.push_back({p.value, p.vector});
            total += p.value;
        }
    }
    if (entries.empty()) throw ConsistencyError("ensemble_of: no positive eigenvalues");
    for (auto& e : entries) e.weight /= total;
    return Ensemble(std::move(entries));
}

} // namespace homdet
