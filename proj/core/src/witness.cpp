#include "homdet/witness.hpp"

#include <cmath>

#include "homdet/nnls.hpp"
#include "homdet/rng.hpp"

namespace homdet {

Witness::Witness(Eigen::MatrixXcd matrix, std::vector<int> dims)
    : mat_(std::move(matrix)), dims_(std::move(dims)) {
    if (dims_.size() != 2 || dims_[0] != dims_[1])
        throw ValidationError("Witness: dims must be [d, d]");
    int d = dims_[0] * dims_[1];
    if (mat_.rows() != d || mat_.cols() != d)
        throw ValidationError("Witness: matrix size does not match dims");
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > tol::kStructure)
        throw ValidationError("Witness: not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > tol::kStructure ||
        std::abs(mat_.trace().imag()) > tol::kStructure)
        throw ValidationError("Witness: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
    lambda_min_ = es.eigenvalues()(0);
    if (lambda_min_ >= 0.0)
        throw ValidationError("Witness: no negative eigenvalue; not a witness");
}

double Witness::expectation(const DensityMatrix& rho) const {
    if (rho.dims() != dims_) throw ValidationError("Witness::expectation: dimension mismatch");
    return (mat_ * rho.matrix()).trace().real();
}

Witness projector_witness(const PureState& target) {
    if (target.dims().size() != 2 || target.dims()[0] != target.dims()[1])
        throw ValidationError("projector_witness: target must live on a d x d space");
    int d = target.dims()[0];
    auto sd = schmidt(target, d, d);
    double lmax = sd.coefficients(0);
    if (lmax >= 1.0 - tol::kStructure)
        throw ValidationError("projector_witness: target is a product state");
    int big_d = d * d;
    const auto& v = target.amplitudes();
    Eigen::MatrixXcd raw =
        lmax * lmax * Eigen::MatrixXcd::Identity(big_d, big_d) - v * v.adjoint();
    return Witness(raw / raw.trace().real(), target.dims());
}

ApproxWitness approximate(const Witness& w) {
    int big_d = w.dim();
    double lmin = w.lambda_min(); // < 0, enforced at construction
    double p_star = big_d * std::abs(lmin) / (1.0 + big_d * std::abs(lmin));
    Eigen::MatrixXcd m =
        (1.0 - p_star) * w.matrix() +
        (p_star / big_d) * Eigen::MatrixXcd::Identity(big_d, big_d);
    return ApproxWitness{w, p_star, DensityMatrix(std::move(m), w.dims())};
}

double reconstruct_expectation(double f_ave, double p_star, int d) {
    if (d < 2) throw ValidationError("reconstruct_expectation: d must be >= 2");
    if (!(p_star > 0.0) || !(p_star < 1.0))
        throw ValidationError("reconstruct_expectation: p_star must lie in (0, 1)");
    if (f_ave < -tol::kStructure || f_ave > 1.0 + tol::kStructure)
        throw ValidationError("reconstruct_expectation: f_ave out of [0, 1]");
    return (f_ave - p_star / (d * d)) / (1.0 - p_star);
}

namespace {

bool psd_within_slack(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -1e-12;
}

Eigen::MatrixXcd pencil(const Witness& w, double p) {
    int big_d = w.dim();
    return (1.0 - p) * w.matrix() +
           (p / big_d) * Eigen::MatrixXcd::Identity(big_d, big_d);
}

/// Structured single-system dictionary: computational basis plus all
/// two-level superpositions (|i>+-|j>)/sqrt2 and (|i>+-i|j>)/sqrt2.
/// For d = 2 this is exactly the three Pauli eigenbases.
std::vector<Eigen::VectorXcd> local_dictionary(int d) {
    std::vector<Eigen::VectorXcd> out;
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(i) = 1.0;
        out.push_back(v);
    }
    const double s = 1.0 / std::sqrt(2.0);
    const cxd phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (cxd ph : phases) {
                Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
                v(i) = s;
                v(j) = s * ph;
                out.push_back(v);
            }
    return out;
}

Eigen::VectorXd real_vec(const Eigen::MatrixXcd& m) {
    Eigen::VectorXd v(2 * m.size());
    Eigen::Index n = m.size();
    for (Eigen::Index k = 0; k < n; ++k) {
        v(k) = m(k / m.cols(), k % m.cols()).real();
        v(n + k) = m(k / m.cols(), k % m.cols()).imag();
    }
    return v;
}

} // namespace

SeparableApproxWitness separable_approximate(const Witness& w, double tolerance) {
    int da = w.dims()[0], db = w.dims()[1];
    SepMode mode = (da * db <= 6) ? SepMode::exact : SepMode::ppt_lower_bound;

    auto feasible = [&](double p) {
        Eigen::MatrixXcd m = pencil(w, p);
        return psd_within_slack(m) && psd_within_slack(partial_transpose(m, da, db, 1));
    };

    if (!feasible(1.0))
        throw ConsistencyError("separable_approximate: p = 1 endpoint infeasible");
    // p = 0 is infeasible since lambda_min(W) < 0 is a Witness invariant.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    double p_s = hi;
    return SeparableApproxWitness{w, p_s, DensityMatrix(pencil(w, p_s), w.dims()), mode,
                                  std::nullopt};
}

DecompositionResult find_separable_decomposition(const DensityMatrix& target,
                                                 int ensemble_size, std::uint64_t seed,
                                                 int restarts) {
    if (target.dims().size() != 2)
        throw ValidationError("find_separable_decomposition: target must be bipartite");
    int da = target.dims()[0], db = target.dims()[1];
    if (ensemble_size < 0) throw ValidationError("find_separable_decomposition: bad size");

    auto dict_a = local_dictionary(da);
    auto dict_b = local_dictionary(db);

    double best_residual = std::numeric_limits<double>::infinity();
    std::optional<SeparableDecomposition> best;

    for (int attempt = 0; attempt < std::max(restarts, 1); ++attempt) {
        std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> atoms;
        for (const auto& a : dict_a)
            for (const auto& b : dict_b) atoms.emplace_back(a, b);
        auto g = rng::substream(seed, static_cast<std::uint64_t>(attempt));
        for (int k = 0; k < ensemble_size; ++k)
            atoms.emplace_back(rng::haar_vector(g, da), rng::haar_vector(g, db));

        std::vector<Eigen::MatrixXcd> products;
        products.reserve(atoms.size());
        Eigen::MatrixXd design(2 * target.matrix().size(), atoms.size());
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            Eigen::MatrixXcd pa = atoms[k].first * atoms[k].first.adjoint();
            Eigen::MatrixXcd pb = atoms[k].second * atoms[k].second.adjoint();
            Eigen::MatrixXcd prod(da * db, da * db);
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < da; ++j)
                    prod.block(i * db, j * db, db, db) = pa(i, j) * pb;
            design.col(k) = real_vec(prod);
            products.push_back(std::move(prod));
        }

        Eigen::VectorXd weights = nnls(design, real_vec(target.matrix()));
        double total = weights.sum();
        if (total < 1e-9) continue;
        weights /= total;

        Eigen::MatrixXcd mixture = Eigen::MatrixXcd::Zero(da * db, da * db);
        for (std::size_t k = 0; k < atoms.size(); ++k)
            if (weights(k) > 1e-12) mixture += weights(k) * products[k];
        double residual = (mixture - target.matrix()).cwiseAbs().maxCoeff();

        if (residual < best_residual) {
            best_residual = residual;
            SeparableDecomposition dec;
            dec.residual = residual;
            for (std::size_t k = 0; k < atoms.size(); ++k)
                if (weights(k) > 1e-12)
                    dec.terms.push_back(
                        {weights(k),
                         DensityMatrix(atoms[k].first * atoms[k].first.adjoint(), {da}),
                         DensityMatrix(atoms[k].second * atoms[k].second.adjoint(), {db})});
            best = std::move(dec);
        }
        if (best_residual < tol::kDecomposition) break;
    }

    if (best_residual < tol::kDecomposition) return {best, best_residual};
    return {std::nullopt, best_residual};
}

bool attach_decomposition(SeparableApproxWitness& saew, int ensemble_size,
                          std::uint64_t seed, int restarts) {
    auto result = find_separable_decomposition(saew.matrix, ensemble_size, seed, restarts);
    if (!result.decomposition) return false;
    saew.decomposition = std::move(result.decomposition);
    return true;
}

double locc_expectation(const SeparableDecomposition& decomposition,
                        const DensityMatrix& rho) {
    if (decomposition.terms.empty())
        throw ValidationError("locc_expectation: empty decomposition");
    double acc = 0.0;
    for (const auto& term : decomposition.terms) {
        DensityMatrix prod = tensor(term.w_a, term.w_b);
        if (prod.dim() != rho.dim())
            throw ValidationError("locc_expectation: dimension mismatch");
        acc += term.weight * (prod.matrix() * rho.matrix()).trace().real();
    }
    return acc;
}

} // namespace homdet
