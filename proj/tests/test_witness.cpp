#include <doctest.h>

#include "homdet/hom.hpp"
#include "homdet/witness.hpp"
#include "test_helpers.hpp"

using namespace homdet;
using testutil::basis_state;
using testutil::bell_phi_plus;

namespace {

Witness standard_bell_witness() { return projector_witness(bell_phi_plus()); }

DensityMatrix bell_orthocomplement() {
    auto phi = bell_phi_plus();
    Eigen::MatrixXcd m = (Eigen::MatrixXcd::Identity(4, 4) -
                          phi.amplitudes() * phi.amplitudes().adjoint()) /
                         3.0;
    return DensityMatrix(m, {2, 2});
}

} // namespace

TEST_CASE("projector_witness: Bell target gives I/2 - |Phi+><Phi+|") {
    auto w = standard_bell_witness();
    auto phi = bell_phi_plus();
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(4, 4) / 2.0 -
                                phi.amplitudes() * phi.amplitudes().adjoint();
    CHECK((w.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(w.expectation(DensityMatrix::from_pure(phi)) ==
          doctest::Approx(-0.5).epsilon(1e-12));
    auto z00 = DensityMatrix::from_pure(tensor(basis_state(2, 0), basis_state(2, 0)));
    CHECK(std::abs(w.expectation(z00)) < 1e-14);

    CHECK_THROWS_AS(projector_witness(tensor(basis_state(2, 0), basis_state(2, 0))),
                    ValidationError);
}

TEST_CASE("witness soundness: nonnegative on random product states") {
    auto w = standard_bell_witness();
    auto g = rng::substream(21, 0);
    for (int i = 0; i < 10000; ++i) {
        auto prod = testutil::random_product_pure(g, 2, 2);
        CHECK(w.expectation(DensityMatrix::from_pure(prod)) >= -1e-10);
    }
}

TEST_CASE("approximate: closed form p* and the Bell AEW") {
    auto aew = approximate(standard_bell_witness());
    CHECK(aew.p_star == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK((aew.matrix.matrix() - bell_orthocomplement().matrix()).cwiseAbs().maxCoeff() <
          1e-12);
    // minimal p*: the spectrum bottom touches zero
    auto pairs = eigendecompose(aew.matrix.matrix());
    CHECK(pairs[0].value > -1e-10);
    CHECK(pairs[0].value < 1e-8);
}

TEST_CASE("approximate: p* -> 0 as the witness becomes barely negative") {
    auto phi = bell_phi_plus();
    Eigen::MatrixXcd proj = phi.amplitudes() * phi.amplitudes().adjoint();
    auto barely = [&](double eps) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4) / 4.0 -
                             eps * (proj - Eigen::MatrixXcd::Identity(4, 4) / 4.0);
        return approximate(Witness(m, {2, 2})).p_star;
    };
    // lambda_min = 1/4 - 3 eps/4; negative once eps > 1/3
    double p_small = barely(1.0 / 3.0 + 1e-4);
    double p_large = barely(1.0 / 3.0 + 1e-2);
    CHECK(p_small < p_large);
    CHECK(p_small < 1e-3);
}

TEST_CASE("approximate: d=3 analogue cross-checked by bisection") {
    auto phi3 = bell_phi_plus(3);
    auto w = projector_witness(phi3);
    auto aew = approximate(w);

    // independent oracle: bisect the minimal p with lambda_min >= 0
    auto lambda_min_at = [&](double p) {
        Eigen::MatrixXcd m = (1.0 - p) * w.matrix() +
                             (p / 9.0) * Eigen::MatrixXcd::Identity(9, 9);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (lambda_min_at(mid) >= 0.0 ? hi : lo) = mid;
    }
    CHECK(aew.p_star == doctest::Approx(hi).epsilon(1e-9));

    Eigen::MatrixXcd psd = Eigen::MatrixXcd::Identity(9, 9) / 9.0;
    CHECK_THROWS_AS(Witness(psd, {3, 3}), ValidationError); // no negative eigenvalue
}

TEST_CASE("reconstruct_expectation: affine map fixed points") {
    CHECK(reconstruct_expectation(0.0, 2.0 / 3.0, 2) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(reconstruct_expectation(1.0 / 6.0, 2.0 / 3.0, 2) ==
          doctest::Approx(0.0).epsilon(1e-14));
    for (double p : {0.1, 0.5, 0.9})
        CHECK(std::abs(reconstruct_expectation(p / 4.0, p, 2)) < 1e-14);
    CHECK_THROWS_AS(reconstruct_expectation(0.5, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(reconstruct_expectation(-0.5, 0.5, 2), ValidationError);
}

TEST_CASE("round trip: reconstructed expectation equals the direct trace") {
    auto g = rng::substream(22, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        auto w = testutil::random_witness(g, 2);
        auto rho = testutil::random_density(g, 4, 1 + static_cast<int>(g.next() % 4), {2, 2});
        auto aew = approximate(w);
        double direct = w.expectation(rho);
        double rebuilt =
            reconstruct_expectation(overlap(rho, aew.matrix), aew.p_star, 2);
        CHECK(std::abs(direct - rebuilt) < 1e-10);
    }
}

TEST_CASE("minimality of p*: an epsilon less leaves a negative eigenvalue") {
    auto g = rng::substream(23, 0);
    const double eps = 1e-6;
    for (int rep = 0; rep < 25; ++rep) {
        auto w = (rep == 0) ? standard_bell_witness() : testutil::random_witness(g, 2);
        double p = approximate(w).p_star - eps;
        Eigen::MatrixXcd m = (1.0 - p) * w.matrix() +
                             (p / 4.0) * Eigen::MatrixXcd::Identity(4, 4);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) < -1e-12);
    }
}

TEST_CASE("separable_approximate: Bell witness saturates p_s = p*") {
    auto saew = separable_approximate(standard_bell_witness());
    CHECK(saew.mode == SepMode::exact);
    CHECK(std::abs(saew.p_s - 2.0 / 3.0) < 1e-8);

    // partial transpose of the SAEW matrix: (I - SWAP/2)/3, eigenvalues 1/6, 1/2
    auto pt = partial_transpose(saew.matrix, 1);
    auto spectrum = eigendecompose(pt);
    CHECK(spectrum[0].value == doctest::Approx(1.0 / 6.0).epsilon(1e-7));
    CHECK(spectrum[3].value == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("separable_approximate: p_s >= p* for random witnesses") {
    auto g = rng::substream(24, 0);
    for (int rep = 0; rep < 40; ++rep) {
        auto w = testutil::random_witness(g, 2);
        auto saew = separable_approximate(w);
        CHECK(saew.p_s >= approximate(w).p_star - 1e-9);
        CHECK(saew.mode == SepMode::exact);
    }
    auto w3 = projector_witness(bell_phi_plus(3));
    CHECK(separable_approximate(w3).mode == SepMode::ppt_lower_bound);
}

TEST_CASE("find_separable_decomposition: identity, boundary state, failure") {
    auto identity = testutil::maximally_mixed(4, {2, 2});
    auto r1 = find_separable_decomposition(identity, 64, 7);
    REQUIRE(r1.decomposition.has_value());
    CHECK(r1.decomposition->residual < 1e-6);
    double total = 0.0;
    Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(4, 4);
    for (const auto& t : r1.decomposition->terms) {
        total += t.weight;
        mix += t.weight * tensor(t.w_a, t.w_b).matrix();
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((mix - identity.matrix()).cwiseAbs().maxCoeff() < 1e-6);

    auto r2 = find_separable_decomposition(bell_orthocomplement(), 64, 7);
    REQUIRE(r2.decomposition.has_value());
    CHECK(r2.decomposition->residual < 1e-6);

    auto entangled = DensityMatrix::from_pure(bell_phi_plus());
    auto r3 = find_separable_decomposition(entangled, 64, 7, 2);
    CHECK(!r3.decomposition.has_value());
    CHECK(r3.best_residual > 1e-3); // far from any separable mixture
}

TEST_CASE("locc_expectation: equals the overlap through the decomposition") {
    auto r = find_separable_decomposition(bell_orthocomplement(), 64, 7);
    REQUIRE(r.decomposition.has_value());
    const auto& dec = *r.decomposition;

    auto phi = DensityMatrix::from_pure(bell_phi_plus());
    CHECK(std::abs(locc_expectation(dec, phi)) < 1e-6);
    auto z00 = DensityMatrix::from_pure(tensor(basis_state(2, 0), basis_state(2, 0)));
    CHECK(locc_expectation(dec, z00) == doctest::Approx(1.0 / 6.0).epsilon(1e-6));

    auto id_dec = find_separable_decomposition(testutil::maximally_mixed(4, {2, 2}), 64, 7);
    REQUIRE(id_dec.decomposition.has_value());
    auto g = rng::substream(25, 0);
    auto rho = testutil::random_density(g, 4, 4, {2, 2});
    CHECK(locc_expectation(*id_dec.decomposition, rho) ==
          doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("LOCC consistency across decomposed SAEWs") {
    auto g = rng::substream(26, 0);
    int decomposed = 0;
    for (int rep = 0; rep < 10; ++rep) {
        auto w = (rep == 0) ? standard_bell_witness() : testutil::random_witness(g, 2);
        auto saew = separable_approximate(w);
        if (!attach_decomposition(saew, 128, 100 + rep)) continue;
        ++decomposed;
        double allowance =
            std::max(tol::kDecomposition, 4.0 * saew.decomposition->residual * 4.0);
        for (int k = 0; k < 5; ++k) {
            auto rho = testutil::random_density(g, 4, 4, {2, 2});
            CHECK(std::abs(locc_expectation(*saew.decomposition, rho) -
                           overlap(saew.matrix, rho)) < allowance);
        }
    }
    CHECK(decomposed >= 1); // the Bell SAEW always decomposes
}
