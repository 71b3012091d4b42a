#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

namespace homdet::rng {

/// SplitMix64. Small, fast, and fully specified, so streams are reproducible
/// across platforms and independent of the standard library's distributions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (cosine branch).
    double normal() {
        double u1 = 1.0 - uniform01(); // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// Decorrelated per-index substream of a master seed. Streams for distinct
/// indices are independent for practical purposes, which makes batched runs
/// independent of how trials are partitioned.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ ((index + 1) * 0xD1B54A32D192ED03ull));
    g.next();
    return g;
}

/// Haar-random unit vector in C^d.
inline Eigen::VectorXcd haar_vector(SplitMix64& g, int d) {
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) v(i) = std::complex<double>(g.normal(), g.normal());
    v.normalize();
    return v;
}

/// Random density matrix of the given rank (Ginibre construction).
inline Eigen::MatrixXcd ginibre_density(SplitMix64& g, int dim, int rank) {
    Eigen::MatrixXcd a(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < rank; ++k) a(i, k) = std::complex<double>(g.normal(), g.normal());
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace homdet::rng
