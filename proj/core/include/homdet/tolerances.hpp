#pragma once

namespace homdet::tol {

// Structural checks (hermiticity, normalization, trace).
inline constexpr double kStructure = 1e-12;
// Spectral reconstructions (eigen/Schmidt/ensemble round trips).
inline constexpr double kSpectral = 1e-10;
// Eigenvalues in [-kPsdSlack, 0) count as zero when testing positivity.
inline constexpr double kPsdSlack = 1e-10;
// Bisection on the separability mixing parameter.
inline constexpr double kBisection = 1e-9;
// Residual gate for the separable-decomposition fit.
inline constexpr double kDecomposition = 1e-6;
// Terms below this amplitude are pruned after each circuit element.
inline constexpr double kAmplitudePrune = 1e-14;

} // namespace homdet::tol
