#pragma once

namespace drfsim::tol {

// Structural identities: trace, hermiticity, projector algebra.
inline constexpr double kStructural = 1e-12;
// Comparisons against an independent oracle after long accumulations.
inline constexpr double kOracle = 1e-10;
// Smallest eigenvalue a valid density matrix may show from rounding.
inline constexpr double kPositivity = 1e-10;
// Allowed probability excursion outside [0, 1] from rounding.
inline constexpr double kProbability = 1e-12;
// Quadrature must reproduce the normalization to this before we trust it.
inline constexpr double kQuadratureNormalization = 1e-8;
// Negative dip allowed in a reconstructed (truncated) distribution.
inline constexpr double kTruncationPositivity = 1e-6;
// KKT tolerance on bound-set gradients in the NNLS solver.
inline constexpr double kKkt = 1e-10;
// NNLS residual above which a state is reported as not decomposable.
inline constexpr double kDecomposabilityResidual = 1e-6;
// Relative change of the residual allowed under grid refinement.
inline constexpr double kRefinementStability = 0.10;

}  // namespace drfsim::tol
