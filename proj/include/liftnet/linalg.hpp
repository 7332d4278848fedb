#pragma once

#include <vector>

#include "liftnet/matrix.hpp"

namespace liftnet::linalg {

/// Eigendecomposition S = Q diag(values) Qᵀ with eigenvalues in descending order.
struct EigResult {
    Matrix q;
    Vec values;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Reconstruction residual ≤ 1e-10·max(1, ‖S‖_F); QᵀQ = I to the same tolerance.
/// Throws std::invalid_argument on non-finite input, std::runtime_error if the
/// sweep limit is hit before the off-diagonal mass drops below threshold.
EigResult sym_eig(const SymMatrix& s);

enum class SpectralFn { sqrt, log, exp, inv_sqrt };

/// Q f(Λ) Qᵀ for a scalar function applied to the spectrum.
/// sqrt/log/inv_sqrt require all eigenvalues > 0; std::domain_error otherwise,
/// reporting the smallest eigenvalue.
SymMatrix spectral_fn(const SymMatrix& s, SpectralFn fn);

/// Cached intermediates of one scaling-and-squaring evaluation, enough to
/// run the exact series-differentiated backward pass.
struct ExpmWorkspace {
    int squarings = 0;              // scale exponent s, M = A / 2^s
    std::vector<Matrix> powers;     // M^0 .. M^K
    std::vector<double> coeffs;     // 1/k! for k = 0 .. K
    std::vector<Matrix> presquare;  // X_0 = Σ M^k/k!, X_{i+1} = X_i², i < s
    Matrix value;                   // exp(A)
};

/// General (non-symmetric) matrix exponential by scaling-and-squaring of a
/// truncated Taylor series; the scaled norm is brought below 1/2 first.
/// exp(0) = I exactly. The result is always invertible.
Matrix matrix_exp(const Matrix& a);

/// Same evaluation, retaining the intermediates for matrix_exp_adjoint.
ExpmWorkspace matrix_exp_workspace(const Matrix& a);

/// Reverse-mode derivative: given Ḡ = ∂L/∂exp(A), returns ∂L/∂A.
/// Differentiates every squaring step by the product rule and every series
/// term exactly, so the gradient matches the forward evaluation to roundoff.
Matrix matrix_exp_adjoint(const ExpmWorkspace& ws, const Matrix& gbar);

/// Smallest singular value λ*(A) via the eigendecomposition of AᵀA
/// (A may be rectangular). Clamped at 0; zero iff A is rank-deficient.
double smallest_singular_value(const Matrix& a);

/// Largest singular value, same route; used for relative rank tolerances.
double largest_singular_value(const Matrix& a);

}  // namespace liftnet::linalg
