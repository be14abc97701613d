#pragma once

#include "phasefit/types.hpp"

namespace phasefit {

// Matrix exponential exp(A) via degree-13 Pade approximation with
// scaling-and-squaring; A is scaled so that ||A/2^k||_1 <= 0.5 before the
// rational approximation is applied.
Matrix mat_exp(const Matrix& a);

// A^theta. Positive integer theta uses repeated multiplication; otherwise the
// power is formed through the eigendecomposition V diag(lambda_i^theta) V^-1.
// Requires a diagonalizable A; an eigenbasis with 1-norm condition estimate
// above `cond_cap` or an imaginary residue above 1e-9 raises numeric_error.
Matrix mat_power(const Matrix& a, double theta, double cond_cap = 1e12);

// Kronecker product A (x) B, order = order(A) * order(B).
Matrix kron_product(const Matrix& a, const Matrix& b);

// Kronecker sum A (+) B = A (x) I + I (x) B.
Matrix kron_sum(const Matrix& a, const Matrix& b);

// Solve A x = b. Singular-to-tolerance A raises numeric_error.
Vector lin_solve(const Matrix& a, const Vector& b);
Matrix lin_solve(const Matrix& a, const Matrix& b);

}  // namespace phasefit
