#pragma once

#include <vector>

#include "gepsvm/matrix.hpp"

namespace gepsvm::linalg {

struct EigenPair {
    double value = 0.0;
    Vector vector;  // unit two-norm
};

/// Lower-triangular L with L L' = S. Throws NotPositiveDefinite when a pivot
/// is not strictly positive.
Matrix cholesky(const Matrix& s);

/// Full symmetric eigendecomposition, pairs ascending by eigenvalue.
std::vector<EigenPair> sym_eig(const Matrix& s);

/// Largest eigenpair only. Lanczos with full reorthogonalization for larger
/// orders, dense decomposition as fallback; the residual is always verified.
EigenPair sym_eig_largest(const Matrix& s);

/// Minimizer of z'Gz / z'Hz for G symmetric positive definite and H symmetric
/// positive semidefinite. Returns the smallest generalized eigenvalue of
/// Gz = lambda Hz and its unit eigenvector. The problem is reduced through the
/// Cholesky factor of G so that a singular H never needs factoring.
EigenPair min_rayleigh(const Matrix& g, const Matrix& h);

/// Same operation with the denominator supplied in factored form H = F'F.
/// When F has fewer rows than columns the reduction works on the small
/// F-side Gram matrix, which is what the classifier training path uses.
EigenPair min_rayleigh_factored(const Matrix& g, const Matrix& f);

/// Solves L x = b for lower-triangular L.
Vector solve_lower(const Matrix& l, const Vector& b);
/// Solves L' x = b for lower-triangular L.
Vector solve_lower_transposed(const Matrix& l, const Vector& b);

}  // namespace gepsvm::linalg
