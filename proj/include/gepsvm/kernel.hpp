#pragma once

#include <span>
#include <string>

#include "gepsvm/matrix.hpp"

namespace gepsvm::kernel {

enum class Family { polynomial, gaussian_rbf, exponential_rbf, poly_rbf };

/// Kernel family plus its parameters. degree is real-valued; sigma and the
/// data dimension enter the RBF-style denominators.
struct KernelSpec {
    Family family = Family::gaussian_rbf;
    double degree = 1.0;
    double sigma = 1.0;
    std::size_t data_dim = 0;
};

bool uses_degree(Family f);
bool uses_sigma(Family f);

/// CLI/config token: poly | rbf | exprbf | polyrbf.
std::string family_token(Family f);
Family family_from_token(const std::string& token);

void validate(const KernelSpec& spec);

double kernel_value(const KernelSpec& spec, std::span<const double> x,
                    std::span<const double> y);

/// K(i,j) = kernel_value(spec, row i of X, row j of C).
Matrix kernel_matrix(const KernelSpec& spec, const Matrix& x, const Matrix& c);

}  // namespace gepsvm::kernel
