#include "gepsvm/kernel.hpp"

#include <cmath>

namespace gepsvm::kernel {

bool uses_degree(Family f) {
    return f == Family::polynomial || f == Family::poly_rbf;
}

bool uses_sigma(Family f) {
    return f != Family::polynomial;
}

std::string family_token(Family f) {
    switch (f) {
        case Family::polynomial: return "poly";
        case Family::gaussian_rbf: return "rbf";
        case Family::exponential_rbf: return "exprbf";
        case Family::poly_rbf: return "polyrbf";
    }
    return "rbf";
}

Family family_from_token(const std::string& token) {
    if (token == "poly") return Family::polynomial;
    if (token == "rbf") return Family::gaussian_rbf;
    if (token == "exprbf") return Family::exponential_rbf;
    if (token == "polyrbf") return Family::poly_rbf;
    throw Error("unknown kernel token '" + token + "' (expected poly|rbf|exprbf|polyrbf)");
}

void validate(const KernelSpec& spec) {
    if (spec.data_dim < 1) throw Error("kernel: data_dim must be >= 1");
    if (uses_degree(spec.family) && !(spec.degree > 0.0))
        throw Error("kernel: degree must be positive");
    if (uses_sigma(spec.family) && !(spec.sigma > 0.0))
        throw Error("kernel: sigma must be positive");
}

namespace {

inline double finite_or_throw(double v) {
    if (!std::isfinite(v)) throw NonFiniteResult("kernel value is not finite");
    return v;
}

inline double eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    const double dim = static_cast<double>(spec.data_dim);
    switch (spec.family) {
        case Family::polynomial:
            return finite_or_throw(std::pow(dot(x, y) + 1.0, spec.degree));
        case Family::gaussian_rbf:
            return std::exp(-squared_distance(x, y) / (2.0 * spec.sigma * spec.sigma));
        case Family::exponential_rbf:
            return std::exp(-std::sqrt(squared_distance(x, y)) / (dim * spec.sigma));
        case Family::poly_rbf:
            return finite_or_throw(std::pow(
                1.0 + std::exp(-squared_distance(x, y) / (dim * spec.sigma)), spec.degree));
    }
    throw Error("kernel: unknown family");
}

}  // namespace

double kernel_value(const KernelSpec& spec, std::span<const double> x,
                    std::span<const double> y) {
    validate(spec);
    if (x.size() != y.size() || x.size() != spec.data_dim)
        throw DimensionMismatch("kernel_value: input length must equal data_dim");
    return eval(spec, x, y);
}

Matrix kernel_matrix(const KernelSpec& spec, const Matrix& x, const Matrix& c) {
    validate(spec);
    if (x.cols() != c.cols() || x.cols() != spec.data_dim)
        throw DimensionMismatch("kernel_matrix: column counts must equal data_dim");
    Matrix k(x.rows(), c.rows());
    if (&x == &c) {
        // K(X, X') is symmetric entry-for-entry, so mirror the upper triangle.
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const auto xi = x.row(i);
            for (std::size_t j = i; j < c.rows(); ++j) {
                const double v = eval(spec, xi, c.row(j));
                k(i, j) = v;
                k(j, i) = v;
            }
        }
        return k;
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = 0; j < c.rows(); ++j) k(i, j) = eval(spec, xi, c.row(j));
    }
    return k;
}

}  // namespace gepsvm::kernel
