#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gepsvm/errors.hpp"

namespace gepsvm {

using Vector = std::vector<double>;

/// Dense real matrix, row-major storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    /// Builds a matrix from nested initializer-style data; throws on ragged rows.
    static Matrix from_rows(const std::vector<Vector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool is_finite() const;
    /// max |S - S'| <= tol * max(1, max |S|)
    bool is_symmetric(double tol = 1e-10) const;

    Vector column_means() const;
    double frobenius_norm() const;

    /// Rows of this matrix selected by index, in the given order.
    Matrix take_rows(const std::vector<std::size_t>& idx) const;
    /// Vertical stack [this; other]; column counts must agree.
    Matrix vstack(const Matrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

// -- small dense kernels shared by the numeric modules --

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double squared_distance(std::span<const double> a, std::span<const double> b);
void normalize_in_place(Vector& v);

Vector matvec(const Matrix& m, std::span<const double> v);

/// F'F for a p-by-k matrix F: the k-by-k Gram matrix over columns.
Matrix gram_columns(const Matrix& f);
/// F F' for a p-by-k matrix F: the p-by-p Gram matrix over rows.
Matrix gram_rows(const Matrix& f);

}  // namespace gepsvm
