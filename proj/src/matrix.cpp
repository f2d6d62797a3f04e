#include "gepsvm/matrix.hpp"

#include <cmath>
#include <cstdlib>

namespace gepsvm {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw DimensionMismatch("from_rows: ragged row " + std::to_string(i));
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

bool Matrix::is_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

bool Matrix::is_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    double scale = 0.0;
    for (double v : data_) scale = std::max(scale, std::fabs(v));
    scale = std::max(scale, 1.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol * scale) return false;
    return true;
}

Vector Matrix::column_means() const {
    Vector mean(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) mean[j] += (*this)(i, j);
    for (double& v : mean) v /= static_cast<double>(rows_);
    return mean;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

Matrix Matrix::take_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(idx[i], j);
    return out;
}

Matrix Matrix::vstack(const Matrix& other) const {
    if (cols_ != other.cols_) throw DimensionMismatch("vstack: column counts differ");
    Matrix out(rows_ + other.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < other.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(rows_ + i, j) = other(i, j);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    const double* __restrict pa = a.data();
    const double* __restrict pb = b.data();
    const std::size_t n = a.size();
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 += pa[i] * pb[i];
        acc1 += pa[i + 1] * pb[i + 1];
        acc2 += pa[i + 2] * pb[i + 2];
        acc3 += pa[i + 3] * pb[i + 3];
    }
    for (; i < n; ++i) acc0 += pa[i] * pb[i];
    return (acc0 + acc1) + (acc2 + acc3);
}

double norm2(std::span<const double> v) {
    return std::sqrt(dot(v, v));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void normalize_in_place(Vector& v) {
    const double n = norm2(v);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

Vector matvec(const Matrix& m, std::span<const double> v) {
    if (v.size() != m.cols()) throw DimensionMismatch("matvec: size mismatch");
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), v);
    return out;
}

Matrix gram_columns(const Matrix& f) {
    const std::size_t k = f.cols();
    Matrix g(k, k);
    double* __restrict gp = g.data();
    // rank-4 updates keep four input rows in registers per pass
    std::size_t r = 0;
    for (; r + 4 <= f.rows(); r += 4) {
        const double* __restrict r0 = f.row(r).data();
        const double* __restrict r1 = f.row(r + 1).data();
        const double* __restrict r2 = f.row(r + 2).data();
        const double* __restrict r3 = f.row(r + 3).data();
        for (std::size_t a = 0; a < k; ++a) {
            const double f0 = r0[a], f1 = r1[a], f2 = r2[a], f3 = r3[a];
            double* __restrict out = gp + a * k + a;
            const double* __restrict i0 = r0 + a;
            const double* __restrict i1 = r1 + a;
            const double* __restrict i2 = r2 + a;
            const double* __restrict i3 = r3 + a;
            const std::size_t len = k - a;
            for (std::size_t b = 0; b < len; ++b)
                out[b] += f0 * i0[b] + f1 * i1[b] + f2 * i2[b] + f3 * i3[b];
        }
    }
    for (; r < f.rows(); ++r) {
        const double* __restrict row = f.row(r).data();
        for (std::size_t a = 0; a < k; ++a) {
            const double fa = row[a];
            double* __restrict out = gp + a * k + a;
            const double* __restrict in = row + a;
            const std::size_t len = k - a;
            for (std::size_t b = 0; b < len; ++b) out[b] += fa * in[b];
        }
    }
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < a; ++b) g(a, b) = g(b, a);
    return g;
}

Matrix gram_rows(const Matrix& f) {
    const std::size_t p = f.rows();
    Matrix g(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            const double s = dot(f.row(i), f.row(j));
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

}  // namespace gepsvm
