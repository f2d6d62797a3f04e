#include "gepsvm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork,
             int* info);
}

namespace gepsvm::linalg {

namespace {

// Four-way accumulated dot product; the hot triangular loops below live on it.
inline double dot_n(const double* __restrict a, const double* __restrict b, std::size_t n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        acc0 += a[k] * b[k];
        acc1 += a[k + 1] * b[k + 1];
        acc2 += a[k + 2] * b[k + 2];
        acc3 += a[k + 3] * b[k + 3];
    }
    for (; k < n; ++k) acc0 += a[k] * b[k];
    return (acc0 + acc1) + (acc2 + acc3);
}

void require_square_symmetric(const Matrix& s, const char* who) {
    if (s.rows() != s.cols()) throw DimensionMismatch(std::string(who) + ": matrix not square");
    if (s.empty()) throw DimensionMismatch(std::string(who) + ": empty matrix");
    if (!s.is_finite()) throw NonFiniteInput(std::string(who) + ": non-finite entries");
    if (!s.is_symmetric()) throw Error(std::string(who) + ": matrix not symmetric");
}

// LAPACK divide-and-conquer driver. Input is symmetric so the row/column
// ordering of the buffer does not matter; eigenvectors come back in columns.
void dense_sym_eig(const Matrix& s, Vector& values, Matrix& vectors_as_rows) {
    const int n = static_cast<int>(s.rows());
    Vector a(s.data(), s.data() + static_cast<std::size_t>(n) * n);
    values.assign(n, 0.0);

    int lwork = -1, liwork = -1, info = 0;
    double work_query = 0.0;
    int iwork_query = 0;
    dsyevd_("V", "L", &n, a.data(), &n, values.data(), &work_query, &lwork, &iwork_query,
            &liwork, &info);
    lwork = static_cast<int>(work_query);
    liwork = iwork_query;
    Vector work(static_cast<std::size_t>(std::max(lwork, 1)));
    std::vector<int> iwork(static_cast<std::size_t>(std::max(liwork, 1)));
    dsyevd_("V", "L", &n, a.data(), &n, values.data(), work.data(), &lwork, iwork.data(),
            &liwork, &info);
    if (info != 0)
        throw Error("sym_eig: LAPACK dsyevd failed with info=" + std::to_string(info));

    // Column i of the LAPACK buffer is eigenvector i; store it as row i.
    vectors_as_rows = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            vectors_as_rows(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                a[static_cast<std::size_t>(i) * n + j];
}

// Lanczos iteration for the largest eigenpair, full reorthogonalization.
// Returns false when the Ritz residual never met the tolerance.
bool lanczos_largest(const Matrix& s, EigenPair& out) {
    const std::size_t n = s.rows();
    const double s_norm = s.frobenius_norm();
    if (s_norm == 0.0) {
        out.value = 0.0;
        out.vector.assign(n, 0.0);
        out.vector[0] = 1.0;
        return true;
    }

    const std::size_t max_iter = std::min<std::size_t>(n, 200);
    const double tol = 1e-11;

    std::vector<Vector> basis;
    basis.reserve(max_iter);
    Vector alpha, beta;
    Vector v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(1.0 + static_cast<double>(i));
    normalize_in_place(v);

    auto try_ritz = [&](bool force) -> bool {
        const std::size_t m = alpha.size();
        Matrix t(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) {
                t(i, i + 1) = beta[i];
                t(i + 1, i) = beta[i];
            }
        }
        Vector values;
        Matrix vectors;
        dense_sym_eig(t, values, vectors);
        const std::size_t top = m - 1;
        const double theta = values[top];
        // Ritz residual: |beta_m| times the last component of the T eigenvector.
        const double resid = std::fabs(beta[m - 1] * vectors(top, m - 1));
        if (resid <= tol * s_norm || force) {
            out.value = theta;
            out.vector.assign(n, 0.0);
            for (std::size_t q = 0; q < m; ++q) {
                const double c = vectors(top, q);
                for (std::size_t i = 0; i < n; ++i) out.vector[i] += c * basis[q][i];
            }
            normalize_in_place(out.vector);
            return resid <= tol * s_norm;
        }
        return false;
    };

    for (std::size_t j = 0; j < max_iter; ++j) {
        basis.push_back(v);
        // w = S v
        for (std::size_t i = 0; i < n; ++i) w[i] = dot(s.row(i), v);
        const double a = dot(w, v);
        alpha.push_back(a);
        for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i];
        if (j > 0) {
            const double b_prev = beta[j - 1];
            for (std::size_t i = 0; i < n; ++i) w[i] -= b_prev * basis[j - 1][i];
        }
        // Two reorthogonalization passes keep the basis numerically orthogonal.
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& q : basis) {
                const double d = dot(w, q);
                for (std::size_t i = 0; i < n; ++i) w[i] -= d * q[i];
            }
        const double b = norm2(w);
        beta.push_back(b);
        const bool breakdown = b <= 1e-14 * s_norm;
        const std::size_t m = j + 1;
        if (breakdown || m == max_iter || m == n || (m >= 8 && m % 4 == 0)) {
            if (try_ritz(breakdown || m == n)) return true;
            if (breakdown || m == n) return true;  // invariant subspace: Ritz value exact
            if (m == max_iter) return false;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
    }
    return false;
}

}  // namespace

Matrix cholesky(const Matrix& s) {
    require_square_symmetric(s, "cholesky");
    const std::size_t n = s.rows();
    Matrix l(n, n);
    double* __restrict lp = l.data();
    for (std::size_t j = 0; j < n; ++j) {
        const double* __restrict rj = lp + j * n;
        const double d = s(j, j) - dot_n(rj, rj, j);
        if (!(d > 0.0)) throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j));
        const double ljj = std::sqrt(d);
        lp[j * n + j] = ljj;
        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i)
            lp[i * n + j] = (s(i, j) - dot_n(lp + i * n, rj, j)) * inv;
    }
    return l;
}

std::vector<EigenPair> sym_eig(const Matrix& s) {
    require_square_symmetric(s, "sym_eig");
    Vector values;
    Matrix vectors;
    dense_sym_eig(s, values, vectors);
    std::vector<EigenPair> pairs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        pairs[i].value = values[i];
        pairs[i].vector.assign(vectors.row(i).begin(), vectors.row(i).end());
    }
    return pairs;
}

EigenPair sym_eig_largest(const Matrix& s) {
    require_square_symmetric(s, "sym_eig_largest");
    const std::size_t n = s.rows();
    if (n > 32) {
        EigenPair pair;
        if (lanczos_largest(s, pair)) {
            // Accept only when the actual residual confirms convergence.
            const Vector sv = matvec(s, pair.vector);
            double resid = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = sv[i] - pair.value * pair.vector[i];
                resid += d * d;
            }
            if (std::sqrt(resid) <= 1e-9 * (1.0 + s.frobenius_norm())) return pair;
        }
    }
    Vector values;
    Matrix vectors;
    dense_sym_eig(s, values, vectors);
    EigenPair pair;
    pair.value = values.back();
    pair.vector.assign(vectors.row(n - 1).begin(), vectors.row(n - 1).end());
    return pair;
}

Vector solve_lower(const Matrix& l, const Vector& b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw DimensionMismatch("solve_lower: size mismatch");
    Vector x(b);
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        const double* row = &l(i, 0);
        for (std::size_t k = 0; k < i; ++k) v -= row[k] * x[k];
        x[i] = v / l(i, i);
    }
    return x;
}

Vector solve_lower_transposed(const Matrix& l, const Vector& b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw DimensionMismatch("solve_lower_transposed: size mismatch");
    Vector x(b);
    for (std::size_t ii = n; ii-- > 0;) {
        double v = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x[k];
        x[ii] = v / l(ii, ii);
    }
    return x;
}

namespace {

Matrix cholesky_with_ridge_retry(const Matrix& g) {
    try {
        return cholesky(g);
    } catch (const NotPositiveDefinite&) {
        // delta > 0 keeps G positive definite in exact arithmetic; a single
        // trace-scaled ridge absorbs the floating-point edge case.
        const std::size_t n = g.rows();
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += g(i, i);
        Matrix ridged = g;
        const double ridge = 1e-10 * trace / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) ridged(i, i) += ridge;
        return cholesky(ridged);
    }
}

// Rows of W solve W L' = F, i.e. one forward substitution per row of F.
// Four rows advance together so each L row is loaded once for all of them.
Matrix right_solve_lower_transposed(const Matrix& f, const Matrix& l) {
    const std::size_t k = l.rows();
    Matrix w(f.rows(), k);
    const double* __restrict lp = l.data();
    std::size_t r = 0;
    for (; r + 4 <= f.rows(); r += 4) {
        const double* __restrict i0 = &f(r, 0);
        const double* __restrict i1 = &f(r + 1, 0);
        const double* __restrict i2 = &f(r + 2, 0);
        const double* __restrict i3 = &f(r + 3, 0);
        double* __restrict o0 = &w(r, 0);
        double* __restrict o1 = &w(r + 1, 0);
        double* __restrict o2 = &w(r + 2, 0);
        double* __restrict o3 = &w(r + 3, 0);
        for (std::size_t j = 0; j < k; ++j) {
            const double* __restrict lr = lp + j * k;
            double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
            for (std::size_t q = 0; q < j; ++q) {
                const double lq = lr[q];
                a0 += lq * o0[q];
                a1 += lq * o1[q];
                a2 += lq * o2[q];
                a3 += lq * o3[q];
            }
            const double inv = 1.0 / lr[j];
            o0[j] = (i0[j] - a0) * inv;
            o1[j] = (i1[j] - a1) * inv;
            o2[j] = (i2[j] - a2) * inv;
            o3[j] = (i3[j] - a3) * inv;
        }
    }
    for (; r < f.rows(); ++r) {
        const double* __restrict in = &f(r, 0);
        double* __restrict out = &w(r, 0);
        for (std::size_t j = 0; j < k; ++j)
            out[j] = (in[j] - dot_n(lp + j * k, out, j)) / lp[j * k + j];
    }
    return w;
}

EigenPair map_back(const Matrix& l, double mu_max, const Vector& reduced_vec) {
    if (!(mu_max > 0.0) || !std::isfinite(mu_max))
        throw DegenerateDenominator("min_rayleigh: denominator matrix is numerically zero");
    EigenPair result;
    result.value = 1.0 / mu_max;
    result.vector = solve_lower_transposed(l, reduced_vec);
    normalize_in_place(result.vector);
    return result;
}

}  // namespace

EigenPair min_rayleigh(const Matrix& g, const Matrix& h) {
    require_square_symmetric(g, "min_rayleigh");
    require_square_symmetric(h, "min_rayleigh");
    if (g.rows() != h.rows()) throw DimensionMismatch("min_rayleigh: order mismatch");
    if (h.frobenius_norm() <= 1e-15 * g.frobenius_norm())
        throw DegenerateDenominator("min_rayleigh: denominator matrix is numerically zero");

    const std::size_t n = g.rows();
    const Matrix l = cholesky_with_ridge_retry(g);

    // R = inv(L) H inv(L'); the smallest eigenvalue of (G, H) is the
    // reciprocal of R's largest eigenvalue.
    Matrix x(n, n);  // X = inv(L) H, column by column
    for (std::size_t j = 0; j < n; ++j) {
        Vector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = h(i, j);
        col = solve_lower(l, col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
    }
    Matrix r = right_solve_lower_transposed(x, l);
    // enforce exact symmetry before the eigensolve
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (r(i, j) + r(j, i));
            r(i, j) = v;
            r(j, i) = v;
        }

    const EigenPair top = sym_eig_largest(r);
    return map_back(l, top.value, top.vector);
}

EigenPair min_rayleigh_factored(const Matrix& g, const Matrix& f) {
    require_square_symmetric(g, "min_rayleigh_factored");
    if (f.cols() != g.rows())
        throw DimensionMismatch("min_rayleigh_factored: factor width must match order");
    if (f.rows() == 0 || f.frobenius_norm() <= 1e-15)
        throw DegenerateDenominator("min_rayleigh_factored: denominator factor is zero");
    if (f.rows() >= g.rows()) return min_rayleigh(g, gram_columns(f));

    const Matrix l = cholesky_with_ridge_retry(g);
    // W = F inv(L'); the nonzero spectrum of inv(L) F'F inv(L') equals that
    // of the small matrix W W'.
    const Matrix w = right_solve_lower_transposed(f, l);
    const Matrix small = gram_rows(w);
    const EigenPair top = sym_eig_largest(small);

    // Lift the small-side eigenvector: v = W' y, unit-normalized.
    Vector v(g.rows(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        const double c = top.vector[r];
        const double* row = &w(r, 0);
        for (std::size_t j = 0; j < g.rows(); ++j) v[j] += c * row[j];
    }
    normalize_in_place(v);
    return map_back(l, top.value, v);
}

}  // namespace gepsvm::linalg
