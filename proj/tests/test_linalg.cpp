#include <doctest.h>

#include <cmath>
#include <random>

#include "gepsvm/linalg.hpp"
#include "oracles.hpp"

using namespace gepsvm;
using oracles::direction_angle;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

double residual(const Matrix& g, const Matrix& h, const linalg::EigenPair& p) {
    const Vector gz = matvec(g, p.vector);
    const Vector hz = matvec(h, p.vector);
    double r = 0.0;
    for (std::size_t i = 0; i < gz.size(); ++i) {
        const double d = gz[i] - p.value * hz[i];
        r += d * d;
    }
    return std::sqrt(r);
}

}  // namespace

TEST_CASE("cholesky identity") {
    const Matrix l = linalg::cholesky(Matrix::identity(2));
    CHECK(l(0, 0) == doctest::Approx(1.0));
    CHECK(l(1, 1) == doctest::Approx(1.0));
    CHECK(l(0, 1) == 0.0);
    CHECK(l(1, 0) == 0.0);
}

TEST_CASE("cholesky of [[4,2],[2,5]]") {
    const Matrix l = linalg::cholesky(mat2(4, 2, 2, 5));
    CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(l(0, 1) == 0.0);
    // direct multiplication oracle
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 2; ++k) s += l(i, k) * l(j, k);
            CHECK(s == doctest::Approx(mat2(4, 2, 2, 5)(i, j)).epsilon(1e-12));
        }
}

TEST_CASE("cholesky rejects indefinite input") {
    CHECK_THROWS_AS(linalg::cholesky(mat2(1, 2, 2, 1)), NotPositiveDefinite);
}

TEST_CASE("cholesky round-trip on random SPD matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const Matrix s = oracles::random_spd(n, rng);
        const Matrix l = linalg::cholesky(s);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k) v += l(i, k) * l(j, k);
                const double d = v - s(i, j);
                err += d * d;
            }
        CHECK(std::sqrt(err) <= 1e-10 * s.frobenius_norm());
    }
}

TEST_CASE("sym_eig on a diagonal matrix") {
    Matrix s(3, 3);
    s(0, 0) = 3;
    s(1, 1) = 1;
    s(2, 2) = 2;
    const auto pairs = linalg::sym_eig(s);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].value == doctest::Approx(1.0));
    CHECK(pairs[1].value == doctest::Approx(2.0));
    CHECK(pairs[2].value == doctest::Approx(3.0));
    CHECK(std::fabs(pairs[0].vector[1]) == doctest::Approx(1.0));
    CHECK(std::fabs(pairs[1].vector[2]) == doctest::Approx(1.0));
    CHECK(std::fabs(pairs[2].vector[0]) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig of [[2,1],[1,2]] matches the characteristic polynomial") {
    // det(S - x I) = x^2 - 4x + 3, roots 1 and 3
    const auto pairs = linalg::sym_eig(mat2(2, 1, 1, 2));
    CHECK(pairs[0].value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pairs[1].value == doctest::Approx(3.0).epsilon(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(direction_angle(pairs[0].vector, {inv_sqrt2, -inv_sqrt2}) < 1e-10);
    CHECK(direction_angle(pairs[1].vector, {inv_sqrt2, inv_sqrt2}) < 1e-10);
}

TEST_CASE("sym_eig scalar case") {
    Matrix s(1, 1);
    s(0, 0) = -4.25;
    const auto pairs = linalg::sym_eig(s);
    CHECK(pairs[0].value == doctest::Approx(-4.25));
    CHECK(std::fabs(pairs[0].vector[0]) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig rejects non-finite input") {
    Matrix s(2, 2);
    s(0, 0) = std::nan("");
    s(1, 1) = 1.0;
    CHECK_THROWS_AS(linalg::sym_eig(s), NonFiniteInput);
}

TEST_CASE("sym_eig reconstruction and orthogonality") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial;
        Matrix s = oracles::random_psd(n, n + 2, rng);
        const auto pairs = linalg::sym_eig(s);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    v += pairs[k].vector[i] * pairs[k].value * pairs[k].vector[j];
                const double d = v - s(i, j);
                err += d * d;
            }
        CHECK(std::sqrt(err) <= 1e-7 * s.frobenius_norm());
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                CHECK(std::fabs(dot(pairs[a].vector, pairs[b].vector)) < 1e-8);
    }
}

TEST_CASE("sym_eig_largest agrees with the full decomposition") {
    std::mt19937_64 rng(23);
    for (std::size_t n : {5ul, 40ul, 120ul}) {
        const Matrix s = oracles::random_psd(n, n + 10, rng);
        const auto top = linalg::sym_eig_largest(s);
        const auto all = linalg::sym_eig(s);
        CHECK(top.value == doctest::Approx(all.back().value).epsilon(1e-9));
        CHECK(direction_angle(top.vector, all.back().vector) < 1e-6);
    }
}

TEST_CASE("min_rayleigh identity pencil") {
    const auto p = linalg::min_rayleigh(Matrix::identity(2), Matrix::identity(2));
    CHECK(p.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(norm2(p.vector) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("min_rayleigh diagonal pencil picks the small axis") {
    Matrix g(2, 2);
    g(0, 0) = 4;
    g(1, 1) = 1;
    const auto p = linalg::min_rayleigh(g, Matrix::identity(2));
    CHECK(p.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::fabs(p.vector[1]) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("min_rayleigh 2x2 quadratic-formula oracle") {
    // det(G - x H) = 2x^2 - 6x + 3 with roots (3 +- sqrt(3))/2
    const Matrix g = mat2(2, 1, 1, 2);
    Matrix h(2, 2);
    h(0, 0) = 1;
    h(1, 1) = 2;
    const auto p = linalg::min_rayleigh(g, h);
    const double expected = (3.0 - std::sqrt(3.0)) / 2.0;
    CHECK(p.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(residual(g, h, p) <=
          1e-7 * (g.frobenius_norm() + std::fabs(p.value) * h.frobenius_norm()));
}

TEST_CASE("min_rayleigh errors") {
    CHECK_THROWS_AS(linalg::min_rayleigh(Matrix::identity(3), Matrix::identity(2)),
                    DimensionMismatch);
    CHECK_THROWS_AS(linalg::min_rayleigh(Matrix::identity(3), Matrix(3, 3)),
                    DegenerateDenominator);
}

TEST_CASE("min_rayleigh matches the spectral-square-root oracle on random pencils") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 9;
        const Matrix g = oracles::random_spd(n, rng);
        const Matrix h = oracles::random_psd(n, 1 + trial % (n + 2), rng);
        if (h.frobenius_norm() <= 1e-12) continue;
        const auto p = linalg::min_rayleigh(g, h);
        const auto [lambda, z] = oracles::min_generalized_eig(g, h);
        CHECK(std::fabs(p.value - lambda) <= 1e-8 * std::max(1.0, std::fabs(lambda)));
        CHECK(residual(g, h, p) <=
              1e-7 * (g.frobenius_norm() + std::fabs(p.value) * h.frobenius_norm()));
    }
}

TEST_CASE("min_rayleigh_factored agrees with the square route") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 3 + trial % 8;
        const std::size_t p_rows = 1 + trial % (n + 4);
        const Matrix g = oracles::random_spd(n, rng);
        std::normal_distribution<double> nd;
        Matrix f(p_rows, n);
        for (std::size_t i = 0; i < p_rows; ++i)
            for (std::size_t j = 0; j < n; ++j) f(i, j) = nd(rng);
        const auto via_factor = linalg::min_rayleigh_factored(g, f);
        const auto via_square = linalg::min_rayleigh(g, gram_columns(f));
        CHECK(via_factor.value == doctest::Approx(via_square.value).epsilon(1e-9));
        CHECK(direction_angle(via_factor.vector, via_square.vector) < 1e-6);
    }
}

TEST_CASE("min_rayleigh minimality against random probes") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const Matrix g = oracles::random_spd(n, rng);
        const Matrix h = oracles::random_psd(n, n, rng);
        const auto p = linalg::min_rayleigh(g, h);
        for (int probe = 0; probe < 1000; ++probe) {
            const Vector z = oracles::random_unit(n, rng);
            const Vector hz = matvec(h, z);
            const double denom = dot(z, hz);
            if (denom <= 1e-12) continue;
            const double q = dot(z, matvec(g, z)) / denom;
            CHECK(p.value <= q + 1e-9 * std::fabs(q));
        }
    }
}

TEST_CASE("min_rayleigh stays accurate at moderate order and poor conditioning") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 25 + 5 * (trial % 4);
        const Matrix g = oracles::random_spd(n, rng, 1e-4, 1e3);  // condition ~1e7
        const Matrix h = oracles::random_psd(n, n / 2 + 1, rng);
        const auto p = linalg::min_rayleigh(g, h);
        const auto [lambda, z] = oracles::min_generalized_eig(g, h);
        CHECK(std::fabs(p.value - lambda) <= 1e-7 * std::max(1.0, std::fabs(lambda)));
        CHECK(residual(g, h, p) <=
              1e-7 * (g.frobenius_norm() + std::fabs(p.value) * h.frobenius_norm()));
    }
}

TEST_CASE("triangular solves invert the factor") {
    std::mt19937_64 rng(43);
    const Matrix s = oracles::random_spd(7, rng);
    const Matrix l = linalg::cholesky(s);
    const Vector b = oracles::random_unit(7, rng);
    const Vector x = linalg::solve_lower(l, b);
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(dot(l.row(i), x) == doctest::Approx(b[i]).epsilon(1e-10));
    const Vector y = linalg::solve_lower_transposed(l, b);
    for (std::size_t i = 0; i < 7; ++i) {
        double v = 0.0;
        for (std::size_t k = 0; k < 7; ++k) v += l(k, i) * y[k];
        CHECK(v == doctest::Approx(b[i]).epsilon(1e-10));
    }
}
