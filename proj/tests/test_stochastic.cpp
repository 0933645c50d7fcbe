#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "gwdiff/kernels.hpp"
#include "gwdiff/stochastic.hpp"
#include "oracles.hpp"

using namespace gwdiff;

TEST_CASE("build_transition divides rows by their sums") {
    SUBCASE("identity affinities") {
        const StochasticMatrix p = build_transition(AffinityMatrix(Matrix::identity(4)));
        CHECK(p.values() == Matrix::identity(4));
        CHECK(p.tolerance_class() == ToleranceClass::strict);
    }
    SUBCASE("all-ones 2x2") {
        Matrix a(2, 2, 1.0);
        const StochasticMatrix p = build_transition(AffinityMatrix(std::move(a)));
        CHECK(p(0, 0) == 0.5);
        CHECK(p(1, 1) == 0.5);
    }
    SUBCASE("reference graph matches exact ratios and the quoted print") {
        const StochasticMatrix p = oracles::paper_p();
        const double exact[3][3] = {{0, 5.0 / 8.0, 3.0 / 8.0},
                                    {5.0 / 13.0, 0, 8.0 / 13.0},
                                    {3.0 / 11.0, 8.0 / 11.0, 0}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(std::fabs(p(i, j) - exact[i][j]) <= 1e-15);
                CHECK(std::fabs(p(i, j) - oracles::kPrintP[i][j]) <= 5e-5);
            }
    }
    SUBCASE("zero row is rejected with its index") {
        Matrix a(2, 2);
        a(0, 0) = 1.0;
        CHECK_THROWS_AS(AffinityMatrix(std::move(a)), ZeroRowError);
        Matrix b(3, 3, 1.0);
        b(1, 0) = b(1, 1) = b(1, 2) = 0.0;
        try {
            AffinityMatrix unused(std::move(b));
            FAIL("expected ZeroRowError");
        } catch (const ZeroRowError& e) {
            CHECK(e.row == 1);
        }
    }
    SUBCASE("negative affinities are rejected") {
        Matrix a(2, 2, 1.0);
        a(0, 1) = -0.5;
        CHECK_THROWS_AS(AffinityMatrix(std::move(a)), InvalidArgument);
    }
    SUBCASE("non-square is rejected") {
        CHECK_THROWS_AS(AffinityMatrix(Matrix(2, 3, 1.0)), DimensionMismatch);
    }
}

TEST_CASE("matmul") {
    const StochasticMatrix p = oracles::paper_p();
    SUBCASE("identity is neutral") {
        const StochasticMatrix id = StochasticMatrix::strict(Matrix::identity(3));
        CHECK(matmul(p, id).values() == p.values());
    }
    SUBCASE("P*P matches the quoted square within 5e-4") {
        const StochasticMatrix p2 = matmul(p, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::fabs(p2(i, j) - oracles::kPrintP2[i][j]) <= 5e-4);
    }
    SUBCASE("strict factors give a strict product") {
        CHECK(matmul(p, p).tolerance_class() == ToleranceClass::strict);
    }
    SUBCASE("relaxed factor degrades the class") {
        const StochasticMatrix y = StochasticMatrix::relaxed(oracles::from3x3(oracles::kPrintP2));
        CHECK(matmul(p, y).tolerance_class() == ToleranceClass::relaxed);
    }
    SUBCASE("size mismatch throws") {
        const StochasticMatrix small = StochasticMatrix::strict(Matrix::identity(2));
        CHECK_THROWS_AS(matmul(p, small), DimensionMismatch);
    }
    SUBCASE("products of random stochastic matrices stay row-stochastic") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 9);
            StochasticMatrix a = StochasticMatrix::strict(oracles::random_stochastic(rng, n));
            const StochasticMatrix b = StochasticMatrix::strict(oracles::random_stochastic(rng, n));
            StochasticMatrix prod = matmul(a, b);
            CHECK(validate_stochastic(prod.values(), 8.0 * n * 2.220446049250313e-16).pass);
            // k-fold products accumulate proportionally.
            const int k = 5;
            for (int step = 1; step < k; ++step) prod = matmul(prod, b);
            CHECK(validate_stochastic(prod.values(), 8.0 * k * n * 2.220446049250313e-16).pass);
        }
    }
    SUBCASE("serial and parallel kernels agree bitwise") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Matrix a(67, 45), b(45, 83);
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) a(i, j) = unif(rng);
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) b(i, j) = unif(rng);
        CHECK(kernels::matmul_serial(a, b) == kernels::matmul_parallel(a, b));
    }
}

TEST_CASE("diff_norm") {
    const StochasticMatrix p = oracles::paper_p();
    SUBCASE("identical matrices give exactly zero in every norm") {
        for (Norm norm : {Norm::frobenius, Norm::spectral, Norm::max_entrywise})
            CHECK(diff_norm(p, p, norm) == 0.0);
    }
    SUBCASE("known gaps") {
        const Matrix zero(2, 2);
        CHECK(diff_norm(Matrix::identity(2), zero, Norm::frobenius) ==
              doctest::Approx(std::sqrt(2.0)));
        CHECK(diff_norm(Matrix::identity(2), zero, Norm::spectral) == doctest::Approx(1.0));
        CHECK(diff_norm(Matrix::identity(2), zero, Norm::max_entrywise) == 1.0);
        Matrix nilpotent(2, 2);
        nilpotent(0, 1) = 1.0;
        CHECK(diff_norm(nilpotent, zero, Norm::frobenius) == doctest::Approx(1.0));
        CHECK(diff_norm(nilpotent, zero, Norm::spectral) == doctest::Approx(1.0));
    }
    SUBCASE("spectral norm matches a Jacobi eigensolver oracle") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int trial = 0; trial < 25; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 7);
            Matrix a(n, n), b(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    a(i, j) = unif(rng);
                    b(i, j) = unif(rng);
                }
            Matrix d(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) d(i, j) = a(i, j) - b(i, j);
            const double expected = oracles::spectral_norm_jacobi(d);
            CHECK(diff_norm(a, b, Norm::spectral) ==
                  doctest::Approx(expected).epsilon(1e-8));
        }
    }
    SUBCASE("norm ordering: max <= spectral and max <= frobenius") {
        std::mt19937_64 rng(14);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 3 + static_cast<int>(rng() % 5);
            const Matrix a = oracles::random_stochastic(rng, n);
            const Matrix b = oracles::random_stochastic(rng, n);
            const double dmax = diff_norm(a, b, Norm::max_entrywise);
            const double dfro = diff_norm(a, b, Norm::frobenius);
            const double dspec = diff_norm(a, b, Norm::spectral);
            CHECK(dmax <= dfro + 1e-12);
            CHECK(dmax <= dspec + 1e-9);
            CHECK(dspec <= dfro + 1e-9);
        }
    }
    SUBCASE("symmetry") {
        const StochasticMatrix y = oracles::paper_y();
        for (Norm norm : {Norm::frobenius, Norm::spectral, Norm::max_entrywise})
            CHECK(diff_norm(p, y, norm) == doctest::Approx(diff_norm(y, p, norm)).epsilon(1e-12));
    }
    SUBCASE("shape mismatch throws") {
        CHECK_THROWS_AS(diff_norm(Matrix(2, 2), Matrix(3, 3), Norm::frobenius),
                        DimensionMismatch);
    }
}

TEST_CASE("normalize_rows") {
    SUBCASE("hand example") {
        Matrix m(2, 2);
        m(0, 0) = 2.0;
        m(0, 1) = 2.0;
        m(1, 0) = 1.0;
        m(1, 1) = 3.0;
        const StochasticMatrix p = normalize_rows(m);
        CHECK(p(0, 0) == 0.5);
        CHECK(p(1, 0) == 0.25);
        CHECK(p(1, 1) == 0.75);
    }
    SUBCASE("idempotent to 1e-15") {
        std::mt19937_64 rng(15);
        const Matrix m = oracles::random_stochastic(rng, 6);
        const StochasticMatrix once = normalize_rows(m);
        const StochasticMatrix twice = normalize_rows(once.values());
        CHECK(kernels::max_abs_diff(once.values(), twice.values()) <= 1e-15);
    }
    SUBCASE("4-decimal print normalizes to strict with a tiny shift") {
        const Matrix print = oracles::from3x3(oracles::kPrintP2);
        const StochasticMatrix p = normalize_rows(print);
        CHECK(p.tolerance_class() == ToleranceClass::strict);
        CHECK(kernels::max_abs_diff(p.values(), print) <= 5e-4);
        CHECK(validate_stochastic(p.values(), kStrictRowTol).pass);
    }
    SUBCASE("zero row throws") {
        CHECK_THROWS_AS(normalize_rows(Matrix(2, 2)), ZeroRowError);
    }
}

TEST_CASE("validate_stochastic") {
    SUBCASE("identity passes strict") {
        CHECK(validate_stochastic(Matrix::identity(5), kStrictRowTol).pass);
    }
    SUBCASE("a 4-decimal print fails strict but passes relaxed") {
        const Matrix print = oracles::from3x3(oracles::kPrintP2);
        const ValidationReport strict = validate_stochastic(print, kStrictRowTol);
        CHECK_FALSE(strict.pass);
        CHECK(strict.worst_row == 1);
        CHECK(strict.worst_row_deviation == doctest::Approx(1e-4).epsilon(0.05));
        CHECK(validate_stochastic(print, kRelaxedRowTol).pass);
    }
    SUBCASE("row-sum violation is localized") {
        Matrix m(2, 2);
        m(0, 0) = 0.5;
        m(0, 1) = 0.6;
        m(1, 0) = 0.5;
        m(1, 1) = 0.5;
        const ValidationReport report = validate_stochastic(m, 1e-6);
        CHECK_FALSE(report.pass);
        CHECK(report.worst_row == 0);
        CHECK(report.worst_row_deviation == doctest::Approx(0.1));
        REQUIRE(report.offending_rows.size() == 1);
        CHECK(report.offending_rows[0] == 0);
    }
    SUBCASE("negative entries are flagged even with a unit row sum") {
        Matrix m(2, 2);
        m(0, 0) = 1.5;
        m(0, 1) = -0.5;
        m(1, 0) = 1.0;
        const ValidationReport report = validate_stochastic(m, 1e-9);
        CHECK_FALSE(report.pass);
    }
    SUBCASE("strict constructor rejects the print, relaxed accepts it") {
        CHECK_THROWS_AS(StochasticMatrix::strict(oracles::from3x3(oracles::kPrintP2)),
                        InvalidArgument);
        CHECK_NOTHROW(StochasticMatrix::relaxed(oracles::from3x3(oracles::kPrintP2)));
    }
}
