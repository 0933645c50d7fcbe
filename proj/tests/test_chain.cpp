#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gwdiff/chain.hpp"
#include "gwdiff/kernels.hpp"
#include "oracles.hpp"

using namespace gwdiff;

namespace {

StochasticMatrix two_cycle() {
    Matrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return StochasticMatrix::strict(std::move(m));
}

StochasticMatrix block_reducible() {
    Matrix m(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 0.5;
    m(1, 2) = 0.5;
    m(2, 1) = 0.5;
    m(2, 2) = 0.5;
    return StochasticMatrix::strict(std::move(m));
}

// Circulant by (c0, c1, c2); eigenvalues are c0 + c1 w + c2 w^2 over the
// cube roots of unity, so the subdominant modulus has a closed form.
StochasticMatrix circulant3(double c0, double c1, double c2) {
    Matrix m(3, 3);
    const double row[3] = {c0, c1, c2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = row[(j - i + 3) % 3];
    return StochasticMatrix::strict(std::move(m));
}

}  // namespace

TEST_CASE("communication classes") {
    SUBCASE("reference chain is one class") {
        const auto classes = communication_classes(oracles::paper_p());
        REQUIRE(classes.size() == 1);
        CHECK(classes[0] == std::vector<int>{0, 1, 2});
        CHECK(is_irreducible(oracles::paper_p()));
    }
    SUBCASE("identity splits into singletons") {
        const auto classes = communication_classes(StochasticMatrix::strict(Matrix::identity(3)));
        REQUIRE(classes.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(classes[i].size() == 1);
            CHECK(classes[i][0] == i);
        }
    }
    SUBCASE("absorbing state plus a 2-block") {
        const auto classes = communication_classes(block_reducible());
        REQUIRE(classes.size() == 2);
        CHECK(classes[0] == std::vector<int>{0});
        CHECK(classes[1] == std::vector<int>{1, 2});
        CHECK_FALSE(is_irreducible(block_reducible()));
    }
    SUBCASE("one-way chain: states that reach but cannot return are separate") {
        Matrix m(2, 2);
        m(0, 1) = 1.0;
        m(1, 1) = 1.0;
        const auto classes = communication_classes(StochasticMatrix::strict(std::move(m)));
        CHECK(classes.size() == 2);
    }
}

TEST_CASE("period") {
    CHECK(period(two_cycle()) == 2);
    CHECK(period(oracles::paper_p()) == 1);
    SUBCASE("positive diagonal forces aperiodicity") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 6);
            Matrix m = oracles::random_stochastic(rng, n);
            for (int i = 0; i < n; ++i)
                if (m(i, i) == 0.0) {
                    for (int j = 0; j < n; ++j) m(i, j) *= 0.5;
                    m(i, i) += 0.5;
                }
            const StochasticMatrix t = StochasticMatrix::strict(std::move(m));
            if (is_irreducible(t)) CHECK(period(t) == 1);
        }
    }
    SUBCASE("3-cycle has period 3") {
        Matrix m(3, 3);
        m(0, 1) = 1.0;
        m(1, 2) = 1.0;
        m(2, 0) = 1.0;
        CHECK(period(StochasticMatrix::strict(std::move(m))) == 3);
    }
    SUBCASE("reducible chains are rejected") {
        CHECK_THROWS_AS(period(StochasticMatrix::strict(Matrix::identity(2))), NotIrreducible);
    }
}

TEST_CASE("regularity index") {
    SUBCASE("reference chain: k = 2") {
        const auto k = regularity_index(oracles::paper_p());
        REQUIRE(k.has_value());
        CHECK(*k == 2);
    }
    SUBCASE("identity and pure cycles are not regular") {
        CHECK_FALSE(regularity_index(StochasticMatrix::strict(Matrix::identity(3))).has_value());
        CHECK_FALSE(regularity_index(two_cycle()).has_value());
    }
    SUBCASE("all-positive chain: k = 1") {
        std::mt19937_64 rng(22);
        const auto k = regularity_index(
            StochasticMatrix::strict(oracles::random_stochastic(rng, 4)));
        REQUIRE(k.has_value());
        CHECK(*k == 1);
    }
    SUBCASE("k is exactly the first positive power") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 6);
            const StochasticMatrix t =
                StochasticMatrix::strict(oracles::random_stochastic(rng, n, 0.5));
            const auto k = regularity_index(t);
            if (!k) continue;
            CHECK(*k <= (n - 1) * (n - 1) + 1);
            Matrix power = t.values();
            for (int step = 2; step <= *k; ++step) power = kernels::matmul(power, t.values());
            double least = 1.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) least = std::min(least, power(i, j));
            CHECK(least > 0.0);
            if (*k >= 2) {
                Matrix prev = t.values();
                for (int step = 2; step < *k; ++step) prev = kernels::matmul(prev, t.values());
                double least_prev = 1.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) least_prev = std::min(least_prev, prev(i, j));
                CHECK(least_prev == 0.0);
            }
        }
    }
    SUBCASE("classify ties the fields together") {
        const ChainClassification c = classify(oracles::paper_p());
        CHECK(c.irreducible);
        REQUIRE(c.period.has_value());
        CHECK(*c.period == 1);
        CHECK(c.regular);
        REQUIRE(c.regularity_index.has_value());
        CHECK(*c.regularity_index == 2);
        const ChainClassification r = classify(block_reducible());
        CHECK_FALSE(r.irreducible);
        CHECK_FALSE(r.period.has_value());
        CHECK_FALSE(r.regular);
    }
}

TEST_CASE("stationary distribution") {
    const StochasticMatrix p = oracles::paper_p();
    SUBCASE("both routes agree with the degree oracle") {
        const StationaryResult dual = stationary(p);
        CHECK(dual.method == StationaryMethod::linear_solve);
        for (int j = 0; j < 3; ++j)
            CHECK(std::fabs(dual.pi[j] - oracles::kExactPi[j]) <= 1e-10);
        CHECK(dual.residual <= 1e-10);

        const StationaryResult power = stationary_power(p);
        const StationaryResult solve = stationary_solve(p);
        for (int j = 0; j < 3; ++j) {
            CHECK(std::fabs(power.pi[j] - solve.pi[j]) <= 1e-10);
            CHECK(std::fabs(power.pi[j] - oracles::kExactPi[j]) <= 1e-10);
        }
        CHECK(power.method == StationaryMethod::power_iteration);
    }
    SUBCASE("pi is a probability vector") {
        const StationaryResult result = stationary(p);
        double sum = 0.0;
        for (double v : result.pi) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }
    SUBCASE("doubly stochastic chains have the uniform law") {
        const StationaryResult result = stationary(circulant3(0.5, 0.3, 0.2));
        for (int j = 0; j < 3; ++j) CHECK(result.pi[j] == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("non-regular chains are rejected") {
        CHECK_THROWS_AS(stationary(two_cycle()), NotRegular);
        CHECK_THROWS_AS(stationary(StochasticMatrix::strict(Matrix::identity(3))), NotRegular);
    }
}

TEST_CASE("power limit") {
    const StochasticMatrix p = oracles::paper_p();
    SUBCASE("rows settle on pi") {
        const StochasticMatrix limit = power_limit(p, 1e-10);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::fabs(limit(i, j) - oracles::kExactPi[j]) <= 1e-8);
    }
    SUBCASE("rank-1 chain returns immediately") {
        Matrix m(3, 3);
        for (int i = 0; i < 3; ++i) {
            m(i, 0) = 0.2;
            m(i, 1) = 0.5;
            m(i, 2) = 0.3;
        }
        const StochasticMatrix t = StochasticMatrix::strict(std::move(m));
        const StochasticMatrix limit = power_limit(t, 1e-12);
        CHECK(kernels::max_abs_diff(limit.values(), t.values()) == 0.0);
    }
    SUBCASE("loose tolerance still lands within 5e-4 of the print rows") {
        const StochasticMatrix limit = power_limit(p, 1e-4);
        const double print_pi[3] = {0.2500, 0.4062, 0.3437};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::fabs(limit(i, j) - print_pi[j]) <= 5e-4);
    }
    SUBCASE("non-regular chains are rejected") {
        CHECK_THROWS_AS(power_limit(two_cycle(), 1e-8), NotRegular);
    }
}

TEST_CASE("subdominant modulus") {
    SUBCASE("reference chain matches the closed form") {
        // Nontrivial eigenvalues solve x^2 + x + 30/143 = 0, i.e.
        // (-1 +- sqrt(23/143))/2, so |lambda_2| = (1 + sqrt(23/143))/2.
        const double expected = (1.0 + std::sqrt(23.0 / 143.0)) / 2.0;
        const SpectrumSummary s = subdominant_modulus(oracles::paper_p());
        CHECK(s.dominant == doctest::Approx(1.0));
        CHECK(s.subdominant_modulus == doctest::Approx(expected).epsilon(1e-8));
        CHECK(s.gap == doctest::Approx(1.0 - expected).epsilon(1e-7));
    }
    SUBCASE("rank-1 chain has modulus 0") {
        Matrix m(3, 3);
        for (int i = 0; i < 3; ++i) {
            m(i, 0) = 0.2;
            m(i, 1) = 0.5;
            m(i, 2) = 0.3;
        }
        const SpectrumSummary s = subdominant_modulus(StochasticMatrix::strict(std::move(m)));
        CHECK(s.subdominant_modulus <= 1e-12);
    }
    SUBCASE("identity has modulus 1") {
        const SpectrumSummary s = subdominant_modulus(StochasticMatrix::strict(Matrix::identity(4)));
        CHECK(s.subdominant_modulus == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("2-cycle has modulus 1") {
        const SpectrumSummary s = subdominant_modulus(two_cycle());
        CHECK(s.subdominant_modulus == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("complex-conjugate subdominant pair via a circulant") {
        // lambda = c0 + c1 w + c2 w^2 with w = exp(2 pi i / 3):
        // |lambda|^2 = (c0 - (c1+c2)/2)^2 + 3 (c1-c2)^2 / 4.
        const double c0 = 0.5, c1 = 0.3, c2 = 0.2;
        const double re = c0 - (c1 + c2) / 2.0;
        const double im2 = 3.0 * (c1 - c2) * (c1 - c2) / 4.0;
        const double expected = std::sqrt(re * re + im2);
        const SpectrumSummary s = subdominant_modulus(circulant3(c0, c1, c2));
        CHECK(s.subdominant_modulus == doctest::Approx(expected).epsilon(1e-8));
    }
    SUBCASE("invariant under relabeling") {
        std::mt19937_64 rng(24);
        for (int trial = 0; trial < 8; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 5);
            // Symmetric affinities give a real spectrum.
            Matrix a(n, n);
            std::uniform_real_distribution<double> unif(0.1, 1.0);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) a(i, j) = a(j, i) = unif(rng);
            const StochasticMatrix t = build_transition(AffinityMatrix(a));

            std::vector<int> perm(n);
            for (int i = 0; i < n; ++i) perm[i] = i;
            std::shuffle(perm.begin(), perm.end(), rng);
            Matrix relabeled(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) relabeled(perm[i], perm[j]) = t(i, j);
            const StochasticMatrix tp = StochasticMatrix::strict(std::move(relabeled));

            const double s1 = subdominant_modulus(t).subdominant_modulus;
            const double s2 = subdominant_modulus(tp).subdominant_modulus;
            CHECK(std::fabs(s1 - s2) <= 1e-8);
        }
    }
    SUBCASE("bounded by the dominant value") {
        std::mt19937_64 rng(25);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 6);
            const SpectrumSummary s = subdominant_modulus(
                StochasticMatrix::strict(oracles::random_stochastic(rng, n, 0.3)));
            CHECK(s.subdominant_modulus >= 0.0);
            CHECK(s.subdominant_modulus <= s.dominant + 1e-9);
        }
    }
}
