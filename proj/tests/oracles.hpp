#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gwdiff/matrix.hpp"
#include "gwdiff/stochastic.hpp"

// Test-only reference implementations, independent of the library kernels.
namespace oracles {

inline gwdiff::Matrix random_stochastic(std::mt19937_64& rng, int n, double zero_prob = 0.0) {
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    gwdiff::Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            double v = unif(rng);
            if (zero_prob > 0.0 && coin(rng) < zero_prob) v = 0.0;
            m(i, j) = v;
            s += v;
        }
        if (s == 0.0) {
            m(i, i) = 1.0;
            s = 1.0;
        }
        for (int j = 0; j < n; ++j) m(i, j) /= s;
    }
    return m;
}

// Largest singular value of d via cyclic Jacobi on the Gram matrix.
inline double spectral_norm_jacobi(const gwdiff::Matrix& d) {
    const int n = d.cols();
    std::vector<double> g(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int r = 0; r < d.rows(); ++r) s += d(r, i) * d(r, j);
            g[static_cast<size_t>(i) * n + j] = s;
        }
    auto at = [&](int i, int j) -> double& { return g[static_cast<size_t>(i) * n + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off <= 1e-28) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(at(p, q)) <= 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double gkp = at(k, p), gkq = at(k, q);
                    at(k, p) = c * gkp - s * gkq;
                    at(k, q) = s * gkp + c * gkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double gpk = at(p, k), gqk = at(q, k);
                    at(p, k) = c * gpk - s * gqk;
                    at(q, k) = s * gpk + c * gqk;
                }
            }
    }
    double top = 0.0;
    for (int i = 0; i < n; ++i) top = std::max(top, at(i, i));
    return std::sqrt(std::max(top, 0.0));
}

inline constexpr double kAffinity[3][3] = {{0, 5, 3}, {5, 0, 8}, {3, 8, 0}};
inline constexpr double kPrintP[3][3] = {{0, 0.6250, 0.3750},
                                         {0.3846, 0, 0.6154},
                                         {0.2727, 0.7273, 0}};
inline constexpr double kPrintP2[3][3] = {{0.3427, 0.2727, 0.3846},
                                          {0.1678, 0.6879, 0.1442},
                                          {0.2797, 0.1705, 0.5498}};
inline constexpr double kPrintP3[3][3] = {{0.2098, 0.4939, 0.2963},
                                          {0.3039, 0.2098, 0.4863},
                                          {0.2155, 0.5747, 0.2098}};
inline constexpr double kPrintY[3][3] = {{0, 0.4258, 0.5742},
                                         {0.2514, 0, 0.7486},
                                         {0.4166, 0.5834, 0}};
inline constexpr double kPrintJ[3][3] = {{0, 0.9086, 0.0914},
                                         {0.8412, 0, 0.1588},
                                         {0.5715, 0.4285, 0}};
inline constexpr double kExactPi[3] = {0.25, 0.40625, 0.34375};

inline gwdiff::Matrix from3x3(const double (&v)[3][3]) {
    gwdiff::Matrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = v[i][j];
    return m;
}

inline gwdiff::StochasticMatrix paper_p() {
    return gwdiff::build_transition(gwdiff::AffinityMatrix(from3x3(kAffinity)));
}

inline gwdiff::StochasticMatrix paper_y() {
    return gwdiff::normalize_rows(from3x3(kPrintY));
}

inline gwdiff::StochasticMatrix paper_j() {
    return gwdiff::normalize_rows(from3x3(kPrintJ));
}

}  // namespace oracles
