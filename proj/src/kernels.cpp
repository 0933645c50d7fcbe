#include "gwdiff/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "gwdiff/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gwdiff::kernels {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("shape " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
}

void check_multipliable(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("cannot multiply " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
}

// One output row, accumulated over l in ascending order. Both execution
// paths funnel through this, which is what makes them bit-identical.
void matmul_row(const double* a, const double* b, double* c, int i, int k, int m) {
    double* ci = c + static_cast<size_t>(i) * m;
    std::fill(ci, ci + m, 0.0);
    const double* ai = a + static_cast<size_t>(i) * k;
    for (int l = 0; l < k; ++l) {
        const double av = ai[l];
        const double* bl = b + static_cast<size_t>(l) * m;
        for (int j = 0; j < m; ++j) ci[j] += av * bl[j];
    }
}

}  // namespace

Matrix matmul_serial(const Matrix& a, const Matrix& b) {
    check_multipliable(a, b);
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        matmul_row(a.data(), b.data(), c.data(), i, a.cols(), b.cols());
    return c;
}

Matrix matmul_parallel(const Matrix& a, const Matrix& b) {
    check_multipliable(a, b);
    Matrix c(a.rows(), b.cols());
    const int n = a.rows(), k = a.cols(), m = b.cols();
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = c.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) matmul_row(ap, bp, cp, i, k, m);
    return c;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    const double work = static_cast<double>(a.rows()) * a.cols() * b.cols();
    if (work >= 1.0e6) return matmul_parallel(a, b);
    return matmul_serial(a, b);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    const double* pa = a.data();
    const double* pb = b.data();
    const size_t n = static_cast<size_t>(a.rows()) * a.cols();
    double worst = 0.0;
    for (size_t i = 0; i < n; ++i) worst = std::max(worst, std::fabs(pa[i] - pb[i]));
    return worst;
}

double frobenius_diff(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    const double* pa = a.data();
    const double* pb = b.data();
    const size_t n = static_cast<size_t>(a.rows()) * a.cols();
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = pa[i] - pb[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double frobenius_diff_parallel(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    const double* pa = a.data();
    const double* pb = b.data();
    const long long n = static_cast<long long>(a.rows()) * a.cols();
    double s = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : s)
#endif
    for (long long i = 0; i < n; ++i) {
        const double d = pa[i] - pb[i];
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

// y = D^T (D x) without forming D^T D.
void gram_apply(const Matrix& a, const Matrix& b, const std::vector<double>& x,
                std::vector<double>& w, std::vector<double>& y) {
    const int r = a.rows(), c = a.cols();
    for (int i = 0; i < r; ++i) {
        const double* ra = a.row(i);
        const double* rb = b.row(i);
        double s = 0.0;
        for (int j = 0; j < c; ++j) s += (ra[j] - rb[j]) * x[j];
        w[i] = s;
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < r; ++i) {
        const double* ra = a.row(i);
        const double* rb = b.row(i);
        const double wi = w[i];
        for (int j = 0; j < c; ++j) y[j] += (ra[j] - rb[j]) * wi;
    }
}

}  // namespace

double spectral_diff(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    if (max_abs_diff(a, b) == 0.0) return 0.0;
    const int c = a.cols();
    std::vector<double> x(c), w(a.rows()), y(c);
    // Deterministic pseudo-random start; avoids landing in a null space.
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (int j = 0; j < c; ++j) {
        h ^= h >> 12;
        h ^= h << 25;
        h ^= h >> 27;
        x[j] = 0.5 + static_cast<double>(h >> 11) * 0x1.0p-53;
    }
    double nx = 0.0;
    for (double v : x) nx += v * v;
    nx = std::sqrt(nx);
    for (double& v : x) v /= nx;

    double lambda = 0.0;
    for (int sweep = 0; sweep < 10000; ++sweep) {
        gram_apply(a, b, x, w, y);
        double num = 0.0;
        for (int j = 0; j < c; ++j) num += x[j] * y[j];
        double ny = 0.0;
        for (double v : y) ny += v * v;
        ny = std::sqrt(ny);
        if (ny == 0.0) return 0.0;
        for (int j = 0; j < c; ++j) x[j] = y[j] / ny;
        if (sweep > 0 && std::fabs(num - lambda) <= 1e-12 * std::max(num, 1e-300))
            return std::sqrt(std::max(num, 0.0));
        lambda = num;
    }
    throw NoConvergence("spectral norm power iteration did not settle in 10000 sweeps");
}

}  // namespace gwdiff::kernels
