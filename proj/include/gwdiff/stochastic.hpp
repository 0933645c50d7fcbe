#pragma once

#include <string>
#include <vector>

#include "gwdiff/matrix.hpp"

namespace gwdiff {

enum class Norm { frobenius, spectral, max_entrywise };
enum class ToleranceClass { strict, relaxed };

// Row-sum tolerances. Exactly normalized data must satisfy strict; data
// quoted to a few decimals satisfies relaxed only.
inline constexpr double kStrictRowTol = 1e-12;
inline constexpr double kRelaxedRowTol = 5e-4;

const char* to_string(Norm n);
Norm norm_from_string(const std::string& s);

// Nonnegative square matrix with positive row sums (weighted adjacency).
class AffinityMatrix {
public:
    explicit AffinityMatrix(Matrix m);

    int size() const { return m_.rows(); }
    const Matrix& values() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }
    const std::vector<double>& row_sums() const { return row_sums_; }

private:
    Matrix m_;
    std::vector<double> row_sums_;
};

struct ValidationReport {
    bool pass = true;
    double worst_row_deviation = 0.0;
    int worst_row = -1;
    std::vector<int> offending_rows;
};

// Row-stochastic matrix tagged with the tolerance class it was validated
// against. Products carry the weaker class of their factors.
class StochasticMatrix {
public:
    static StochasticMatrix strict(Matrix m) { return checked(std::move(m), ToleranceClass::strict); }
    static StochasticMatrix relaxed(Matrix m) { return checked(std::move(m), ToleranceClass::relaxed); }
    // For engine-internal results whose row sums are known to hold up to
    // accumulated rounding; skips revalidation.
    static StochasticMatrix adopt(Matrix m, ToleranceClass cls);

    int size() const { return m_.rows(); }
    const Matrix& values() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }
    const double* row(int i) const { return m_.row(i); }
    ToleranceClass tolerance_class() const { return cls_; }

    bool operator==(const StochasticMatrix&) const = default;

private:
    static StochasticMatrix checked(Matrix m, ToleranceClass cls);
    StochasticMatrix(Matrix m, ToleranceClass cls) : m_(std::move(m)), cls_(cls) {}

    Matrix m_;
    ToleranceClass cls_;
};

ValidationReport validate_stochastic(const Matrix& m, double tol);

// P = D^-1 A: divide each affinity row by its sum.
StochasticMatrix build_transition(const AffinityMatrix& a);

// Rescale rows of a nonnegative matrix to sum to one.
StochasticMatrix normalize_rows(const Matrix& m);

StochasticMatrix matmul(const StochasticMatrix& a, const StochasticMatrix& b);

double diff_norm(const Matrix& a, const Matrix& b, Norm norm);
double diff_norm(const StochasticMatrix& a, const StochasticMatrix& b, Norm norm);

}  // namespace gwdiff
