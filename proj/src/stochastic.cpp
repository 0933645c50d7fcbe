#include "gwdiff/stochastic.hpp"

#include <cmath>
#include <string>

#include "gwdiff/kernels.hpp"

namespace gwdiff {

const char* to_string(Norm n) {
    switch (n) {
        case Norm::frobenius: return "frobenius";
        case Norm::spectral: return "spectral";
        case Norm::max_entrywise: return "max";
    }
    return "?";
}

Norm norm_from_string(const std::string& s) {
    if (s == "frobenius" || s == "fro") return Norm::frobenius;
    if (s == "spectral") return Norm::spectral;
    if (s == "max" || s == "max-entrywise") return Norm::max_entrywise;
    throw InvalidArgument("unknown norm '" + s + "'");
}

AffinityMatrix::AffinityMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.square()) throw DimensionMismatch("affinity matrix must be square");
    if (m_.rows() == 0) throw InvalidArgument("affinity matrix must be nonempty");
    const int n = m_.rows();
    row_sums_.resize(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = m_(i, j);
            if (!(v >= 0.0))
                throw InvalidArgument("affinity entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") is negative or NaN");
            s += v;
        }
        if (s <= 0.0) throw ZeroRowError(i);
        row_sums_[i] = s;
    }
}

ValidationReport validate_stochastic(const Matrix& m, double tol) {
    if (!m.square()) throw DimensionMismatch("stochastic matrix must be square");
    ValidationReport report;
    const int n = m.rows();
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        bool bad_entry = false;
        for (int j = 0; j < n; ++j) {
            const double v = m(i, j);
            if (!(v >= -tol) || v > 1.0 + tol || std::isnan(v)) bad_entry = true;
            s += v;
        }
        const double dev = std::fabs(s - 1.0);
        if (dev > report.worst_row_deviation) {
            report.worst_row_deviation = dev;
            report.worst_row = i;
        }
        if (dev > tol || bad_entry) {
            report.pass = false;
            report.offending_rows.push_back(i);
        }
    }
    return report;
}

StochasticMatrix StochasticMatrix::checked(Matrix m, ToleranceClass cls) {
    const double tol = cls == ToleranceClass::strict ? kStrictRowTol : kRelaxedRowTol;
    ValidationReport report = validate_stochastic(m, tol);
    if (!report.pass)
        throw InvalidArgument("matrix is not row-stochastic at tolerance " +
                              std::to_string(tol) + ": worst row " +
                              std::to_string(report.worst_row) + " deviates by " +
                              std::to_string(report.worst_row_deviation));
    return StochasticMatrix(std::move(m), cls);
}

StochasticMatrix StochasticMatrix::adopt(Matrix m, ToleranceClass cls) {
    if (!m.square()) throw DimensionMismatch("stochastic matrix must be square");
    return StochasticMatrix(std::move(m), cls);
}

StochasticMatrix build_transition(const AffinityMatrix& a) {
    const int n = a.size();
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        const double s = a.row_sums()[i];
        for (int j = 0; j < n; ++j) p(i, j) = a(i, j) / s;
    }
    return StochasticMatrix::strict(std::move(p));
}

StochasticMatrix normalize_rows(const Matrix& m) {
    return build_transition(AffinityMatrix(m));
}

StochasticMatrix matmul(const StochasticMatrix& a, const StochasticMatrix& b) {
    if (a.size() != b.size()) throw DimensionMismatch("stochastic matmul size mismatch");
    const ToleranceClass cls =
        (a.tolerance_class() == ToleranceClass::strict &&
         b.tolerance_class() == ToleranceClass::strict)
            ? ToleranceClass::strict
            : ToleranceClass::relaxed;
    return StochasticMatrix::adopt(kernels::matmul(a.values(), b.values()), cls);
}

double diff_norm(const Matrix& a, const Matrix& b, Norm norm) {
    switch (norm) {
        case Norm::frobenius: return kernels::frobenius_diff(a, b);
        case Norm::spectral: return kernels::spectral_diff(a, b);
        case Norm::max_entrywise: return kernels::max_abs_diff(a, b);
    }
    throw InvalidArgument("unknown norm");
}

double diff_norm(const StochasticMatrix& a, const StochasticMatrix& b, Norm norm) {
    return diff_norm(a.values(), b.values(), norm);
}

}  // namespace gwdiff
