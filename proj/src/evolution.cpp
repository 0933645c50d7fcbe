#include "gwdiff/evolution.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "gwdiff/kernels.hpp"

namespace gwdiff {

const char* to_string(Comparison c) {
    return c == Comparison::strict_less ? "lt" : "le";
}

const char* to_string(Convention c) {
    return c == Convention::first_step_odd ? "first-step-odd" : "first-step-even";
}

const char* to_string(CycleMode m) {
    switch (m) {
        case CycleMode::none: return "none";
        case CycleMode::fixed_point: return "fixed-point";
        case CycleMode::period_2: return "period-2";
        case CycleMode::exhausted: return "exhausted";
    }
    return "?";
}

const char* to_string(AlternatingVariant v) {
    switch (v) {
        case AlternatingVariant::both: return "both";
        case AlternatingVariant::branching_only: return "branching-only";
        case AlternatingVariant::immigration_only: return "immigration-only";
    }
    return "?";
}

Convention convention_from_string(const std::string& s) {
    if (s == "first-step-odd" || s == "odd") return Convention::first_step_odd;
    if (s == "first-step-even" || s == "even") return Convention::first_step_even;
    throw InvalidArgument("unknown convention '" + s + "'");
}

AlternatingVariant variant_from_string(const std::string& s) {
    if (s == "both") return AlternatingVariant::both;
    if (s == "branching" || s == "branching-only") return AlternatingVariant::branching_only;
    if (s == "immigration" || s == "immigration-only") return AlternatingVariant::immigration_only;
    throw InvalidArgument("unknown variant '" + s + "'");
}

namespace {

void check_criterion(const ConvergenceCriterion& c) {
    if (!(c.epsilon > 0.0)) throw InvalidArgument("criterion epsilon must be positive");
    if (c.max_iterations < 1) throw InvalidArgument("criterion max_iterations must be >= 1");
}

bool meets(double value, const ConvergenceCriterion& c) {
    if (std::isnan(value)) return false;
    return c.comparison == Comparison::strict_less ? value < c.epsilon : value <= c.epsilon;
}

void check_same_size(const StochasticMatrix& a, const StochasticMatrix& b, const char* what) {
    if (a.size() != b.size()) throw DimensionMismatch(std::string(what) + " size mismatch");
}

ToleranceClass merge_class(ToleranceClass a, ToleranceClass b) {
    return (a == ToleranceClass::strict && b == ToleranceClass::strict) ? ToleranceClass::strict
                                                                        : ToleranceClass::relaxed;
}

// lam * M + (1 - lam) * N, entrywise.
Matrix mix(const Matrix& m, const Matrix& n, double lam) {
    Matrix out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = lam * m(i, j) + (1.0 - lam) * n(i, j);
    return out;
}

}  // namespace

MutationSchedule MutationSchedule::constant(StochasticMatrix t) {
    StochasticMatrix copy = t;
    return MutationSchedule{std::move(copy), std::move(t), Convention::first_step_odd, false};
}

MutationSchedule MutationSchedule::alternating(StochasticMatrix odd_op, StochasticMatrix even_op,
                                               Convention convention) {
    check_same_size(odd_op, even_op, "alternating schedule");
    return MutationSchedule{std::move(odd_op), std::move(even_op), convention, true};
}

Matrix diffuse_step(const Matrix& f, const Matrix& t) {
    return kernels::matmul(f, t);
}

StochasticMatrix diffuse_step(const StochasticMatrix& f, const StochasticMatrix& t) {
    check_same_size(f, t, "diffuse step");
    return StochasticMatrix::adopt(kernels::matmul(f.values(), t.values()),
                                   merge_class(f.tolerance_class(), t.tolerance_class()));
}

Matrix pagerank_step(const Matrix& f, const Matrix& p, const Matrix& y, double alpha) {
    Matrix fp = kernels::matmul(f, p);
    Matrix out(f.rows(), f.cols());
    for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j)
            out(i, j) = alpha * fp(i, j) + (1.0 - alpha) * y(i, j);
    return out;
}

Matrix block_form_step(const Matrix& f, const Matrix& p, const Matrix& y, double alpha) {
    const int n = f.rows();
    if (f.cols() != n || p.rows() != n || y.rows() != n)
        throw DimensionMismatch("block form needs square same-size blocks");
    Matrix left(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) left(i, j) = alpha * f(i, j);
        left(i, n + i) = 1.0 - alpha;
    }
    Matrix right(2 * n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            right(i, j) = p(i, j);
            right(n + i, j) = y(i, j);
        }
    return kernels::matmul(left, right);
}

double mutation_compose_entrywise(const Matrix& f_prev, const Matrix& t, int i, int j) {
    if (!f_prev.square() || !t.square() || f_prev.rows() != t.rows())
        throw DimensionMismatch("entrywise composition needs equal square matrices");
    const int n = t.rows();
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw IndexOutOfRange("entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") out of range for size " + std::to_string(n));
    const double stay = f_prev(i, j) * t(j, j);
    double arrive = 0.0;
    for (int k = 0; k < n; ++k)
        if (k != j) arrive += f_prev(i, k) * t(k, j);
    return stay + arrive;
}

StochasticMatrix generation_law(const StochasticMatrix& p, const StochasticMatrix& t, long long n) {
    check_same_size(p, t, "generation law");
    if (n < 1) throw InvalidArgument("generation index must be >= 1");
    StochasticMatrix law = p;
    for (long long g = 2; g <= n; ++g) law = diffuse_step(law, t);
    return law;
}

ConvergenceReport run_scheme(const TwoPhaseScheme& scheme, const ConvergenceCriterion& criterion) {
    check_criterion(criterion);
    check_same_size(scheme.initial, scheme.schedule.odd, "scheme");
    double alpha = 1.0;
    if (scheme.immigration) {
        alpha = scheme.immigration->alpha;
        if (!(alpha > 0.0) || alpha > 1.0)
            throw InvalidArgument(
                "alpha must lie in (0, 1]; alpha = 0 has no branching phase and its fixed "
                "point is the immigration law itself");
        check_same_size(scheme.initial, scheme.immigration->odd, "immigration");
        check_same_size(scheme.initial, scheme.immigration->even, "immigration");
    }

    ConvergenceReport report;
    report.criterion = criterion;
    report.convention = scheme.schedule.convention;

    ToleranceClass cls = scheme.initial.tolerance_class();
    Matrix prev2;
    Matrix prev = scheme.initial.values();

    for (long long step = 1; step <= criterion.max_iterations; ++step) {
        const bool odd_rule = (step % 2 == 1) ==
                              (scheme.schedule.convention == Convention::first_step_odd);
        const StochasticMatrix& m = odd_rule ? scheme.schedule.odd : scheme.schedule.even;
        Matrix next = kernels::matmul(prev, m.values());
        cls = merge_class(cls, m.tolerance_class());
        if (scheme.immigration) {
            const StochasticMatrix& imm =
                odd_rule ? scheme.immigration->odd : scheme.immigration->even;
            cls = merge_class(cls, imm.tolerance_class());
            for (int i = 0; i < next.rows(); ++i)
                for (int j = 0; j < next.cols(); ++j)
                    next(i, j) = alpha * next(i, j) + (1.0 - alpha) * imm(i, j);
        }

        const double d1 = diff_norm(next, prev, criterion.norm);
        const double d2 = step >= 2 ? diff_norm(next, prev2, criterion.norm)
                                    : std::numeric_limits<double>::quiet_NaN();
        report.trace.push_back({step, d1, d2});

        if (meets(d1, criterion)) {
            report.mode = CycleMode::fixed_point;
            report.iterations = step;
            report.final_states.push_back(StochasticMatrix::adopt(std::move(next), cls));
            return report;
        }
        if (criterion.cycle_detection && step >= 2 && meets(d2, criterion) &&
            d1 >= 10.0 * criterion.epsilon) {
            report.mode = CycleMode::period_2;
            report.iterations = step;
            report.final_states.push_back(StochasticMatrix::adopt(std::move(prev), cls));
            report.final_states.push_back(StochasticMatrix::adopt(std::move(next), cls));
            return report;
        }
        prev2 = std::move(prev);
        prev = std::move(next);
    }

    report.mode = CycleMode::exhausted;
    report.iterations = criterion.max_iterations;
    report.final_states.push_back(StochasticMatrix::adopt(std::move(prev), cls));
    return report;
}

ConvergenceReport run_diffusion(const StochasticMatrix& p, const ConvergenceCriterion& criterion) {
    return run_diffusion(p, p, criterion);
}

ConvergenceReport run_diffusion(const StochasticMatrix& f0, const StochasticMatrix& t,
                                const ConvergenceCriterion& criterion) {
    TwoPhaseScheme scheme{f0, MutationSchedule::constant(t), std::nullopt};
    return run_scheme(scheme, criterion);
}

ConvergenceReport run_pagerank(const StochasticMatrix& p, const StochasticMatrix& y, double alpha,
                               const ConvergenceCriterion& criterion) {
    check_same_size(p, y, "pagerank");
    TwoPhaseScheme scheme{p, MutationSchedule::constant(p), ImmigrationTerm{alpha, y, y}};
    return run_scheme(scheme, criterion);
}

ConvergenceReport run_block_form(const StochasticMatrix& p, const StochasticMatrix& y, double alpha,
                                 const ConvergenceCriterion& criterion) {
    check_criterion(criterion);
    check_same_size(p, y, "block form");
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidArgument("alpha must lie in (0, 1]");

    ConvergenceReport report;
    report.criterion = criterion;
    const ToleranceClass cls = merge_class(p.tolerance_class(), y.tolerance_class());

    Matrix prev2;
    Matrix prev = p.values();
    for (long long step = 1; step <= criterion.max_iterations; ++step) {
        Matrix next = block_form_step(prev, p.values(), y.values(), alpha);
        const double d1 = diff_norm(next, prev, criterion.norm);
        const double d2 = step >= 2 ? diff_norm(next, prev2, criterion.norm)
                                    : std::numeric_limits<double>::quiet_NaN();
        report.trace.push_back({step, d1, d2});
        if (meets(d1, criterion)) {
            report.mode = CycleMode::fixed_point;
            report.iterations = step;
            report.final_states.push_back(StochasticMatrix::adopt(std::move(next), cls));
            return report;
        }
        prev2 = std::move(prev);
        prev = std::move(next);
    }
    report.mode = CycleMode::exhausted;
    report.iterations = criterion.max_iterations;
    report.final_states.push_back(StochasticMatrix::adopt(std::move(prev), cls));
    return report;
}

StochasticMatrix pagerank_closed_form(const StochasticMatrix& p, const StochasticMatrix& y,
                                      double alpha, long long n) {
    check_same_size(p, y, "closed form");
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidArgument("alpha must lie in (0, 1]");
    if (n < 1) throw InvalidArgument("closed form index must be >= 1");
    const int sz = p.size();

    // alpha^n P^(n+1) + (1-alpha) Y (sum_{k=0}^{n-1} (alpha P)^k), built
    // from explicit powers rather than the recurrence.
    Matrix geom = Matrix::identity(sz);  // running (alpha P)^k
    Matrix geom_sum = Matrix::identity(sz);
    for (long long k = 1; k <= n - 1; ++k) {
        Matrix next = kernels::matmul(geom, p.values());
        for (int i = 0; i < sz; ++i)
            for (int j = 0; j < sz; ++j) next(i, j) *= alpha;
        geom = std::move(next);
        for (int i = 0; i < sz; ++i)
            for (int j = 0; j < sz; ++j) geom_sum(i, j) += geom(i, j);
    }
    Matrix ysum = kernels::matmul(y.values(), geom_sum);

    Matrix ppow = p.values();  // P^(n+1)
    for (long long k = 2; k <= n + 1; ++k) ppow = kernels::matmul(ppow, p.values());
    const double an = std::pow(alpha, static_cast<double>(n));

    Matrix out(sz, sz);
    for (int i = 0; i < sz; ++i)
        for (int j = 0; j < sz; ++j)
            out(i, j) = an * ppow(i, j) + (1.0 - alpha) * ysum(i, j);
    return StochasticMatrix::adopt(std::move(out),
                                   merge_class(p.tolerance_class(), y.tolerance_class()));
}

ConvergenceReport run_alternating_diffusion(const StochasticMatrix& p, double lambda,
                                            const ConvergenceCriterion& criterion,
                                            Convention convention) {
    if (!(lambda > 0.0) || lambda > 1.0) throw InvalidArgument("lambda must lie in (0, 1]");
    const Matrix even = mix(p.values(), Matrix::identity(p.size()), lambda);
    TwoPhaseScheme scheme{
        p,
        MutationSchedule::alternating(
            p, StochasticMatrix::adopt(even, p.tolerance_class()), convention),
        std::nullopt};
    return run_scheme(scheme, criterion);
}

ConvergenceReport run_alternating_pagerank(const StochasticMatrix& p, const StochasticMatrix& y,
                                           const StochasticMatrix& j, double lambda, double alpha,
                                           AlternatingVariant variant,
                                           const ConvergenceCriterion& criterion,
                                           Convention convention) {
    check_same_size(p, y, "alternating pagerank");
    check_same_size(p, j, "alternating pagerank");
    if (!(lambda > 0.0) || lambda > 1.0) throw InvalidArgument("lambda must lie in (0, 1]");

    const bool alternate_branching = variant != AlternatingVariant::immigration_only;
    const bool alternate_immigration = variant != AlternatingVariant::branching_only;

    StochasticMatrix even_m =
        alternate_branching
            ? StochasticMatrix::adopt(mix(p.values(), Matrix::identity(p.size()), lambda),
                                      p.tolerance_class())
            : p;
    StochasticMatrix even_y =
        alternate_immigration
            ? StochasticMatrix::adopt(mix(y.values(), j.values(), lambda),
                                      merge_class(y.tolerance_class(), j.tolerance_class()))
            : y;

    TwoPhaseScheme scheme{p, MutationSchedule::alternating(p, std::move(even_m), convention),
                          ImmigrationTerm{alpha, y, std::move(even_y)}};
    return run_scheme(scheme, criterion);
}

CycleDetection detect_cycle(const std::vector<Matrix>& states,
                            const ConvergenceCriterion& criterion) {
    CycleDetection out;
    if (states.size() < 3) return out;
    const size_t last = states.size() - 1;
    const double d1 = diff_norm(states[last], states[last - 1], criterion.norm);
    const double d2 = diff_norm(states[last], states[last - 2], criterion.norm);
    if (meets(d1, criterion)) {
        out.mode = CycleMode::fixed_point;
        out.states.push_back(states[last]);
    } else if (meets(d2, criterion) && d1 >= 10.0 * criterion.epsilon) {
        out.mode = CycleMode::period_2;
        out.states.push_back(states[last - 1]);
        out.states.push_back(states[last]);
    }
    return out;
}

}  // namespace gwdiff
