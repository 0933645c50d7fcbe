#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gwdiff/stochastic.hpp"

namespace gwdiff {

enum class Comparison { strict_less, less_or_equal };
enum class Convention { first_step_odd, first_step_even };
enum class CycleMode { none, fixed_point, period_2, exhausted };
enum class AlternatingVariant { both, branching_only, immigration_only };

const char* to_string(Comparison c);
const char* to_string(Convention c);
const char* to_string(CycleMode m);
const char* to_string(AlternatingVariant v);
Convention convention_from_string(const std::string& s);
AlternatingVariant variant_from_string(const std::string& s);

struct ConvergenceCriterion {
    Norm norm = Norm::frobenius;
    double epsilon = 1e-8;
    Comparison comparison = Comparison::strict_less;
    long long max_iterations = 100000;
    bool cycle_detection = false;
};

struct TraceEntry {
    long long iteration;   // 1-based update step; the initial state is step 0
    double one_step_diff;
    double two_step_diff;  // NaN at step 1
};

struct ConvergenceReport {
    CycleMode mode = CycleMode::none;
    long long iterations = 0;
    std::vector<StochasticMatrix> final_states;  // 1 matrix, or 2 for period-2
    std::vector<TraceEntry> trace;
    ConvergenceCriterion criterion;
    Convention convention = Convention::first_step_odd;
};

// Mutation matrices by step parity; odd == even for constant schedules.
struct MutationSchedule {
    StochasticMatrix odd;
    StochasticMatrix even;
    Convention convention = Convention::first_step_odd;
    bool is_alternating = false;

    static MutationSchedule constant(StochasticMatrix t);
    static MutationSchedule alternating(StochasticMatrix odd_op, StochasticMatrix even_op,
                                        Convention convention);
};

// F' = alpha F M + (1-alpha) N with N = odd/even immigration matrix.
struct ImmigrationTerm {
    double alpha = 0.9;
    StochasticMatrix odd;
    StochasticMatrix even;
};

struct TwoPhaseScheme {
    StochasticMatrix initial;
    MutationSchedule schedule;
    std::optional<ImmigrationTerm> immigration;
};

// Single update steps, exposed so trajectories can be replayed exactly.
Matrix diffuse_step(const Matrix& f, const Matrix& t);
StochasticMatrix diffuse_step(const StochasticMatrix& f, const StochasticMatrix& t);
Matrix pagerank_step(const Matrix& f, const Matrix& p, const Matrix& y, double alpha);
// Same map as pagerank_step, evaluated as [alpha F | (1-alpha) I] * [P; Y].
Matrix block_form_step(const Matrix& f, const Matrix& p, const Matrix& y, double alpha);

// Entry (i,j) of F_prev * T split into the stay term F_prev(i,j) T(j,j)
// plus the sum of arrival terms over k != j.
double mutation_compose_entrywise(const Matrix& f_prev, const Matrix& t, int i, int j);

// Law of generation n: P T^(n-1), n >= 1.
StochasticMatrix generation_law(const StochasticMatrix& p, const StochasticMatrix& t, long long n);

ConvergenceReport run_scheme(const TwoPhaseScheme& scheme, const ConvergenceCriterion& criterion);

ConvergenceReport run_diffusion(const StochasticMatrix& p, const ConvergenceCriterion& criterion);
ConvergenceReport run_diffusion(const StochasticMatrix& f0, const StochasticMatrix& t,
                                const ConvergenceCriterion& criterion);
ConvergenceReport run_pagerank(const StochasticMatrix& p, const StochasticMatrix& y, double alpha,
                               const ConvergenceCriterion& criterion);
// Independent route: literal block products, not the fused update.
ConvergenceReport run_block_form(const StochasticMatrix& p, const StochasticMatrix& y, double alpha,
                                 const ConvergenceCriterion& criterion);

// F_n = alpha^n P^(n+1) + (1-alpha) Y sum_{k=0}^{n-1} (alpha P)^k, n >= 1.
StochasticMatrix pagerank_closed_form(const StochasticMatrix& p, const StochasticMatrix& y,
                                      double alpha, long long n);

ConvergenceReport run_alternating_diffusion(const StochasticMatrix& p, double lambda,
                                            const ConvergenceCriterion& criterion,
                                            Convention convention);
ConvergenceReport run_alternating_pagerank(const StochasticMatrix& p, const StochasticMatrix& y,
                                           const StochasticMatrix& j, double lambda, double alpha,
                                           AlternatingVariant variant,
                                           const ConvergenceCriterion& criterion,
                                           Convention convention);

struct CycleDetection {
    CycleMode mode = CycleMode::none;
    std::vector<Matrix> states;  // representative states for the detected mode
};

// Inspect a recorded trajectory: fixed point if the last one-step diff
// meets the criterion, period-2 if the two-step diff meets it while the
// one-step diff stays >= 10x epsilon.
CycleDetection detect_cycle(const std::vector<Matrix>& states,
                            const ConvergenceCriterion& criterion);

}  // namespace gwdiff
