#pragma once

#include <optional>
#include <vector>

#include "gwdiff/stochastic.hpp"

namespace gwdiff {

struct ChainClassification {
    std::vector<std::vector<int>> classes;  // sorted members, ordered by smallest member
    bool irreducible = false;
    std::optional<int> period;              // engaged iff irreducible
    bool regular = false;
    std::optional<int> regularity_index;    // smallest k with T^k > 0, engaged iff regular
};

std::vector<std::vector<int>> communication_classes(const StochasticMatrix& t);
bool is_irreducible(const StochasticMatrix& t);

// gcd of cycle lengths through state 0; requires irreducibility.
int period(const StochasticMatrix& t);

// Smallest k <= (n-1)^2 + 1 with T^k entrywise positive, or nullopt.
std::optional<int> regularity_index(const StochasticMatrix& t);

ChainClassification classify(const StochasticMatrix& t);

enum class StationaryMethod { power_iteration, linear_solve };

struct StationaryResult {
    std::vector<double> pi;
    double residual = 0.0;  // max_j |(pi T)_j - pi_j|
    StationaryMethod method = StationaryMethod::linear_solve;
};

StationaryResult stationary_power(const StochasticMatrix& t);
StationaryResult stationary_solve(const StochasticMatrix& t);
// Requires a regular chain; runs both routes and cross-checks them to 1e-10.
StationaryResult stationary(const StochasticMatrix& t);

// T^n for the first n with max|T^(n+1) - T^n| < tol. Requires regularity.
StochasticMatrix power_limit(const StochasticMatrix& t, double tol, long long max_power = 1000000);

struct SpectrumSummary {
    double dominant = 1.0;
    double subdominant_modulus = 0.0;
    double gap = 1.0;
};

// |lambda_2| by power iteration on T - 1*w (w the stationary row of the
// lazy chain), with a two-term recurrence fit so negative-real and
// complex-conjugate subdominant pairs converge too.
SpectrumSummary subdominant_modulus(const StochasticMatrix& t);

}  // namespace gwdiff
