#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gwdiff/stochastic.hpp"

namespace gwdiff {

// Counter-based generator: every draw is a hash of (seed, root, replicate,
// draw index), so replicates are independent streams and the schedule of
// parallel execution cannot change any value.
struct CounterRng {
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t root, std::uint64_t replicate,
                             std::uint64_t draw);
    static double uniform(std::uint64_t seed, std::uint64_t root, std::uint64_t replicate,
                          std::uint64_t draw);
};

// Inverse-CDF draw from one probability row. Falls back to the last
// positive entry when rounding pushes the cumulative sum below u.
int categorical_draw(const double* row, int n, double u);

struct PureMutationMechanism {
    StochasticMatrix branch;    // P, generation-1 law
    StochasticMatrix mutation;  // T, applied per later generation
};

struct ImmigrationMechanism {
    StochasticMatrix branch;       // P
    StochasticMatrix immigration;  // Y
    double alpha = 0.9;
};

using Mechanism = std::variant<PureMutationMechanism, ImmigrationMechanism>;

struct SimConfig {
    int generations = 1;
    long long replicates = 0;
    std::uint64_t seed = 0;
    Mechanism mechanism;
};

struct EmpiricalLaw {
    int n = 0;
    int generation = 0;
    long long replicates = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> counts;  // n x n, row-major by root

    std::uint64_t count(int root, int child) const {
        return counts[static_cast<size_t>(root) * n + child];
    }
    Matrix frequencies() const;
};

// Type of one generation-g descendant of the given root: one branch draw
// from P, then g-1 mutation draws from T.
int sample_generation_child(const StochasticMatrix& p, const StochasticMatrix& t, int generation,
                            int root, std::uint64_t seed, std::uint64_t replicate);

// One draw from the level-n immigration forest: descend levels n..1
// flipping Bernoulli(alpha); on immigration restart from Y, then mutate
// back up through the levels walked.
int sample_pagerank_child(const StochasticMatrix& p, const StochasticMatrix& y, double alpha,
                          long long level, int root, std::uint64_t seed, std::uint64_t replicate,
                          long long depth_cap = 10000);

EmpiricalLaw estimate_law_serial(const SimConfig& config, int generation);
EmpiricalLaw estimate_law(const SimConfig& config, int generation);
EmpiricalLaw estimate_pagerank_law_serial(const SimConfig& config, long long level);
EmpiricalLaw estimate_pagerank_law(const SimConfig& config, long long level);

// (1/2) sum_j |p_j - q_j|
double total_variation(const std::vector<double>& p, const std::vector<double>& q);
double total_variation_row(const EmpiricalLaw& law, const Matrix& reference, int root);

}  // namespace gwdiff
