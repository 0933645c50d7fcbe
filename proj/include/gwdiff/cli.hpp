#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "gwdiff/evolution.hpp"

namespace gwdiff::cli {

// Everything a subcommand needs, decoupled from flag parsing so runs are
// testable in-process.
struct RunConfig {
    std::string engine;  // analyze | diffuse | pagerank | alternate-diffuse |
                         // alternate-pagerank | simulate | verify
    std::string input;
    std::string format = "matrix";  // matrix | edgelist
    bool undirected = false;

    std::string immigration;       // Y file (pagerank engines, simulate)
    std::string immigration_even;  // J file (alternate-pagerank)
    std::string mutation;          // optional T file; defaults to the input law

    Norm norm = Norm::frobenius;
    double epsilon = 1e-8;
    Comparison comparison = Comparison::strict_less;
    long long max_iterations = 100000;
    bool cycle_detection = false;
    bool cycle_detection_set = false;

    double alpha = 0.9;
    double lambda = 1.0;
    AlternatingVariant variant = AlternatingVariant::both;
    Convention convention = Convention::first_step_odd;

    int generations = 3;
    long long replicates = 100000;
    std::uint64_t seed = 1;

    std::string output_dir = ".";
};

// Exit status: 0 converged/completed, 2 exhausted without meeting the
// criterion, 1 invalid input.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gwdiff::cli
