#include "gwdiff/forest.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gwdiff {

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t seed, std::uint64_t root, std::uint64_t replicate,
                              std::uint64_t draw) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ root);
    h = mix64(h ^ replicate);
    h = mix64(h ^ draw);
    return h;
}

double CounterRng::uniform(std::uint64_t seed, std::uint64_t root, std::uint64_t replicate,
                           std::uint64_t draw) {
    return static_cast<double>(mix(seed, root, replicate, draw) >> 11) * 0x1.0p-53;
}

int categorical_draw(const double* row, int n, double u) {
    double cum = 0.0;
    int last_positive = -1;
    for (int j = 0; j < n; ++j) {
        const double p = row[j];
        if (p > 0.0) last_positive = j;
        cum += p;
        if (u < cum) return p > 0.0 ? j : last_positive;
    }
    if (last_positive < 0) throw InvalidArgument("categorical draw from an all-zero row");
    return last_positive;
}

namespace {

int checked_root(int root, int n) {
    if (root < 0 || root >= n)
        throw IndexOutOfRange("root " + std::to_string(root) + " out of range for size " +
                              std::to_string(n));
    return root;
}

}  // namespace

int sample_generation_child(const StochasticMatrix& p, const StochasticMatrix& t, int generation,
                            int root, std::uint64_t seed, std::uint64_t replicate) {
    if (p.size() != t.size()) throw DimensionMismatch("branch and mutation laws differ in size");
    if (generation < 1) throw InvalidArgument("generation must be >= 1");
    checked_root(root, p.size());
    const int n = p.size();
    int type = categorical_draw(p.row(root), n, CounterRng::uniform(seed, root, replicate, 0));
    for (int g = 2; g <= generation; ++g)
        type = categorical_draw(t.row(type), n,
                                CounterRng::uniform(seed, root, replicate, g - 1));
    return type;
}

int sample_pagerank_child(const StochasticMatrix& p, const StochasticMatrix& y, double alpha,
                          long long level, int root, std::uint64_t seed, std::uint64_t replicate,
                          long long depth_cap) {
    if (p.size() != y.size()) throw DimensionMismatch("branch and immigration laws differ in size");
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidArgument("alpha must lie in (0, 1]");
    if (level < 0) throw InvalidArgument("level must be >= 0");
    if (level > depth_cap)
        throw RecursionDepthExceeded("level " + std::to_string(level) + " exceeds depth cap " +
                                     std::to_string(depth_cap));
    checked_root(root, p.size());
    const int n = p.size();
    std::uint64_t draw = 0;

    // Walk down levels l = level..1: with probability alpha the lineage
    // continues to the next level down, otherwise it was started by an
    // immigrant at this level.
    long long continued = 0;
    bool immigrated = false;
    for (long long l = level; l >= 1; --l) {
        const double u = CounterRng::uniform(seed, root, replicate, draw++);
        if (u < alpha) {
            ++continued;
        } else {
            immigrated = true;
            break;
        }
    }

    int type;
    if (immigrated) {
        type = categorical_draw(y.row(root), n, CounterRng::uniform(seed, root, replicate, draw++));
        // Mutate back up through the levels the lineage survived.
        for (long long g = 0; g < continued; ++g)
            type = categorical_draw(p.row(type), n,
                                    CounterRng::uniform(seed, root, replicate, draw++));
    } else {
        // Lineage reaches the base: a branch draw, then one mutation per level.
        type = categorical_draw(p.row(root), n, CounterRng::uniform(seed, root, replicate, draw++));
        for (long long g = 0; g < level; ++g)
            type = categorical_draw(p.row(type), n,
                                    CounterRng::uniform(seed, root, replicate, draw++));
    }
    return type;
}

namespace {

template <typename Sampler>
EmpiricalLaw estimate(int n, long long replicates, std::uint64_t seed, int generation,
                      Sampler&& sample, bool parallel) {
    if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
    EmpiricalLaw law;
    law.n = n;
    law.generation = generation;
    law.replicates = replicates;
    law.seed = seed;
    law.counts.assign(static_cast<size_t>(n) * n, 0);

    const long long total = static_cast<long long>(n) * replicates;
    if (!parallel) {
        for (long long idx = 0; idx < total; ++idx) {
            const int root = static_cast<int>(idx / replicates);
            const long long rep = idx % replicates;
            const int child = sample(root, static_cast<std::uint64_t>(rep));
            ++law.counts[static_cast<size_t>(root) * n + child];
        }
        return law;
    }

#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(static_cast<size_t>(n) * n, 0);
#pragma omp for schedule(static) nowait
        for (long long idx = 0; idx < total; ++idx) {
            const int root = static_cast<int>(idx / replicates);
            const long long rep = idx % replicates;
            const int child = sample(root, static_cast<std::uint64_t>(rep));
            ++local[static_cast<size_t>(root) * n + child];
        }
#pragma omp critical
        for (size_t i = 0; i < local.size(); ++i) law.counts[i] += local[i];
    }
#else
    for (long long idx = 0; idx < total; ++idx) {
        const int root = static_cast<int>(idx / replicates);
        const long long rep = idx % replicates;
        const int child = sample(root, static_cast<std::uint64_t>(rep));
        ++law.counts[static_cast<size_t>(root) * n + child];
    }
#endif
    return law;
}

const PureMutationMechanism& pure_mechanism(const SimConfig& config) {
    if (const auto* m = std::get_if<PureMutationMechanism>(&config.mechanism)) return *m;
    throw InvalidArgument("config does not carry a pure branching-mutation mechanism");
}

const ImmigrationMechanism& immigration_mechanism(const SimConfig& config) {
    if (const auto* m = std::get_if<ImmigrationMechanism>(&config.mechanism)) return *m;
    throw InvalidArgument("config does not carry an immigration mechanism");
}

EmpiricalLaw estimate_law_impl(const SimConfig& config, int generation, bool parallel) {
    const auto& mech = pure_mechanism(config);
    if (mech.branch.size() != mech.mutation.size())
        throw DimensionMismatch("branch and mutation laws differ in size");
    if (generation < 1 || generation > config.generations)
        throw InvalidArgument("generation " + std::to_string(generation) +
                              " outside configured range 1.." +
                              std::to_string(config.generations));
    return estimate(
        mech.branch.size(), config.replicates, config.seed, generation,
        [&](int root, std::uint64_t rep) {
            return sample_generation_child(mech.branch, mech.mutation, generation, root,
                                           config.seed, rep);
        },
        parallel);
}

EmpiricalLaw estimate_pagerank_law_impl(const SimConfig& config, long long level, bool parallel) {
    const auto& mech = immigration_mechanism(config);
    // Validate loop-invariant preconditions here; exceptions must not be
    // raised inside the parallel region.
    if (mech.branch.size() != mech.immigration.size())
        throw DimensionMismatch("branch and immigration laws differ in size");
    if (!(mech.alpha > 0.0) || mech.alpha > 1.0) throw InvalidArgument("alpha must lie in (0, 1]");
    if (level < 0) throw InvalidArgument("level must be >= 0");
    if (level > 10000)
        throw RecursionDepthExceeded("level " + std::to_string(level) + " exceeds depth cap 10000");
    return estimate(
        mech.branch.size(), config.replicates, config.seed, static_cast<int>(level),
        [&](int root, std::uint64_t rep) {
            return sample_pagerank_child(mech.branch, mech.immigration, mech.alpha, level, root,
                                         config.seed, rep);
        },
        parallel);
}

}  // namespace

EmpiricalLaw estimate_law_serial(const SimConfig& config, int generation) {
    return estimate_law_impl(config, generation, false);
}

EmpiricalLaw estimate_law(const SimConfig& config, int generation) {
    return estimate_law_impl(config, generation, true);
}

EmpiricalLaw estimate_pagerank_law_serial(const SimConfig& config, long long level) {
    return estimate_pagerank_law_impl(config, level, false);
}

EmpiricalLaw estimate_pagerank_law(const SimConfig& config, long long level) {
    return estimate_pagerank_law_impl(config, level, true);
}

Matrix EmpiricalLaw::frequencies() const {
    Matrix f(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            f(i, j) = static_cast<double>(count(i, j)) / static_cast<double>(replicates);
    return f;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw DimensionMismatch("total variation size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

double total_variation_row(const EmpiricalLaw& law, const Matrix& reference, int root) {
    if (reference.rows() != law.n || reference.cols() != law.n)
        throw DimensionMismatch("reference law size mismatch");
    checked_root(root, law.n);
    double s = 0.0;
    for (int j = 0; j < law.n; ++j) {
        const double freq = static_cast<double>(law.count(root, j)) /
                            static_cast<double>(law.replicates);
        s += std::fabs(freq - reference(root, j));
    }
    return 0.5 * s;
}

}  // namespace gwdiff
