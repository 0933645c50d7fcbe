#include "gwdiff/chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "gwdiff/kernels.hpp"

namespace gwdiff {

namespace {

std::vector<std::vector<int>> adjacency(const StochasticMatrix& t) {
    const int n = t.size();
    std::vector<std::vector<int>> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (t(i, j) > 0.0) out[i].push_back(j);
    return out;
}

}  // namespace

std::vector<std::vector<int>> communication_classes(const StochasticMatrix& t) {
    const int n = t.size();
    const auto adj = adjacency(t);

    // Iterative Tarjan.
    std::vector<int> index(n, -1), low(n, 0), stack_pos(n, -1);
    std::vector<int> scc_of(n, -1);
    std::vector<int> stack;
    int next_index = 0, scc_count = 0;

    struct Frame {
        int v;
        size_t edge;
    };
    std::vector<Frame> frames;

    for (int start = 0; start < n; ++start) {
        if (index[start] != -1) continue;
        frames.push_back({start, 0});
        index[start] = low[start] = next_index++;
        stack_pos[start] = static_cast<int>(stack.size());
        stack.push_back(start);
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < adj[f.v].size()) {
                const int w = adj[f.v][f.edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack_pos[w] = static_cast<int>(stack.size());
                    stack.push_back(w);
                    frames.push_back({w, 0});
                } else if (stack_pos[w] != -1) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                const int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        stack_pos[w] = -1;
                        scc_of[w] = scc_count;
                        if (w == v) break;
                    }
                    ++scc_count;
                }
            }
        }
    }

    std::vector<std::vector<int>> classes(scc_count);
    for (int v = 0; v < n; ++v) classes[scc_of[v]].push_back(v);
    for (auto& c : classes) std::sort(c.begin(), c.end());
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return classes;
}

bool is_irreducible(const StochasticMatrix& t) {
    return communication_classes(t).size() == 1;
}

int period(const StochasticMatrix& t) {
    if (!is_irreducible(t)) throw NotIrreducible("period is defined for irreducible chains only");
    const int n = t.size();
    const auto adj = adjacency(t);

    // BFS levels from state 0; the period is the gcd of
    // level(u) + 1 - level(v) over all edges (u, v).
    std::vector<int> level(n, -1);
    std::vector<int> queue{0};
    level[0] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int v : adj[u])
            if (level[v] == -1) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
    }
    long long g = 0;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) g = std::gcd(g, static_cast<long long>(level[u]) + 1 - level[v]);
    return static_cast<int>(g);
}

namespace {

// Rows of a boolean matrix packed into 64-bit blocks.
struct BitRows {
    int n = 0, words = 0;
    std::vector<std::uint64_t> bits;

    explicit BitRows(int size) : n(size), words((size + 63) / 64), bits(static_cast<size_t>(size) * words, 0) {}

    void set(int i, int j) { bits[static_cast<size_t>(i) * words + j / 64] |= 1ull << (j % 64); }

    bool all_ones() const {
        for (int i = 0; i < n; ++i) {
            const std::uint64_t* row = &bits[static_cast<size_t>(i) * words];
            for (int w = 0; w < words; ++w) {
                std::uint64_t expect = ~0ull;
                if (w == words - 1 && n % 64 != 0) expect = (1ull << (n % 64)) - 1;
                if (row[w] != expect) return false;
            }
        }
        return true;
    }
};

// C = A ∘ B over the boolean semiring.
BitRows bool_product(const BitRows& a, const BitRows& b) {
    BitRows c(a.n);
    for (int i = 0; i < a.n; ++i) {
        std::uint64_t* ci = &c.bits[static_cast<size_t>(i) * c.words];
        const std::uint64_t* ai = &a.bits[static_cast<size_t>(i) * a.words];
        for (int k = 0; k < a.n; ++k) {
            if (!(ai[k / 64] >> (k % 64) & 1)) continue;
            const std::uint64_t* bk = &b.bits[static_cast<size_t>(k) * b.words];
            for (int w = 0; w < a.words; ++w) ci[w] |= bk[w];
        }
    }
    return c;
}

}  // namespace

std::optional<int> regularity_index(const StochasticMatrix& t) {
    // Regular iff irreducible and aperiodic; checking that first bounds the
    // power search by Wielandt's (n-1)^2 + 1.
    if (!is_irreducible(t)) return std::nullopt;
    if (period(t) != 1) return std::nullopt;

    const int n = t.size();
    BitRows base(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (t(i, j) > 0.0) base.set(i, j);

    const long long bound = static_cast<long long>(n - 1) * (n - 1) + 1;
    BitRows power = base;
    for (long long k = 1; k <= bound; ++k) {
        if (power.all_ones()) return static_cast<int>(k);
        power = bool_product(power, base);
    }
    return std::nullopt;
}

ChainClassification classify(const StochasticMatrix& t) {
    ChainClassification c;
    c.classes = communication_classes(t);
    c.irreducible = c.classes.size() == 1;
    if (c.irreducible) c.period = period(t);
    c.regularity_index = regularity_index(t);
    c.regular = c.regularity_index.has_value();
    return c;
}

namespace {

std::vector<double> left_multiply(const std::vector<double>& x, const StochasticMatrix& t) {
    const int n = t.size();
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        const double* row = t.row(i);
        for (int j = 0; j < n; ++j) y[j] += xi * row[j];
    }
    return y;
}

double stationary_residual(const std::vector<double>& pi, const StochasticMatrix& t) {
    const auto y = left_multiply(pi, t);
    double worst = 0.0;
    for (size_t j = 0; j < y.size(); ++j) worst = std::max(worst, std::fabs(y[j] - pi[j]));
    return worst;
}

void normalize_probability(std::vector<double>& x) {
    double s = 0.0;
    for (double& v : x) {
        if (v < 0.0 && v > -1e-12) v = 0.0;
        s += v;
    }
    for (double& v : x) v /= s;
}

}  // namespace

StationaryResult stationary_power(const StochasticMatrix& t) {
    const int n = t.size();
    std::vector<double> x(n, 1.0 / n);
    for (long long it = 0; it < 2000000; ++it) {
        auto y = left_multiply(x, t);
        normalize_probability(y);
        double diff = 0.0;
        for (int j = 0; j < n; ++j) diff = std::max(diff, std::fabs(y[j] - x[j]));
        x = std::move(y);
        if (diff <= 1e-15) return {x, stationary_residual(x, t), StationaryMethod::power_iteration};
    }
    throw NoConvergence("stationary power iteration did not settle");
}

StationaryResult stationary_solve(const StochasticMatrix& t) {
    // Solve pi (T - I) = 0 with the last equation replaced by sum(pi) = 1,
    // i.e. columns of (T^T - I) as rows of the system.
    const int n = t.size();
    Matrix a(n, n);
    std::vector<double> rhs(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = t(j, i) - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    rhs[n - 1] = 1.0;

    // Gaussian elimination with partial pivoting.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
        if (std::fabs(a(pivot, col)) < 1e-300)
            throw NoConvergence("singular stationary system; chain is not regular");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            std::swap(rhs[pivot], rhs[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> pi(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int j = r + 1; j < n; ++j) s -= a(r, j) * pi[j];
        pi[r] = s / a(r, r);
    }
    normalize_probability(pi);
    return {pi, stationary_residual(pi, t), StationaryMethod::linear_solve};
}

StationaryResult stationary(const StochasticMatrix& t) {
    if (!regularity_index(t).has_value())
        throw NotRegular("stationary distribution requires a regular chain");
    StationaryResult solved = stationary_solve(t);
    StationaryResult powered = stationary_power(t);
    double gap = 0.0;
    for (size_t j = 0; j < solved.pi.size(); ++j)
        gap = std::max(gap, std::fabs(solved.pi[j] - powered.pi[j]));
    if (gap > 1e-10)
        throw NoConvergence("stationary routes disagree by " + std::to_string(gap));
    if (solved.residual > 1e-10)
        throw NoConvergence("stationary residual " + std::to_string(solved.residual));
    return solved;
}

StochasticMatrix power_limit(const StochasticMatrix& t, double tol, long long max_power) {
    if (!(tol > 0.0)) throw InvalidArgument("power_limit tolerance must be positive");
    if (!regularity_index(t).has_value())
        throw NotRegular("power limit requires a regular chain");
    Matrix q = t.values();
    for (long long n = 1; n <= max_power; ++n) {
        Matrix next = kernels::matmul(q, t.values());
        if (kernels::max_abs_diff(next, q) < tol)
            return StochasticMatrix::adopt(std::move(q), t.tolerance_class());
        q = std::move(next);
    }
    throw NoConvergence("power limit not reached within max_power");
}

SpectrumSummary subdominant_modulus(const StochasticMatrix& t) {
    const int n = t.size();
    SpectrumSummary out;
    if (n == 1) {
        out.subdominant_modulus = 0.0;
        out.gap = 1.0;
        return out;
    }

    // Left fixed vector of T via the lazy chain (T + I)/2, which converges
    // for periodic T as well.
    std::vector<double> w(n, 1.0 / n);
    for (long long it = 0; it < 2000000; ++it) {
        auto y = left_multiply(w, t);
        double diff = 0.0;
        for (int j = 0; j < n; ++j) {
            y[j] = 0.5 * (y[j] + w[j]);
            diff = std::max(diff, std::fabs(y[j] - w[j]));
        }
        normalize_probability(y);
        w = std::move(y);
        if (diff <= 1e-14) break;
    }

    // Deflate the dominant eigenvalue: B = T - 1 w.
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = t(i, j) - w[j];

    auto apply = [&](const std::vector<double>& x) {
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i) {
            const double* row = b.row(i);
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += row[j] * x[j];
            y[i] = s;
        }
        return y;
    };
    auto norm2 = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
        return s;
    };

    std::vector<double> u(n);
    std::uint64_t h = 0x5eed5eed5eed5eedull;
    for (int i = 0; i < n; ++i) {
        h ^= h >> 12;
        h ^= h << 25;
        h ^= h >> 27;
        u[i] = static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
    }
    {
        const double nu = norm2(u);
        for (double& v : u) v /= nu;
    }

    double estimate = 0.0;
    int stable = 0;
    for (int sweep = 0; sweep < 10000; ++sweep) {
        auto v = apply(u);
        const double nv = norm2(v);
        if (nv <= 1e-300) {
            out.subdominant_modulus = 0.0;
            out.gap = 1.0;
            return out;
        }
        auto s = apply(v);

        // Fit s ≈ a v + b u; the roots of m^2 - a m - b cover a real pair
        // or a complex-conjugate pair of dominant eigenvalues of B.
        const double vv = dot(v, v), uu = dot(u, u), vu = dot(v, u);
        const double vs = dot(v, s), us = dot(u, s);
        const double det = vv * uu - vu * vu;
        double m;
        if (det > 1e-12 * vv * uu) {
            const double fa = (uu * vs - vu * us) / det;
            const double fb = (vv * us - vu * vs) / det;
            const double disc = fa * fa + 4.0 * fb;
            if (disc >= 0.0) {
                const double r = std::sqrt(disc);
                m = std::max(std::fabs(fa + r), std::fabs(fa - r)) / 2.0;
            } else {
                m = std::sqrt(-fb);
            }
        } else {
            m = nv;
        }

        if (sweep > 0 && std::fabs(m - estimate) <= 1e-9 * std::max(1.0, m)) {
            if (++stable >= 3) {
                estimate = m;
                break;
            }
        } else {
            stable = 0;
        }
        estimate = m;
        for (int i = 0; i < n; ++i) u[i] = v[i] / nv;
        if (sweep == 9999)
            throw NoConvergence("subdominant modulus estimate did not settle");
    }

    out.subdominant_modulus = std::min(std::max(estimate, 0.0), 1.0);
    out.gap = out.dominant - out.subdominant_modulus;
    return out;
}

}  // namespace gwdiff
