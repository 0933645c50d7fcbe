#include "gwdiff/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "gwdiff/chain.hpp"
#include "gwdiff/forest.hpp"
#include "gwdiff/io.hpp"
#include "gwdiff/verify.hpp"

namespace gwdiff::cli {

namespace {

namespace fs = std::filesystem;

StochasticMatrix load_law(const std::string& path, const std::string& format, bool undirected) {
    if (format == "edgelist") return build_transition(io::parse_edge_list_file(path, undirected));
    if (format != "matrix") throw InvalidArgument("unknown input format '" + format + "'");
    Matrix m = io::parse_matrix_file(path);
    ValidationReport report = validate_stochastic(m, kRelaxedRowTol);
    if (!report.pass)
        throw InvalidArgument("input '" + path + "' is not row-stochastic at tolerance " +
                              std::to_string(kRelaxedRowTol) + " (worst row " +
                              std::to_string(report.worst_row) + " deviates by " +
                              std::to_string(report.worst_row_deviation) + ")");
    return normalize_rows(m);
}

bool rows_identical(const StochasticMatrix& m) {
    for (int i = 1; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            if (m(i, j) != m(0, j)) return false;
    return true;
}

ConvergenceCriterion make_criterion(const RunConfig& config, bool default_cycle_detection) {
    ConvergenceCriterion c;
    c.norm = config.norm;
    c.epsilon = config.epsilon;
    c.comparison = config.comparison;
    c.max_iterations = config.max_iterations;
    c.cycle_detection =
        config.cycle_detection_set ? config.cycle_detection : default_cycle_detection;
    return c;
}

int emit_run_artifacts(const ConvergenceReport& report, const RunConfig& config,
                       io::SummaryItems items, std::ostream& out) {
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);

    {
        std::ofstream trace(dir / "trace.csv");
        if (!trace) throw Error("cannot write trace.csv");
        io::write_trace_csv(trace, report.trace);
    }

    io::SummaryItems summary;
    summary.emplace_back("mode", to_string(report.mode));
    summary.emplace_back("iterations", std::to_string(report.iterations));
    summary.emplace_back("criterion_norm", to_string(report.criterion.norm));
    summary.emplace_back("criterion_epsilon", io::format_double(report.criterion.epsilon));
    summary.emplace_back("comparison", to_string(report.criterion.comparison));
    summary.emplace_back("convention", to_string(report.convention));
    for (auto& item : items) summary.push_back(std::move(item));
    for (size_t k = 0; k < report.final_states.size(); ++k) {
        const std::string name = "final_" + std::to_string(k) + ".csv";
        io::write_matrix_file((dir / name).string(), report.final_states[k].values());
        summary.emplace_back("final_state_file_" + std::to_string(k), name);
    }

    {
        std::ofstream sfile(dir / "summary.txt");
        if (!sfile) throw Error("cannot write summary.txt");
        io::write_summary(sfile, summary);
    }
    io::write_summary(out, summary);
    return report.mode == CycleMode::exhausted ? 2 : 0;
}

int run_analyze(const RunConfig& config, std::ostream& out) {
    const StochasticMatrix p = load_law(config.input, config.format, config.undirected);
    const ChainClassification classification = classify(p);
    StationaryResult pi;
    const bool have_pi = classification.regular;
    if (have_pi) pi = stationary(p);
    const SpectrumSummary spectrum = subdominant_modulus(p);

    const io::SummaryItems summary =
        io::analysis_summary(classification, have_pi ? &pi : nullptr, &spectrum);
    fs::create_directories(config.output_dir);
    std::ofstream sfile(fs::path(config.output_dir) / "summary.txt");
    if (!sfile) throw Error("cannot write summary.txt");
    io::write_summary(sfile, summary);
    io::write_summary(out, summary);
    return 0;
}

int run_simulate(const RunConfig& config, std::ostream& out) {
    const StochasticMatrix p = load_law(config.input, config.format, config.undirected);
    if (config.generations < 1) throw InvalidArgument("generations must be >= 1");

    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    io::SummaryItems summary;
    summary.emplace_back("mode", "simulate");
    summary.emplace_back("generations", std::to_string(config.generations));
    summary.emplace_back("replicates", std::to_string(config.replicates));
    summary.emplace_back("seed", std::to_string(config.seed));

    const bool with_immigration = !config.immigration.empty();
    Mechanism mechanism = [&]() -> Mechanism {
        if (with_immigration) {
            StochasticMatrix y = load_law(config.immigration, "matrix", false);
            return ImmigrationMechanism{p, std::move(y), config.alpha};
        }
        StochasticMatrix t =
            config.mutation.empty() ? p : load_law(config.mutation, "matrix", false);
        return PureMutationMechanism{p, std::move(t)};
    }();
    if (with_immigration) {
        summary.emplace_back("mechanism", "immigration");
        summary.emplace_back("alpha", io::format_double(config.alpha));
    } else {
        summary.emplace_back("mechanism", "pure-mutation");
    }
    const SimConfig sim{config.generations, config.replicates, config.seed,
                        std::move(mechanism)};

    for (int g = 1; g <= config.generations; ++g) {
        EmpiricalLaw law;
        Matrix analytic;
        if (with_immigration) {
            law = estimate_pagerank_law(sim, g);
            const auto& mech = std::get<ImmigrationMechanism>(sim.mechanism);
            analytic = p.values();
            for (int k = 1; k <= g; ++k)
                analytic = pagerank_step(analytic, p.values(), mech.immigration.values(),
                                         config.alpha);
        } else {
            law = estimate_law(sim, g);
            const auto& mech = std::get<PureMutationMechanism>(sim.mechanism);
            analytic = generation_law(p, mech.mutation, g).values();
        }
        const std::string name = "empirical_g" + std::to_string(g) + ".csv";
        {
            std::ofstream lfile(dir / name);
            if (!lfile) throw Error("cannot write " + name);
            io::write_empirical_law(lfile, law,
                                    with_immigration ? "immigration" : "pure-mutation");
        }
        double tv = 0.0;
        for (int root = 0; root < law.n; ++root)
            tv = std::max(tv, total_variation_row(law, analytic, root));
        summary.emplace_back("law_file_g" + std::to_string(g), name);
        summary.emplace_back("tv_max_g" + std::to_string(g), io::format_double(tv));
    }

    std::ofstream sfile(dir / "summary.txt");
    if (!sfile) throw Error("cannot write summary.txt");
    io::write_summary(sfile, summary);
    io::write_summary(out, summary);
    return 0;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.engine == "verify") {
            const int failures = verify::run_all(out);
            return failures == 0 ? 0 : 1;
        }
        if (config.engine == "analyze") return run_analyze(config, out);
        if (config.engine == "simulate") return run_simulate(config, out);

        if (config.engine == "diffuse") {
            const StochasticMatrix p = load_law(config.input, config.format, config.undirected);
            const StochasticMatrix t =
                config.mutation.empty() ? p : load_law(config.mutation, "matrix", false);
            const ConvergenceReport report =
                run_diffusion(p, t, make_criterion(config, false));
            return emit_run_artifacts(report, config, {}, out);
        }
        if (config.engine == "alternate-diffuse") {
            const StochasticMatrix p = load_law(config.input, config.format, config.undirected);
            const ConvergenceReport report = run_alternating_diffusion(
                p, config.lambda, make_criterion(config, false), config.convention);
            io::SummaryItems extra;
            extra.emplace_back("lambda", io::format_double(config.lambda));
            return emit_run_artifacts(report, config, std::move(extra), out);
        }
        if (config.engine == "pagerank") {
            if (config.immigration.empty())
                throw InvalidArgument("pagerank requires --immigration <file>");
            const StochasticMatrix p = load_law(config.input, config.format, config.undirected);
            const StochasticMatrix y = load_law(config.immigration, "matrix", false);
            const ConvergenceReport report =
                run_pagerank(p, y, config.alpha, make_criterion(config, false));
            io::SummaryItems extra;
            extra.emplace_back("alpha", io::format_double(config.alpha));
            extra.emplace_back("immigration_rows_identical",
                               rows_identical(y) ? "true" : "false");
            return emit_run_artifacts(report, config, std::move(extra), out);
        }
        if (config.engine == "alternate-pagerank") {
            if (config.immigration.empty())
                throw InvalidArgument("alternate-pagerank requires --immigration <file>");
            const bool needs_even = config.variant != AlternatingVariant::branching_only;
            if (needs_even && config.immigration_even.empty())
                throw InvalidArgument(
                    "alternate-pagerank with immigration alternation requires "
                    "--immigration-even <file>");
            const StochasticMatrix p = load_law(config.input, config.format, config.undirected);
            const StochasticMatrix y = load_law(config.immigration, "matrix", false);
            const StochasticMatrix j =
                needs_even ? load_law(config.immigration_even, "matrix", false) : y;
            const ConvergenceReport report = run_alternating_pagerank(
                p, y, j, config.lambda, config.alpha, config.variant,
                make_criterion(config, true), config.convention);
            io::SummaryItems extra;
            extra.emplace_back("alpha", io::format_double(config.alpha));
            extra.emplace_back("lambda", io::format_double(config.lambda));
            extra.emplace_back("variant", to_string(config.variant));
            extra.emplace_back("immigration_rows_identical",
                               rows_identical(y) ? "true" : "false");
            return emit_run_artifacts(report, config, std::move(extra), out);
        }
        throw InvalidArgument("unknown engine '" + config.engine + "'");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gwdiff::cli
