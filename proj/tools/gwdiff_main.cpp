#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gwdiff/cli.hpp"

namespace {

using gwdiff::cli::RunConfig;

void add_input_flags(CLI::App* cmd, RunConfig& config, bool required_input = true) {
    auto* input = cmd->add_option("-i,--input", config.input, "input file");
    if (required_input) input->required();
    cmd->add_option("--format", config.format, "input format: matrix | edgelist")
        ->check(CLI::IsMember({"matrix", "edgelist"}));
    cmd->add_flag("--undirected", config.undirected,
                  "mirror edges when reading an edge list");
    cmd->add_option("-o,--output-dir", config.output_dir, "directory for result files");
}

void add_criterion_flags(CLI::App* cmd, RunConfig& config, std::string& norm,
                         std::string& comparison, bool& cycle_on, bool& cycle_off) {
    cmd->add_option("--norm", norm, "difference norm: frobenius | spectral | max")
        ->check(CLI::IsMember({"frobenius", "fro", "spectral", "max"}));
    cmd->add_option("--epsilon", config.epsilon, "convergence tolerance");
    cmd->add_option("--comparison", comparison, "criterion comparison: lt | le")
        ->check(CLI::IsMember({"lt", "le"}));
    cmd->add_option("--max-iters", config.max_iterations, "iteration cap");
    cmd->add_flag("--cycle-detection", cycle_on, "enable period-2 detection");
    cmd->add_flag("--no-cycle-detection", cycle_off, "disable period-2 detection");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-phase branching/mutation view of graph diffusion and pagerank"};
    app.require_subcommand(1);

    RunConfig config;
    std::string norm = "frobenius";
    std::string comparison = "lt";
    std::string convention = "first-step-odd";
    std::string variant = "both";
    bool cycle_on = false, cycle_off = false;

    auto* analyze = app.add_subcommand("analyze", "classify the chain and report pi");
    add_input_flags(analyze, config);

    auto* diffuse = app.add_subcommand("diffuse", "iterate F T to a fixed point");
    add_input_flags(diffuse, config);
    add_criterion_flags(diffuse, config, norm, comparison, cycle_on, cycle_off);
    diffuse->add_option("--mutation", config.mutation, "mutation matrix file (defaults to input)");

    auto* pagerank = app.add_subcommand("pagerank", "iterate alpha F P + (1-alpha) Y");
    add_input_flags(pagerank, config);
    add_criterion_flags(pagerank, config, norm, comparison, cycle_on, cycle_off);
    pagerank->add_option("--alpha", config.alpha, "damping factor in (0, 1]");
    pagerank->add_option("--immigration", config.immigration, "immigration matrix file")
        ->required();

    auto* alt_diffuse = app.add_subcommand("alternate-diffuse",
                                           "odd steps use T, even steps lambda T + (1-lambda) I");
    add_input_flags(alt_diffuse, config);
    add_criterion_flags(alt_diffuse, config, norm, comparison, cycle_on, cycle_off);
    alt_diffuse->add_option("--lambda", config.lambda, "even-step mixing weight in (0, 1]");
    alt_diffuse->add_option("--convention", convention,
                            "step parity convention: first-step-odd | first-step-even")
        ->check(CLI::IsMember({"first-step-odd", "first-step-even", "odd", "even"}));

    auto* alt_pagerank =
        app.add_subcommand("alternate-pagerank", "pagerank with alternating even-step operators");
    add_input_flags(alt_pagerank, config);
    add_criterion_flags(alt_pagerank, config, norm, comparison, cycle_on, cycle_off);
    alt_pagerank->add_option("--alpha", config.alpha, "damping factor in (0, 1]");
    alt_pagerank->add_option("--lambda", config.lambda, "even-step mixing weight in (0, 1]");
    alt_pagerank->add_option("--immigration", config.immigration, "odd-step immigration file")
        ->required();
    alt_pagerank->add_option("--immigration-even", config.immigration_even,
                             "even-step immigration file");
    alt_pagerank
        ->add_option("--variant", variant,
                     "which phases alternate: both | branching | immigration")
        ->check(CLI::IsMember({"both", "branching", "branching-only", "immigration",
                               "immigration-only"}));
    alt_pagerank->add_option("--convention", convention,
                             "step parity convention: first-step-odd | first-step-even")
        ->check(CLI::IsMember({"first-step-odd", "first-step-even", "odd", "even"}));

    auto* simulate = app.add_subcommand("simulate", "monte carlo forest sampling");
    add_input_flags(simulate, config);
    simulate->add_option("--generations", config.generations, "largest generation to sample");
    simulate->add_option("--replicates", config.replicates, "samples per root type");
    simulate->add_option("--seed", config.seed, "stream seed");
    simulate->add_option("--mutation", config.mutation, "mutation matrix file (defaults to input)");
    simulate->add_option("--immigration", config.immigration,
                         "immigration matrix file; switches to the immigration mechanism");
    simulate->add_option("--alpha", config.alpha, "damping factor for the immigration mechanism");

    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_option("-o,--output-dir", config.output_dir, "unused; accepted for uniformity");

    CLI11_PARSE(app, argc, argv);

    config.norm = gwdiff::norm_from_string(norm);
    config.comparison = comparison == "le" ? gwdiff::Comparison::less_or_equal
                                           : gwdiff::Comparison::strict_less;
    config.convention = gwdiff::convention_from_string(convention);
    config.variant = gwdiff::variant_from_string(variant);
    if (cycle_on || cycle_off) {
        config.cycle_detection_set = true;
        config.cycle_detection = cycle_on && !cycle_off;
    }

    for (CLI::App* sub : app.get_subcommands()) {
        config.engine = sub->get_name();
        break;
    }
    return gwdiff::cli::run(config, std::cout, std::cerr);
}
