#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "resilience/cli/commands.hpp"

using resilience::cli::RunConfig;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg, bool multiple_inputs = false) {
    auto* input = cmd->add_option("--input", cfg.inputs, "Input file (graph cache or edge list)")->required();
    if (!multiple_inputs) input->expected(1);
    cmd->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Master seed echoed into every result file")->capture_default_str();
    cmd->add_option("--format", cfg.format, "Edge list format: pairs | adjacency")
        ->check(CLI::IsMember({"pairs", "pair-per-line", "adjacency", "adjacency-list"}))
        ->capture_default_str();
    cmd->add_option("--name", cfg.names, "Dataset name (one per input)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social resilience analysis of large networks via k-core decomposition"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::map<CLI::App*, std::function<std::string(const RunConfig&)>> handlers;

    auto* ingest = app.add_subcommand("ingest", "Canonicalize an edge list into a binary graph cache");
    add_common(ingest, cfg);
    handlers[ingest] = resilience::cli::cmd_ingest;

    auto* kcore = app.add_subcommand("kcore", "Coreness per node, shell sizes and coreness-by-degree spread");
    add_common(kcore, cfg);
    kcore->add_option("--bins", cfg.bins, "Degree bins: log | exact | <width>")->capture_default_str();
    handlers[kcore] = resilience::cli::cmd_kcore;

    auto* resil = app.add_subcommand("resilience", "Coreness CCDF and catastrophic thresholds for one or more graphs");
    add_common(resil, cfg, true);
    resil->add_option("--survival", cfg.survival, "Surviving fraction(s) for the catastrophic threshold")
        ->capture_default_str();
    handlers[resil] = resilience::cli::cmd_resilience;

    auto* equil = app.add_subcommand("equilibrium", "Equilibrium network for a cost/benefit environment");
    add_common(equil, cfg);
    equil->add_option("--c", cfg.c, "Cost per period (positive integer)")->required();
    equil->add_option("--b", cfg.b, "Benefit per friend (positive integer)")->required();
    handlers[equil] = resilience::cli::cmd_equilibrium;

    auto* unravel = app.add_subcommand("unravel", "Remaining users under a rising coreness threshold");
    add_common(unravel, cfg);
    unravel->add_option("--k0", cfg.k0, "Initial threshold")->capture_default_str();
    unravel->add_option("--rate", cfg.rate, "Threshold increase per unit time")->capture_default_str();
    unravel->add_option("--t0", cfg.t0, "Start time")->capture_default_str();
    unravel->add_option("--horizon", cfg.horizon, "Time span to simulate")->capture_default_str();
    unravel->add_option("--step", cfg.step, "Sampling step")->capture_default_str();
    unravel->add_flag("--strict", cfg.strict, "Count survivors as k_s > K rather than k_s >= K");
    handlers[unravel] = resilience::cli::cmd_unravel;

    auto* fit = app.add_subcommand("fit", "Calibrate the unraveling schedule and score it against an activity series");
    add_common(fit, cfg);
    fit->add_option("--observed", cfg.observed, "CSV with date,value (value in percent)")->required();
    fit->add_option("--ref-a", cfg.ref_a, "First reference point YYYY-MM-DD:K")->required();
    fit->add_option("--ref-b", cfg.ref_b, "Second reference point YYYY-MM-DD:K")->required();
    fit->add_option("--reference-k", cfg.reference_k, "100% equals the nodes with k_s >= this value")
        ->capture_default_str();
    fit->add_flag("--strict", cfg.strict, "Count survivors as k_s > K rather than k_s >= K");
    handlers[fit] = resilience::cli::cmd_fit;

    auto* plfit = app.add_subcommand("plfit", "Power-law hypothesis test of the degree distribution");
    add_common(plfit, cfg);
    plfit->add_option("--trials", cfg.trials, "Synthetic datasets for the p-value")->capture_default_str();
    plfit->add_option("--threads", cfg.threads, "Worker threads for the bootstrap")->capture_default_str();
    plfit->add_flag("--per-trial", cfg.per_trial, "Also write the synthetic D of every trial");
    handlers[plfit] = resilience::cli::cmd_plfit;

    auto* timeslice = app.add_subcommand("timeslice", "Past/future/internal connectivity per id slice");
    add_common(timeslice, cfg);
    timeslice->add_option("--width", cfg.width, "Slice width in ids")->required();
    timeslice->add_option("--origin", cfg.origin, "First id of slice 0 (default: smallest id)");
    timeslice->add_option("--baseline", cfg.baseline, "Random-linking baseline: slice | center")
        ->check(CLI::IsMember({"slice", "center"}))
        ->capture_default_str();
    handlers[timeslice] = resilience::cli::cmd_timeslice;

    auto* atrisk = app.add_subcommand("atrisk", "Fraction of users below the coreness threshold per id slice");
    add_common(atrisk, cfg);
    atrisk->add_option("--width", cfg.width, "Slice width in ids")->required();
    atrisk->add_option("--origin", cfg.origin, "First id of slice 0 (default: smallest id)");
    atrisk->add_option("--threshold", cfg.threshold, "Coreness threshold (default: median coreness)");
    atrisk->add_option("--confidence", cfg.confidence, "Confidence level of the Wilson interval")
        ->capture_default_str();
    handlers[atrisk] = resilience::cli::cmd_atrisk;

    auto* report = app.add_subcommand("report", "Bundle prior outputs into one JSON document");
    report->add_option("--input", cfg.inputs, "Directory holding prior outputs (default: --out)")->expected(1);
    report->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    report->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    handlers[report] = resilience::cli::cmd_report;

    CLI11_PARSE(app, argc, argv);

    for (auto* sub : app.get_subcommands()) {
        try {
            std::cout << handlers.at(sub)(cfg) << '\n';
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}
