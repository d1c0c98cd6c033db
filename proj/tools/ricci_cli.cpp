#include "commands.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <functional>
#include <map>

using namespace ricci::cli;

int main(int argc, char** argv) {
    CLI::App app{"Ollivier-Ricci curvature of random geometric graphs on sampled manifolds"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags win");
    app.fallthrough();

    ExperimentConfig cfg;
    app.add_option("--manifold", cfg.manifold, "sphere | circle | torus")->capture_default_str();
    app.add_option("--m", cfg.m, "sphere dimension")->capture_default_str();
    app.add_option("--radius", cfg.radius)->capture_default_str();
    app.add_option("--n", cfg.n, "number of points")->capture_default_str();
    app.add_option("--seed", cfg.seed)->capture_default_str();
    app.add_option("--eps", cfg.eps, "graph radius")->capture_default_str();
    app.add_option("--c0", cfg.c0)->capture_default_str();
    app.add_option("--c1", cfg.c1)->capture_default_str();
    app.add_option("--field", cfg.field, "exact | euclidean | sff")->capture_default_str();
    app.add_option("--pairs", cfg.pairs, "all-edges | theorem-window | sample:K[:SEED]")->capture_default_str();
    app.add_option("--out", cfg.out, "output directory")->capture_default_str();
    app.add_option("--input", cfg.input, "point cloud CSV instead of sampling");

    std::map<std::string, std::function<int(const ExperimentConfig&)>> commands{
        {"sample", cmd_sample},
        {"build", cmd_build},
        {"curvature", cmd_curvature},
        {"global-bound", cmd_global_bound},
        {"heat", cmd_heat},
        {"consistency-sweep", cmd_consistency_sweep},
        {"fig2", cmd_fig2},
        {"report", cmd_report},
    };
    app.add_subcommand("sample", "sample uniform points and write cloud.csv");
    app.add_subcommand("build", "build the graph and write rgg.json and graph_distance.csv");
    app.add_subcommand("curvature", "curvature records for a pair workload");
    app.add_subcommand("global-bound", "empirical curvature lower bound over adjacent pairs");
    auto* heat = app.add_subcommand("heat", "heat flow and contraction envelopes");
    heat->add_option("--t-grid", cfg.t_grid, "comma-separated times")->capture_default_str();
    auto* sweep = app.add_subcommand("consistency-sweep", "error trend over an (n, eps) schedule");
    sweep->add_option("--schedule", cfg.schedule, "comma-separated n values")->capture_default_str();
    sweep->add_option("--eps-scale", cfg.eps_scale, "eps = scale * n^(-1/8)")->capture_default_str();
    sweep->add_option("--window-pairs", cfg.window_pairs)->capture_default_str();
    auto* fig2 = app.add_subcommand("fig2", "edge curvature histograms on the unit sphere");
    fig2->add_option("--set", cfg.set, "parameter set 1..4, 0 for all")->check(CLI::Range(0, 4))->capture_default_str();
    fig2->add_option("--seeds", cfg.seeds, "seeds pooled per set")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_subcommand("report", "aggregate outputs in --out into summary.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return commands.at(name)(cfg);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    }
}
