#pragma once

#include "ricci/manifolds.hpp"
#include "ricci/provenance.hpp"

#include <cstdint>
#include <string>

namespace ricci::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAcceptance = 1;
inline constexpr int kExitUsage = 2;

struct ExperimentConfig {
    std::string manifold = "sphere";
    int m = 2;
    double radius = 1.0;
    int n = 1000;
    std::uint64_t seed = 1;
    double eps = 0.35;
    double c0 = 0.05;
    double c1 = 2.2;
    std::string field = "exact";
    std::string pairs = "theorem-window";
    std::string out = ".";
    std::string input;  // point cloud CSV; sampled from the manifold when empty

    // fig2
    int set = 0;  // 0 runs all four
    int seeds = 5;
    // consistency-sweep
    std::string schedule = "1000,4000,16000";
    double eps_scale = 1.2;
    int window_pairs = 50;
    // heat
    std::string t_grid = "0,0.5,1,2,4";

    // key=value lines in a fixed order; embedded in every output and hashed into the provenance.
    std::string canonical() const;
    Provenance provenance() const { return Provenance::from_config(canonical(), seed); }
    ManifoldOracle oracle() const;
};

int cmd_sample(const ExperimentConfig& cfg);
int cmd_build(const ExperimentConfig& cfg);
int cmd_curvature(const ExperimentConfig& cfg);
int cmd_global_bound(const ExperimentConfig& cfg);
int cmd_heat(const ExperimentConfig& cfg);
int cmd_consistency_sweep(const ExperimentConfig& cfg);
int cmd_fig2(const ExperimentConfig& cfg);
int cmd_report(const ExperimentConfig& cfg);

}  // namespace ricci::cli
