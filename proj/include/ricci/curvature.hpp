#pragma once

#include "ricci/graph_metric.hpp"
#include "ricci/transport.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

enum class Regime { Case1, Case2, Case3, TheoremWindow, Other };

const char* to_string(Regime r);

struct CurvatureRecord {
    int x = -1;
    int y = -1;
    double d_field = 0.0;
    double d_G = 0.0;
    double W1G = 0.0;
    double kappa = 0.0;
    double kappa_hat = 0.0;
    Regime regime = Regime::Other;
    std::optional<double> ric_oracle;
    int solves = 0;  // transport solves until every cost on the plan's support was exact
};

struct CurvatureOptions {
    double C_M = 1.0;  // ball-difference constant, used for the case-1 boundary
};

// 2 (m + 2) / eps^2
double kappa_hat_factor(int m, double eps);

// Window for the active field: [2 delta0, delta1 / 2] for the exact field, [3 delta0, delta1 / 3] otherwise.
std::pair<double, double> theorem_window(const GraphMetric& metric);
Regime classify_regime(const GraphMetric& metric, double d_field, double C_M);

CurvatureRecord kappa_pair(const Rgg& rgg, const GraphMetric& metric, int x, int y, const CurvatureOptions& opt = {});
std::vector<CurvatureRecord> kappa_batch(const Rgg& rgg, const GraphMetric& metric,
                                         const std::vector<std::pair<int, int>>& pairs, const CurvatureOptions& opt = {},
                                         bool parallel = true);

struct PairPolicy {
    enum class Kind { AllEdges, TheoremWindow, Sample } kind = Kind::AllEdges;
    int k = 0;
    std::uint64_t seed = 0;

    static PairPolicy parse(const std::string& text);
    std::string to_string() const;
};

// Sample(k, seed) draws k distinct theorem-window pairs; every policy returns pairs sorted with i < j.
std::vector<std::pair<int, int>> pair_workload(const Rgg& rgg, const GraphMetric& metric, const PairPolicy& policy);

// psi'(0) c0 / (12 c1 C_M) when K >= 0, c1 / (c0 psi(0)) otherwise.
double s_K(const ProfileFn& psi, double c0, double c1, double C_M, double K);

struct GlobalBoundReport {
    double K_G_emp = 0.0;
    std::pair<int, int> argmin{-1, -1};
    long long adjacent_pairs = 0;
    double s_K = 0.0;
    std::optional<double> K;  // oracle Ric lower bound / (2 (m + 2))
    double C_M = 1.0;
    bool C_M_estimated = false;
    double floor_cap = 0.0;   // 1 / (2 eps^2) exact field, 1 / (4 eps^2) otherwise
    std::optional<double> predicted_floor_leading;  // min(s_K K, floor_cap); the theorem's error term is not included
    std::optional<double> w_infty_proxy;
    std::optional<double> error_term_scale;  // eps + W_inf proxy / eps^3, multiplied by an unknown constant
    std::optional<bool> sign_agrees;
};

GlobalBoundReport global_lower_bound(const Rgg& rgg, const GraphMetric& metric, const ManifoldOracle* oracle,
                                     std::optional<double> C_M_override = std::nullopt,
                                     std::optional<double> w_infty_proxy = std::nullopt, bool parallel = true);

struct ContinuumKappa {
    double kappa = 0.0;
    double standard_error = 0.0;
};

// Monte-Carlo Ollivier curvature of the manifold at scale eps. Ball samples at y are the images
// of the ball samples at x under the parallel map, which is an isometry B(x) -> B(y) on these oracles.
ContinuumKappa continuum_kappa_mc(const ManifoldOracle& oracle, const VecRef& x, const VecRef& y, double eps, int mc_n,
                                  std::uint64_t seed, int bootstrap = 20);

struct ConsistencySummary {
    long long window_records = 0;
    double mean_error = 0.0;
    double median_error = 0.0;
    double max_error = 0.0;
    double mean_kappa_hat = 0.0;
    double error_scale = 0.0;  // eps + (log n)^p / (n^(1/m) eps^3)
    double fitted_constant = 0.0;  // median_error / error_scale
    std::vector<double> errors;
};

double consistency_error_scale(int n, int m, double eps);
ConsistencySummary consistency_report(const std::vector<CurvatureRecord>& records, int n, int m, double eps);
// Non-increasing up to allowed_inversions strict increases.
bool trend_non_increasing(const std::vector<double>& values, int allowed_inversions = 1);

void write_records_csv(const std::string& path, const std::vector<CurvatureRecord>& records,
                       const std::string& provenance_line);

}  // namespace ricci
