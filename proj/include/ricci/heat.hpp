#pragma once

#include "ricci/graph_metric.hpp"
#include "ricci/kernels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ricci {

// Graph Laplacian (1 / (n eps^(m+2))) sum_z w(x,z) (u(x) - u(z)) with the graph distances it is measured in.
class HeatSystem {
public:
    // Materialises all-pairs graph distances, so n <= kDenseGraphLimit. The Rgg and metric must outlive it.
    HeatSystem(const Rgg& rgg, const GraphMetric& metric, const ManifoldOracle* oracle, bool parallel = true);

    const Rgg& rgg() const { return *rgg_; }
    const GraphMetric& metric() const { return *metric_; }
    int n() const { return rgg_->n(); }
    double laplacian_scale() const { return scale_; }
    const Mat& distances() const { return dist_; }
    double diameter() const { return diam_; }
    const DegreeDensity& degree() const { return degree_; }

    Vec apply_laplacian(const Vec& u) const;
    Mat dense_laplacian() const;
    // Mean of u over each ball.
    Vec averaging(const Vec& u) const;
    kernels::LipResult lip(const Vec& u) const;
    // Row-sum bound on the spectrum of the Laplacian.
    double gershgorin_bound() const;

private:
    const Rgg* rgg_;
    const GraphMetric* metric_;
    bool parallel_;
    double scale_;
    Mat dist_;
    double diam_ = 0.0;
    DegreeDensity degree_;
};

struct ContractionCheck {
    long long violations = 0;
    double worst_slack = 0.0;  // max of Lip(Au) - (1 - eps^2 K) Lip(u)
};

ContractionCheck averaging_contraction_check(const HeatSystem& sys, double K_G_emp, int trials, std::uint64_t seed);

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec> u;
    long long steps = 0;
};

// Integrates du/dt = -Laplacian(u) with adaptive explicit midpoint steps capped at 1 / (2 * Gershgorin bound).
Trajectory heat_flow(const HeatSystem& sys, const Vec& u0, const std::vector<double>& t_grid, double tol = 1e-11);

struct ContractionRow {
    double t;
    double lip;
    double envelope_lip;
    double linf_dev;
    double envelope_linf;
    bool lip_violation;
    bool linf_violation;
};

struct ContractionReport {
    double rate = 0.0;
    bool vacuous = false;  // rate <= 0: the envelopes do not decay
    double degree_deviation = 0.0;
    double diameter = 0.0;
    long long violations = 0;
    double max_mean_drift = 0.0;
    std::vector<ContractionRow> rows;
};

ContractionReport contraction_experiment(const HeatSystem& sys, const Vec& u0, const std::vector<double>& t_grid,
                                         double K_G_emp);

struct DegreeDeviation {
    double max_dev = 0.0;
    double ratio_eps3 = 0.0;
    double alpha = 0.0;
};

DegreeDeviation degree_deviation(const HeatSystem& sys);

void write_trajectory_csv(const std::string& path, const ContractionReport& rep, const std::string& provenance_line);

}  // namespace ricci
