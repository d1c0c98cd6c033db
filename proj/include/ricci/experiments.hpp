#pragma once

#include "ricci/curvature.hpp"
#include "ricci/heat.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ricci {

// Parameter sets 1..4 of the edge-curvature histograms on the unit sphere.
struct Fig2Set {
    int n;
    double eps;
    double delta0;
    double delta1;
};

Fig2Set fig2_set(int index);

// Pairs farther apart than the hop range have no finite graph distance at these scales; the metric
// saturates at the sphere's diameter.
inline constexpr double kFig2Saturation = 3.141592653589793;

std::vector<CurvatureRecord> fig2_edges(const Fig2Set& set, std::uint64_t seed);

struct Histogram {
    double lo = -1.0;
    double hi = 1.0;
    std::vector<long long> counts;

    double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
    // Index of the first bin with the largest count.
    int modal_bin() const;
    long long total() const;
};

// Values outside [lo, hi] are clamped into the end bins.
Histogram histogram(const std::vector<double>& values, int bins = 20, double lo = -1.0, double hi = 1.0);
void accumulate(Histogram& into, const Histogram& h);

struct CurvatureRun {
    std::vector<CurvatureRecord> records;
    ConsistencySummary summary;
};

// Samples n points, builds the field and graph, and evaluates `pairs` theorem-window pairs.
CurvatureRun window_curvature_run(const ManifoldOracle& oracle, int n, double eps, double c0, double c1, FieldMode mode,
                                  int pairs, std::uint64_t seed);

// Median |field - d_M| over pairs with d_M in [lo_frac * eps, eps].
double field_error_near_eps(const DistanceField& field, const ManifoldOracle& oracle, double eps, double lo_frac = 0.9);

std::vector<double> default_heat_grid();

}  // namespace ricci
