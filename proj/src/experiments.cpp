#include "ricci/experiments.hpp"

#include "ricci/error.hpp"
#include "ricci/stats.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace ricci {

Fig2Set fig2_set(int index) {
    switch (index) {
        case 1: return {500, 0.2, 0.01, 0.02};
        case 2: return {750, 0.2, 0.01, 0.02};
        case 3: return {1000, 0.1, 0.005, 0.01};
        case 4: return {1500, 0.1, 0.005, 0.01};
        default: throw Error(ErrorKind::InvalidArgument, "parameter set must be 1..4");
    }
}

std::vector<CurvatureRecord> fig2_edges(const Fig2Set& set, std::uint64_t seed) {
    const auto cloud = std::make_shared<const PointCloud>(sample_uniform(ManifoldOracle::sphere(2), set.n, seed));
    const Rgg rgg = build_rgg(DistanceField::exact(cloud), set.eps);
    GraphMetric metric = GraphMetric::with_scales(rgg, set.delta0, set.delta1);
    metric.set_saturation(kFig2Saturation);
    return kappa_batch(rgg, metric, rgg.edges());
}

int Histogram::modal_bin() const {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

long long Histogram::total() const {
    long long t = 0;
    for (long long c : counts) t += c;
    return t;
}

Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw Error(ErrorKind::InvalidArgument, "histogram range");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    for (double v : values) {
        int b = static_cast<int>(std::floor((v - lo) / h.width()));
        ++h.counts[std::clamp(b, 0, bins - 1)];
    }
    return h;
}

void accumulate(Histogram& into, const Histogram& h) {
    if (into.counts.empty()) {
        into = h;
        return;
    }
    if (into.counts.size() != h.counts.size() || into.lo != h.lo || into.hi != h.hi)
        throw Error(ErrorKind::SizeMismatch, "histogram bins differ");
    for (std::size_t k = 0; k < h.counts.size(); ++k) into.counts[k] += h.counts[k];
}

CurvatureRun window_curvature_run(const ManifoldOracle& oracle, int n, double eps, double c0, double c1, FieldMode mode,
                                  int pairs, std::uint64_t seed) {
    const auto cloud = std::make_shared<const PointCloud>(sample_uniform(oracle, n, seed));
    DistanceField field = mode == FieldMode::Exact       ? DistanceField::exact(cloud)
                          : mode == FieldMode::Euclidean ? DistanceField::euclidean(cloud)
                                                         : DistanceField::sff(cloud, oracle.intrinsic_dim(), 4.0 * eps);
    const Rgg rgg = build_rgg(field, eps);
    const GraphMetric metric(rgg, c0, c1);
    PairPolicy policy;
    policy.kind = PairPolicy::Kind::Sample;
    policy.k = pairs;
    policy.seed = seed;
    CurvatureRun run;
    run.records = kappa_batch(rgg, metric, pair_workload(rgg, metric, policy));
    run.summary = consistency_report(run.records, n, oracle.intrinsic_dim(), eps);
    return run;
}

double field_error_near_eps(const DistanceField& field, const ManifoldOracle& oracle, double eps, double lo_frac) {
    const PointCloud& c = field.cloud();
    std::vector<double> err;
    for (int i = 0; i < c.n(); ++i)
        for (int j = i + 1; j < c.n(); ++j) {
            if ((c.point(i) - c.point(j)).norm() > eps) continue;
            const double d = oracle.geodesic_distance(c.point(i), c.point(j));
            if (d < lo_frac * eps || d > eps) continue;
            err.push_back(std::abs(field(i, j) - d));
        }
    if (err.empty()) throw Error(ErrorKind::EmptyBall, "no pairs near eps");
    return median(std::move(err));
}

std::vector<double> default_heat_grid() { return {0.0, 0.5, 1.0, 2.0, 4.0}; }

}  // namespace ricci
