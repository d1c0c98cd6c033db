#include "ricci/error.hpp"
#include "ricci/graph_metric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ricci;

namespace {

std::shared_ptr<const PointCloud> cloud_of(const ManifoldOracle& M, int n, std::uint64_t seed) {
    return std::make_shared<const PointCloud>(sample_uniform(M, n, seed));
}

std::shared_ptr<const PointCloud> circle_angles(const std::vector<double>& angles) {
    PointCloud c;
    c.points.resize(2, static_cast<Eigen::Index>(angles.size()));
    for (std::size_t k = 0; k < angles.size(); ++k)
        c.points.col(static_cast<Eigen::Index>(k)) << std::cos(angles[k]), std::sin(angles[k]);
    c.oracle = ManifoldOracle::circle(1.0);
    return std::make_shared<const PointCloud>(c);
}

}  // namespace

TEST(Profile, DefaultValues) {
    const auto psi = default_profile();
    EXPECT_EQ(psi.psi0, 0.25);
    EXPECT_EQ(psi.dpsi0, 0.25);
    EXPECT_EQ(psi(0.0), 0.25);
    EXPECT_EQ(psi.derivative(0.0), 0.25);
    EXPECT_EQ(psi(0.5), 0.53125);
    EXPECT_EQ(psi(2.0), 2.0);
    EXPECT_NEAR(psi(0.1), 0.28225, 1e-15);
}

TEST(Profile, ShapeConditions) {
    const auto psi = default_profile();
    double prev = psi(0.0), prev_d = psi.derivative(0.0);
    for (int k = 1; k <= 300; ++k) {
        const double t = k * 0.01;
        EXPECT_GE(psi(t), t);
        EXPECT_GE(psi(t), prev);
        EXPECT_GE(psi.derivative(t), prev_d - 1e-15);
        prev = psi(t);
        prev_d = psi.derivative(t);
    }
    // C^2 at the junction: value 1, slope 1, curvature 0 on both sides.
    EXPECT_NEAR(psi.value(1.0 - 1e-9), 1.0, 1e-8);
    EXPECT_NEAR(psi.derivative(1.0 - 1e-9), 1.0, 1e-8);
}

TEST(PreDistance, Values) {
    // delta0 = 0.1, delta1 = 0.5 on a circle with eps = 0.5.
    const auto c = circle_angles({0.0, 0.15, 0.01, 0.5, 1.0});
    const auto rgg = build_rgg(DistanceField::exact(c), 0.5);
    const auto g = GraphMetric(rgg, 0.2, 1.0);
    EXPECT_NEAR(g.delta0(), 0.1, 1e-15);
    EXPECT_EQ(*g.pre_distance(0, 0), 0.0);
    EXPECT_NEAR(*g.pre_distance(0, 1), 0.15, 1e-15);
    EXPECT_NEAR(*g.pre_distance(0, 2), 0.28225 * 0.1, 1e-15);
    EXPECT_NEAR(*g.pre_distance(0, 3), 0.5, 1e-15);  // field = delta1 exactly
    EXPECT_FALSE(g.pre_distance(0, 4).has_value());
    EXPECT_THROW(GraphMetric::with_scales(rgg, 0.5, 0.1), Error);
}

TEST(ShortestPath, TwoHopChainOnCircle) {
    const double d1 = 0.5;
    const auto c = circle_angles({0.0, 0.6 * d1, 1.2 * d1});
    const auto rgg = build_rgg(DistanceField::exact(c), d1);
    const auto g = GraphMetric::with_scales(rgg, 0.1, d1);
    EXPECT_FALSE(g.pre_distance(0, 2).has_value());
    const auto p = g.shortest_path(0, 2);
    EXPECT_NEAR(p.distance, 1.2 * d1, 1e-14);
    EXPECT_EQ(p.vertices, (std::vector<int>{0, 1, 2}));
    EXPECT_NEAR(g.distance(0, 2), 1.2 * d1, 1e-14);
    EXPECT_EQ(g.distance(1, 1), 0.0);
    EXPECT_NEAR(g.distance(0, 1), 0.6 * d1, 1e-15);
}

TEST(ShortestPath, DisconnectedIsAnError) {
    const auto c = circle_angles({0.0, 0.1, 2.0});
    const auto rgg = build_rgg(DistanceField::exact(c), 0.2);
    auto g = GraphMetric::with_scales(rgg, 0.05, 0.2);
    EXPECT_FALSE(g.connected());
    EXPECT_EQ(g.component_count(), 2);
    try {
        g.distance(0, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Disconnected);
    }
    EXPECT_THROW(g.all_pairs(), Error);
    g.set_saturation(3.0);
    EXPECT_EQ(g.distance(0, 2), 3.0);
    EXPECT_EQ(g.all_pairs()(2, 1), 3.0);
}

TEST(Metric, AxiomsExhaustiveOnSphere) {
    const auto S2 = ManifoldOracle::sphere(2);
    const auto c = cloud_of(S2, 200, 1);
    const auto rgg = build_rgg(DistanceField::exact(c), 0.5);
    const GraphMetric g(rgg, 0.05, 2.2);
    ASSERT_TRUE(g.connected());
    const Mat D = g.all_pairs();
    for (int i = 0; i < 200; ++i) {
        EXPECT_EQ(D(i, i), 0.0);
        for (int j = 0; j < 200; ++j) {
            EXPECT_EQ(D(i, j), D(j, i));
            if (i != j) EXPECT_GT(D(i, j), 0.0);
            EXPECT_NEAR(D(i, j), g.distance(i, j), 1e-12) << i << ' ' << j;
            if (auto pre = g.pre_distance(i, j)) EXPECT_LE(D(i, j), *pre);
        }
    }
    long long bad = 0;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j)
            for (int k = 0; k < 200; ++k) bad += D(i, k) > D(i, j) + D(j, k) + 1e-12;
    EXPECT_EQ(bad, 0);
}

TEST(Metric, SffFieldUsesSearchAndKeepsAxioms) {
    const auto S2 = ManifoldOracle::sphere(2);
    const auto c = cloud_of(S2, 300, 2);
    const auto rgg = build_rgg(DistanceField::sff(c, 2, 1.2), 0.45);
    const GraphMetric g(rgg, 0.05, 2.2);
    ASSERT_TRUE(g.connected());
    const Mat D = g.all_pairs();
    for (int i = 0; i < 300; i += 3)
        for (int j = 0; j < 300; j += 3) {
            EXPECT_EQ(D(i, j), D(j, i));
            EXPECT_NEAR(D(i, j), g.shortest_path(i, j).distance, 1e-12);
            for (int k = 0; k < 300; k += 7) EXPECT_LE(D(i, k), D(i, j) + D(j, k) + 1e-12);
        }
}

TEST(Metric, WitnessPathHopsArePreDistances) {
    const auto S2 = ManifoldOracle::sphere(2);
    const auto c = cloud_of(S2, 400, 3);
    const auto rgg = build_rgg(DistanceField::sff(c, 2, 1.0), 0.35);
    const GraphMetric g(rgg, 0.05, 2.2);
    for (int t = 1; t < 400; t += 13) {
        const auto p = g.shortest_path(0, t);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k) {
            const int a = p.vertices[k], b = p.vertices[k + 1];
            const auto pre = g.pre_distance(a, b);
            ASSERT_TRUE(pre.has_value());
            EXPECT_LE(*pre, g.delta1());
            EXPECT_EQ(g.shortest_path(a, b).distance, *pre);
            sum += *pre;
        }
        EXPECT_EQ(sum, p.distance);
    }
}

TEST(Metric, LargerDelta1NeverIncreasesDistances) {
    const auto c = cloud_of(ManifoldOracle::sphere(2), 250, 4);
    const auto rgg = build_rgg(DistanceField::euclidean(c), 0.4);
    const auto small = GraphMetric::with_scales(rgg, 0.02, 0.4);
    const auto large = GraphMetric::with_scales(rgg, 0.02, 0.6);
    const Mat a = small.all_pairs(), b = large.all_pairs();
    EXPECT_TRUE(((b.array() - a.array()) <= 1e-15).all());
}

TEST(Metric, ParallelAllPairsMatchesSerial) {
    const auto c = cloud_of(ManifoldOracle::clifford_torus(), 400, 5);
    const auto rgg = build_rgg(DistanceField::exact(c), 0.5);
    const GraphMetric g(rgg, 0.05, 2.2);
    EXPECT_TRUE((g.all_pairs(true).array() == g.all_pairs(false).array()).all());
}

TEST(Metric, SteeredSearchSettlesGoalsExactly) {
    const auto c = cloud_of(ManifoldOracle::sphere(2), 300, 6);
    const auto rgg = build_rgg(DistanceField::sff(c, 2, 1.2), 0.3);
    const GraphMetric g(rgg, 0.05, 2.2);
    const Mat D = g.all_pairs();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(0, 299);
    for (int t = 0; t < 30; ++t) {
        const int s = pick(rng);
        std::vector<int> goals(1 + t % 3), extra(20);
        for (int& v : goals) v = pick(rng);
        for (int& v : extra) v = pick(rng);
        const auto d = g.distances_to(s, goals, extra);
        for (std::size_t k = 0; k < goals.size(); ++k) EXPECT_NEAR(*d[k], D(s, goals[k]), 1e-12);
        for (std::size_t k = 0; k < extra.size(); ++k)
            if (const auto& v = d[goals.size() + k]) EXPECT_NEAR(*v, D(s, extra[k]), 1e-12);
    }
}

TEST(Metric, CachedCopyAnswersFromAllPairs) {
    const auto c = cloud_of(ManifoldOracle::sphere(2), 200, 8);
    const auto rgg = build_rgg(DistanceField::exact(c), 0.4);
    const GraphMetric g(rgg, 0.05, 2.2);
    const GraphMetric cached = g.with_all_pairs();
    EXPECT_FALSE(g.has_all_pairs());
    ASSERT_TRUE(cached.has_all_pairs());
    const Mat D = g.all_pairs();
    for (int i = 0; i < 200; i += 7)
        for (int j = 0; j < 200; j += 3) {
            EXPECT_EQ(cached.distance(i, j), D(i, j));
            EXPECT_EQ(*cached.closed_form(i, j), D(i, j));
        }
    GraphMetric saturated = cached;
    saturated.set_saturation(1.0);
    EXPECT_FALSE(saturated.has_all_pairs());
}

TEST(Metric, ValidRegimeFlag) {
    const auto c = cloud_of(ManifoldOracle::sphere(2), 50, 6);
    const auto rgg = build_rgg(DistanceField::exact(c), 0.2);
    EXPECT_TRUE(GraphMetric(rgg, 0.05, 2.2).valid_regime());
    EXPECT_FALSE(GraphMetric::with_scales(rgg, 0.01, 0.02).valid_regime());
}

TEST(CompareMetrics, ExactFieldHasNoViolations) {
    const auto S2 = ManifoldOracle::sphere(2);
    const auto c = cloud_of(S2, 1000, 7);
    const auto rgg = build_rgg(DistanceField::exact(c), 0.3);
    const GraphMetric g(rgg, 0.05, 2.2);
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> pick(0, 999);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < 1000; ++k) pairs.emplace_back(pick(rng), pick(rng));
    const auto rep = compare_metrics(g, S2, pairs);
    EXPECT_EQ(rep.lower_violations, 0);
    EXPECT_EQ(rep.window_violations, 0);
    EXPECT_GT(rep.window_pairs, 0);
}

TEST(CompareMetrics, SingleEdgeGraphBendsUp) {
    const auto c = circle_angles({0.0, 0.03});
    const auto rgg = build_rgg(DistanceField::exact(c), 0.5);
    const auto g = GraphMetric::with_scales(rgg, 0.1, 0.5);
    EXPECT_NEAR(g.distance(0, 1), 0.1 * default_profile()(0.3), 1e-15);
    EXPECT_GT(g.distance(0, 1), 0.03);
    const auto rep = compare_metrics(g, ManifoldOracle::circle(1.0), {{0, 1}});
    EXPECT_EQ(rep.lower_violations, 0);
}

TEST(CompareMetrics, EuclideanFailsWindowSlackAsEpsShrinks) {
    // On the window the Euclidean chord undershoots d_M by d^3 / 24, which is not O(eps^3) relative.
    const auto S2 = ManifoldOracle::sphere(2);
    std::vector<double> fitted;
    for (double eps : {0.4, 0.2}) {
        const auto c = cloud_of(S2, 3000, 9);
        const auto rgg = build_rgg(DistanceField::euclidean(c), eps);
        const GraphMetric g(rgg, 0.05, 2.2);
        std::vector<std::pair<int, int>> pairs;
        for (auto e : rgg.edges())
            if (pairs.size() < 3000) pairs.push_back(e);
        fitted.push_back(compare_metrics(g, S2, pairs).fitted_lower_C);
    }
    // The needed constant grows like 1 / (24 eps).
    EXPECT_GT(fitted[0], 0.0);
    EXPECT_GT(fitted[1], 1.5 * fitted[0]);
}

TEST(AdjacentPairs, EmptyAndCircleNeighbours) {
    const auto lone = circle_angles({0.0, 2.0});
    const auto r0 = build_rgg(DistanceField::exact(lone), 0.1);
    EXPECT_TRUE(adjacent_pair_set(GraphMetric::with_scales(r0, 0.01, 0.1)).empty());

    std::vector<double> angles;
    for (int k = 0; k < 200; ++k) angles.push_back(2 * std::numbers::pi * k / 200.0);
    const auto c = circle_angles(angles);
    const auto rgg = build_rgg(DistanceField::exact(c), 0.2);
    const GraphMetric g(rgg, 0.05, 2.2);
    const auto adj = adjacent_pair_set(g);
    for (int k = 0; k < 200; ++k) {
        const std::pair<int, int> p{std::min(k, (k + 1) % 200), std::max(k, (k + 1) % 200)};
        EXPECT_NE(std::find(adj.begin(), adj.end(), p), adj.end());
    }
    for (auto [i, j] : adj) EXPECT_EQ(g.distance(i, j), *g.pre_distance(i, j));
}

TEST(AdjacentPairs, SffFieldDropsBeatenHops) {
    const auto c = cloud_of(ManifoldOracle::sphere(2), 300, 10);
    const auto rgg = build_rgg(DistanceField::sff(c, 2, 1.2), 0.45);
    const GraphMetric g(rgg, 0.05, 2.2);
    const auto adj = adjacent_pair_set(g);
    for (auto [i, j] : adj) EXPECT_EQ(g.distance(i, j), *g.pre_distance(i, j));
    for (int i = 0; i < 300; i += 5)
        for (int j = i + 1; j < 300; ++j) {
            const auto pre = g.pre_distance(i, j);
            if (pre && g.distance(i, j) == *pre)
                EXPECT_NE(std::find(adj.begin(), adj.end(), std::make_pair(i, j)), adj.end());
        }
}
