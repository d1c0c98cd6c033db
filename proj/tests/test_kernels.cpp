#include "ricci/kernels.hpp"
#include "ricci/rgg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace ricci;

TEST(Kernels, NeighborListsAgree) {
    const auto c = std::make_shared<const PointCloud>(sample_uniform(ManifoldOracle::sphere(2), 1200, 1));
    for (const auto& f : {DistanceField::exact(c), DistanceField::euclidean(c)}) {
        const auto a = kernels::neighbor_lists_omp(f, 0.2);
        const auto b = kernels::neighbor_lists_serial(f, 0.2);
        EXPECT_EQ(a, b);
        for (int i = 0; i < 1200; i += 50)
            for (int j = 0; j < 1200; ++j)
                EXPECT_EQ(std::binary_search(a[i].begin(), a[i].end(), j), i == j || f(i, j) <= 0.2);
    }
}

TEST(Kernels, LaplacianAgrees) {
    const auto c = std::make_shared<const PointCloud>(sample_uniform(ManifoldOracle::clifford_torus(), 900, 2));
    const auto rgg = build_rgg(DistanceField::exact(c), 0.3);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Vec u(900);
    for (int k = 0; k < 900; ++k) u(k) = g(rng);
    EXPECT_TRUE((kernels::laplacian_apply_omp(rgg, 0.7, u).array() == kernels::laplacian_apply_serial(rgg, 0.7, u).array()).all());
}

TEST(Kernels, LipAgreesAndBreaksTiesLexicographically) {
    const int n = 300;
    Mat D(n, n);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u01(0.5, 1.5);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) D(i, j) = D(j, i) = i == j ? 0.0 : u01(rng);
    Vec u(n);
    for (int k = 0; k < n; ++k) u(k) = u01(rng);
    const auto a = kernels::lip_omp(D, u);
    const auto b = kernels::lip_serial(D, u);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.i, b.i);
    EXPECT_EQ(a.j, b.j);

    // Every pair ties: the first pair wins.
    const Mat ones = Mat::Ones(4, 4) - Mat::Identity(4, 4);
    Vec alt(4);
    alt << 0, 1, 0, 1;
    const auto t = kernels::lip_omp(ones, alt);
    EXPECT_EQ(t.value, 1.0);
    EXPECT_EQ(t.i, 0);
    EXPECT_EQ(t.j, 1);
    EXPECT_EQ(kernels::lip_serial(ones, Vec::Zero(4)).value, 0.0);
}
