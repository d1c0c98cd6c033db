#pragma once

#include "ricci/estimators.hpp"

#include <vector>

namespace ricci {

class Rgg;

// Data-parallel kernels in OpenMP form, each with a serial reference used in tests and benchmarks.
namespace kernels {

// Sorted lists {j : field(i, j) <= radius}, i included.
std::vector<std::vector<int>> neighbor_lists_omp(const DistanceField& field, double radius);
std::vector<std::vector<int>> neighbor_lists_serial(const DistanceField& field, double radius);

// out(x) = scale * sum_{z in B(x)} (u(x) - u(z))
Vec laplacian_apply_omp(const Rgg& rgg, double scale, const Vec& u);
Vec laplacian_apply_serial(const Rgg& rgg, double scale, const Vec& u);

struct LipResult {
    double value = 0.0;
    int i = -1;
    int j = -1;
};

// max_{i<j} |u(i) - u(j)| / dist(i, j); ties resolve to the lexicographically smallest pair.
LipResult lip_omp(const Mat& dist, const Vec& u);
LipResult lip_serial(const Mat& dist, const Vec& u);

}  // namespace kernels
}  // namespace ricci
