#include "ricci/kernels.hpp"

#include "ricci/rgg.hpp"

#include <cmath>

namespace ricci::kernels {

namespace {

bool within(const DistanceField& field, int i, int j, double radius, double chord_cut2) {
    const double c2 = (field.cloud().point(i) - field.cloud().point(j)).squaredNorm();
    if (c2 > chord_cut2) return false;
    return field(i, j) <= radius;
}

double chord_cut2(double radius) {
    const double c = radius * (1.0 + 1e-12);
    return c * c;
}

}  // namespace

std::vector<std::vector<int>> neighbor_lists_omp(const DistanceField& field, double radius) {
    const int n = field.n();
    const double cut2 = chord_cut2(radius);
    std::vector<std::vector<int>> lists(n);
#pragma omp parallel for schedule(dynamic, 32)
    for (int i = 0; i < n; ++i) {
        auto& l = lists[i];
        for (int j = 0; j < n; ++j)
            if (j == i || within(field, i, j, radius, cut2)) l.push_back(j);
    }
    return lists;
}

std::vector<std::vector<int>> neighbor_lists_serial(const DistanceField& field, double radius) {
    const int n = field.n();
    const double cut2 = chord_cut2(radius);
    std::vector<std::vector<int>> lists(n);
    for (int i = 0; i < n; ++i) {
        lists[i].push_back(i);
        for (int j = i + 1; j < n; ++j)
            if (within(field, i, j, radius, cut2)) {
                lists[i].push_back(j);
                lists[j].push_back(i);
            }
    }
    // Row j received i < j before its own scan started, so each list is already sorted.
    return lists;
}

Vec laplacian_apply_omp(const Rgg& rgg, double scale, const Vec& u) {
    const int n = rgg.n();
    Vec out(n);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int z : rgg.ball(x)) s += u(x) - u(z);
        out(x) = scale * s;
    }
    return out;
}

Vec laplacian_apply_serial(const Rgg& rgg, double scale, const Vec& u) {
    const int n = rgg.n();
    Vec out(n);
    for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int z : rgg.ball(x)) s += u(x) - u(z);
        out(x) = scale * s;
    }
    return out;
}

namespace {

// Callers visit pairs in lexicographic order, so a strict comparison keeps the smallest tied pair.
void consider(LipResult& best, double q, int i, int j) {
    if (best.i < 0 || q > best.value) best = {q, i, j};
}

LipResult row_max(const Mat& dist, const Vec& u, int i) {
    LipResult best;
    for (int j = i + 1; j < u.size(); ++j) consider(best, std::abs(u(i) - u(j)) / dist(j, i), i, j);
    return best;
}

}  // namespace

LipResult lip_omp(const Mat& dist, const Vec& u) {
    const int n = static_cast<int>(u.size());
    std::vector<LipResult> rows(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) rows[i] = row_max(dist, u, i);
    LipResult best;
    for (int i = 0; i + 1 < n; ++i) consider(best, rows[i].value, rows[i].i, rows[i].j);
    if (best.i < 0) best.value = 0.0;
    return best;
}

LipResult lip_serial(const Mat& dist, const Vec& u) {
    const int n = static_cast<int>(u.size());
    LipResult best;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) consider(best, std::abs(u(i) - u(j)) / dist(j, i), i, j);
    if (best.i < 0) best.value = 0.0;
    return best;
}

}  // namespace ricci::kernels
