#pragma once

#include "ricci/estimators.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

// Epsilon-neighbourhood graph; every vertex belongs to its own ball.
class Rgg {
public:
    Rgg(DistanceField field, double eps, std::vector<int> offsets, std::vector<int> members);

    const DistanceField& field() const { return field_; }
    const PointCloud& cloud() const { return field_.cloud(); }
    double eps() const { return eps_; }
    int n() const { return field_.n(); }
    int intrinsic_dim() const;

    // Sorted ball members of x, x included.
    std::span<const int> ball(int x) const {
        return {members_.data() + offsets_[x], static_cast<std::size_t>(offsets_[x + 1] - offsets_[x])};
    }
    int ball_size(int x) const { return offsets_[x + 1] - offsets_[x]; }
    bool adjacent(int x, int z) const;
    // Pairs (i, j), i < j, with w_eps(i, j) = 1.
    std::vector<std::pair<int, int>> edges() const;
    long long edge_count() const;

    const std::vector<int>& offsets() const { return offsets_; }
    const std::vector<int>& members() const { return members_; }

private:
    DistanceField field_;
    double eps_;
    std::vector<int> offsets_;
    std::vector<int> members_;
};

Rgg build_rgg(const DistanceField& field, double eps, bool parallel = true);

struct BallMeasure {
    int base_vertex = -1;  // -1 for an off-sample base point
    std::vector<int> support;
    int mass_denominator() const { return static_cast<int>(support.size()); }
};

BallMeasure ball_measure(const Rgg& rgg, int base);
// Uniform measure on data points within eps of an arbitrary manifold point (exact field).
BallMeasure ball_measure(const Rgg& rgg, const VecRef& base_point);

struct DegreeDensity {
    std::vector<double> D;
    double alpha = 0.0;
    bool alpha_from_oracle = false;
    double max_dev = 0.0;
};

DegreeDensity degree_density(const Rgg& rgg, const ManifoldOracle* oracle);

// Max over pairs of the ball-difference mass fraction times eps / d_M.
double estimate_ball_difference_constant(const Rgg& rgg, const ManifoldOracle& oracle,
                                         const std::vector<std::pair<int, int>>& pairs);

void write_rgg_json(const std::string& path, const Rgg& rgg, const std::string& provenance_line);

}  // namespace ricci
