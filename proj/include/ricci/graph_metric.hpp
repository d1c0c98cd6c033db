#pragma once

#include "ricci/rgg.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

// Convex bending of short hops; equals the identity from `identity_from` on.
struct ProfileFn {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    double psi0 = 0.0;
    double dpsi0 = 0.0;
    double identity_from = 1.0;
    std::string description;

    double operator()(double t) const { return t >= identity_from ? t : value(t); }
};

ProfileFn default_profile();

inline constexpr int kDenseGraphLimit = 4000;
// Hop adjacency is cached up to this size; beyond it hops are found by scanning.
inline constexpr int kHopCacheLimit = 20000;

class GraphMetric {
public:
    // delta0 = c0 * eps, delta1 = c1 * eps. The Rgg must outlive the metric.
    GraphMetric(const Rgg& rgg, double c0, double c1, ProfileFn psi = default_profile());
    // Explicit scales, for experiments that fix (delta0, delta1) independently of eps.
    static GraphMetric with_scales(const Rgg& rgg, double delta0, double delta1, ProfileFn psi = default_profile());

    const Rgg& rgg() const { return *rgg_; }
    const DistanceField& field() const { return rgg_->field(); }
    const ProfileFn& profile() const { return psi_; }
    int n() const { return rgg_->n(); }
    double eps() const { return rgg_->eps(); }
    double delta0() const { return delta0_; }
    double delta1() const { return delta1_; }
    double c0() const { return delta0_ / rgg_->eps(); }
    double c1() const { return delta1_ / rgg_->eps(); }
    // c1 >= 2 + 4 c0
    bool valid_regime() const;

    // Replace unreachable distances by a constant: the metric becomes min(d_G, L).
    void set_saturation(std::optional<double> level) {
        saturation_ = level;
        dense_.reset();
    }
    std::optional<double> saturation() const { return saturation_; }

    // Single-hop cost; nullopt when the pair is out of hop range.
    std::optional<double> pre_distance(int i, int j) const;
    // Shortest-path distance; throws "disconnected" unless saturation is set.
    double distance(int i, int j) const;
    struct Path {
        double distance = 0.0;
        std::vector<int> vertices;
    };
    Path shortest_path(int i, int j) const;
    std::vector<std::optional<double>> single_source(int source) const;
    // distance(source, g) for every goal from one search steered towards the goals, plus
    // distance(source, t) for each extra t the search happened to settle (nullopt otherwise).
    std::vector<std::optional<double>> distances_to(int source, const std::vector<int>& goals,
                                                    const std::vector<int>& extra = {}) const;
    // Dense all-pairs matrix; requires n <= kDenseGraphLimit and a connected graph (or saturation).
    Mat all_pairs(bool parallel = true) const;
    // A copy that answers every distance from the all-pairs matrix; same requirements as all_pairs().
    GraphMetric with_all_pairs(bool parallel = true) const;
    bool has_all_pairs() const { return dense_ != nullptr; }
    // Stored hop arcs (both directions), or -1 when hops are found by scanning.
    long long hop_arcs() const { return hop_offsets_.empty() ? -1 : static_cast<long long>(hop_members_.size()); }

    // The exact distance when it follows from the field alone: for a field satisfying the triangle
    // inequality, a direct hop is never beaten by a chain, since psi(a) + psi(b) >= psi(a + b) + psi(0).
    std::optional<double> closed_form(int i, int j) const;
    // A lower bound of distance(i, j) that is itself a metric.
    double lower_bound(int i, int j) const;

    int component(int i) const { return component_[i]; }
    bool connected() const { return component_count_ == 1; }
    int component_count() const { return component_count_; }

private:
    GraphMetric(const Rgg& rgg, double delta0, double delta1, ProfileFn psi, int);
    template <class F>
    void for_each_hop(int v, F&& f) const;

    const Rgg* rgg_;
    double delta0_;
    double delta1_;
    ProfileFn psi_;
    std::optional<double> saturation_;
    std::vector<int> hop_offsets_;  // CSR of hop neighbours when n <= kHopCacheLimit
    std::vector<int> hop_members_;
    std::vector<double> hop_weights_;
    std::vector<int> component_;
    int component_count_ = 0;
    std::shared_ptr<const Mat> dense_;
};

struct MetricComparison {
    long long pairs = 0;
    long long window_pairs = 0;
    // Exact field.
    long long lower_violations = 0;   // d_G < d_M
    long long window_violations = 0;  // d_G > d_M on the window
    // Data-driven field.
    double slack_scale = 0.0;         // beta eps^2 + eps^3
    double fitted_lower_C = 0.0;      // smallest C with (1 + C s) d_G >= d_M everywhere
    double fitted_window_C = 0.0;     // smallest C with d_G <= d_M (1 + C s) on the window
    long long lower_slack_violations = 0;
    long long window_slack_violations = 0;
};

// Window: 2 delta0 <= d_M <= delta1 / 2. slack_C is used only for data-driven fields.
MetricComparison compare_metrics(const GraphMetric& metric, const ManifoldOracle& oracle,
                                 const std::vector<std::pair<int, int>>& pairs, double slack_C = 1.0);

// Pairs (i < j) whose graph distance is realised by the direct hop.
std::vector<std::pair<int, int>> adjacent_pair_set(const GraphMetric& metric);

void write_dg_csv(const std::string& path, const GraphMetric& metric, const std::vector<std::pair<int, int>>& pairs,
                  const std::string& provenance_line);

}  // namespace ricci
