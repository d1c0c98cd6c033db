#pragma once

#include "ricci/manifolds.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ricci {

// Finite measure with rational masses mass[k] / denominator.
struct DiscreteMeasure {
    std::vector<int> support;
    std::vector<std::int64_t> mass;
    std::int64_t denominator = 1;

    static DiscreteMeasure uniform(std::vector<int> support);
    std::int64_t numerator_total() const;
    std::size_t size() const { return support.size(); }
};

// Exact comparison of total masses.
bool same_total(const DiscreteMeasure& a, const DiscreteMeasure& b);

struct PlanEntry {
    int i;  // atom index in the source measure
    int j;  // atom index in the target measure
    std::int64_t flow;  // mass in units of 1 / TransportPlan::unit
};

struct TransportPlan {
    std::vector<PlanEntry> entries;
    std::int64_t unit = 1;
    double cost = 0.0;
    std::vector<double> dual_u;
    std::vector<double> dual_v;

    double mass(const PlanEntry& e) const { return static_cast<double>(e.flow) / static_cast<double>(unit); }
};

// Atom-index cost matrix: rows follow mu, columns follow nu.
TransportPlan w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Mat& cost);

// Primal network simplex that keeps its basis between solves, so changing a few costs and
// solving again only pivots away from the previous optimum.
class TransportSolver {
public:
    TransportSolver(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Mat& cost);
    void set_cost(int i, int j, double c);
    TransportPlan solve();

private:
    struct Rc {
        std::int64_t big;
        double small;
    };
    int src(long e) const;
    int tgt(long e) const;
    Rc reduced(long e) const;
    void reroot(int q, int p, long via);
    void recompute_potentials();
    void pivot(long enter);

    int a_ = 0;
    int b_ = 0;
    int root_ = 0;
    long real_ = 0;
    long arcs_ = 0;
    std::int64_t unit_ = 1;
    double cmax_ = 0.0;
    long next_ = 0;
    std::vector<double> cost_;
    std::vector<std::int64_t> flow_;
    std::vector<char> in_tree_;
    std::vector<std::vector<long>> tree_adj_;
    std::vector<int> parent_;
    std::vector<int> depth_;
    std::vector<long> pred_;
    std::vector<std::int64_t> pk_;  // potentials in big units (artificial arcs)
    std::vector<double> ps_;        // potentials in ordinary cost
    std::vector<int> queue_;
};
double dual_objective(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TransportPlan& plan);

// Exhaustive optimum over transportation bases (instances up to 49 cells).
double w1_brute(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Mat& cost);

struct BottleneckResult {
    double value = 0.0;
    std::vector<int> match;  // match[a] = b
};

BottleneckResult bottleneck_matching(const Mat& cost);
BottleneckResult bottleneck_matching(const Mat& A, const Mat& B, const std::function<double(const VecRef&, const VecRef&)>& cost);

struct WInftyEstimate {
    double proxy = 0.0;  // max distance from a reference point to its nearest data point
    double scale = 0.0;  // (log n)^p / n^(1/m) with the m = 1 and m = 2 exponents
    double fitted_A = 0.0;
};

WInftyEstimate estimate_w_infty_empirical(const PointCloud& cloud, const ManifoldOracle& oracle, int reference_n,
                                          std::uint64_t reference_seed);
double w_infty_scale(int n, int m);

// W1(mu1 + mu2, nu1 + nu2) <= W1(mu1, nu1) + W1(mu2, nu2) + 1e-9 with a cost on point ids.
bool splitting_check(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, const DiscreteMeasure& nu1,
                     const DiscreteMeasure& nu2, const std::function<double(int, int)>& cost);

// Sum of two measures on the union of their supports.
DiscreteMeasure add_measures(const DiscreteMeasure& a, const DiscreteMeasure& b);

Mat cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const std::function<double(int, int)>& cost);

void write_plan_csv(const std::string& path, const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TransportPlan& plan,
                    const Mat& cost, const std::string& provenance_line);

}  // namespace ricci
