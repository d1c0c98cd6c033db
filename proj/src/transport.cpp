#include "ricci/transport.hpp"

#include "ricci/error.hpp"
#include "ricci/point_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <unordered_map>
#include <numeric>

namespace ricci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    const __int128 l = static_cast<__int128>(a / std::gcd(a, b)) * b;
    if (l > std::numeric_limits<std::int64_t>::max() / 1024) throw Error(ErrorKind::InvalidArgument, "mass denominators too large");
    return static_cast<std::int64_t>(l);
}

struct Scaled {
    std::vector<std::int64_t> supply;
    std::vector<std::int64_t> demand;
    std::int64_t unit;
};

void validate(const DiscreteMeasure& m) {
    if (m.support.size() != m.mass.size()) throw Error(ErrorKind::InvalidArgument, "support and mass sizes differ");
    if (m.denominator <= 0) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
    for (auto v : m.mass)
        if (v <= 0) throw Error(ErrorKind::InvalidArgument, "masses must be positive");
}

Scaled scale_masses(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Mat& cost) {
    validate(mu);
    validate(nu);
    if (!same_total(mu, nu)) throw Error(ErrorKind::MassMismatch, "total masses differ");
    if (cost.rows() != static_cast<Eigen::Index>(mu.size()) || cost.cols() != static_cast<Eigen::Index>(nu.size()))
        throw Error(ErrorKind::SizeMismatch, "cost matrix shape does not match the measures");
    for (Eigen::Index i = 0; i < cost.rows(); ++i)
        for (Eigen::Index j = 0; j < cost.cols(); ++j) {
            if (!std::isfinite(cost(i, j))) throw Error(ErrorKind::DisconnectedCost, "infinite cost entry");
            if (cost(i, j) < 0.0) throw Error(ErrorKind::InvalidArgument, "negative cost entry");
        }
    Scaled s;
    s.unit = checked_lcm(mu.denominator, nu.denominator);
    const std::int64_t fa = s.unit / mu.denominator;
    const std::int64_t fb = s.unit / nu.denominator;
    for (auto v : mu.mass) s.supply.push_back(v * fa);
    for (auto v : nu.mass) s.demand.push_back(v * fb);
    return s;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::uniform(std::vector<int> support) {
    DiscreteMeasure m;
    m.mass.assign(support.size(), 1);
    m.denominator = static_cast<std::int64_t>(support.size());
    m.support = std::move(support);
    if (m.support.empty()) throw Error(ErrorKind::EmptyBall, "uniform measure on an empty support");
    return m;
}

std::int64_t DiscreteMeasure::numerator_total() const { return std::accumulate(mass.begin(), mass.end(), std::int64_t{0}); }

bool same_total(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return static_cast<__int128>(a.numerator_total()) * b.denominator ==
           static_cast<__int128>(b.numerator_total()) * a.denominator;
}

// Nodes: rows 0..a-1, columns a..a+b-1, artificial root a+b. Arc e < a*b runs from row e/b to column
// e%b; then one artificial arc per node, row -> root or root -> column, costing one big unit.
TransportSolver::TransportSolver(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Mat& cost) {
    const Scaled sc = scale_masses(mu, nu, cost);
    a_ = static_cast<int>(mu.size());
    b_ = static_cast<int>(nu.size());
    root_ = a_ + b_;
    const int V = a_ + b_ + 1;
    real_ = static_cast<long>(a_) * b_;
    arcs_ = real_ + a_ + b_;
    unit_ = sc.unit;
    cost_.resize(real_);
    for (int i = 0; i < a_; ++i)
        for (int j = 0; j < b_; ++j) {
            cost_[static_cast<std::size_t>(i) * b_ + j] = cost(i, j);
            cmax_ = std::max(cmax_, cost(i, j));
        }
    flow_.assign(arcs_, 0);
    in_tree_.assign(arcs_, 0);
    tree_adj_.assign(V, {});
    for (int u = 0; u < a_ + b_; ++u) {
        const long e = real_ + u;
        flow_[e] = u < a_ ? sc.supply[u] : sc.demand[u - a_];
        in_tree_[e] = 1;
        tree_adj_[u].push_back(e);
        tree_adj_[root_].push_back(e);
    }
    parent_.resize(V);
    depth_.resize(V);
    pred_.resize(V);
    pk_.resize(V);
    ps_.resize(V);
    queue_.resize(V);
    recompute_potentials();
}

int TransportSolver::src(long e) const {
    if (e < real_) return static_cast<int>(e / b_);
    const int u = static_cast<int>(e - real_);
    return u < a_ ? u : root_;
}

int TransportSolver::tgt(long e) const {
    if (e < real_) return a_ + static_cast<int>(e % b_);
    const int u = static_cast<int>(e - real_);
    return u < a_ ? root_ : u;
}

TransportSolver::Rc TransportSolver::reduced(long e) const {
    const int s = src(e), t = tgt(e);
    return {(e >= real_ ? 1 : 0) + pk_[s] - pk_[t], (e < real_ ? cost_[e] : 0.0) + ps_[s] - ps_[t]};
}

void TransportSolver::set_cost(int i, int j, double c) {
    if (!std::isfinite(c)) throw Error(ErrorKind::DisconnectedCost, "infinite cost entry");
    if (c < 0.0) throw Error(ErrorKind::InvalidArgument, "negative cost entry");
    cost_[static_cast<std::size_t>(i) * b_ + j] = c;
    cmax_ = std::max(cmax_, c);
}

// Hangs the tree component containing q below p through arc `via`, fixing parents, depths and potentials.
void TransportSolver::reroot(int q, int p, long via) {
    int qh = 0, qt = 0;
    parent_[q] = p;
    pred_[q] = via;
    queue_[qt++] = q;
    while (qh < qt) {
        const int v = queue_[qh++];
        const int up = parent_[v];
        const long e = pred_[v];
        const std::int64_t big = e >= real_ ? 1 : 0;
        const double small = e < real_ ? cost_[e] : 0.0;
        const bool down = src(e) == up;
        depth_[v] = depth_[up] + 1;
        pk_[v] = down ? pk_[up] + big : pk_[up] - big;
        ps_[v] = down ? ps_[up] + small : ps_[up] - small;
        for (long f : tree_adj_[v]) {
            if (f == e) continue;
            const int s = src(f);
            const int w = s == v ? tgt(f) : s;
            parent_[w] = v;
            pred_[w] = f;
            queue_[qt++] = w;
        }
    }
}

void TransportSolver::recompute_potentials() {
    parent_[root_] = -1;
    pred_[root_] = -1;
    depth_[root_] = 0;
    pk_[root_] = 0;
    ps_[root_] = 0.0;
    for (long f : tree_adj_[root_]) {
        const int s = src(f);
        reroot(s == root_ ? tgt(f) : s, root_, f);
    }
}

void TransportSolver::pivot(long enter) {
    const int u = src(enter), v = tgt(enter);
    int x = u, y = v;
    while (x != y) {
        if (depth_[x] >= depth_[y]) x = parent_[x];
        else y = parent_[y];
    }
    const int join = x;
    // Leaving arc: the last blocking arc met when walking the cycle from the join through u, the
    // entering arc, v and back. This keeps the basis strongly feasible.
    std::int64_t delta = std::numeric_limits<std::int64_t>::max();
    int leave = -1;
    bool leave_on_u = false;
    for (int w = u; w != join; w = parent_[w])
        if (src(pred_[w]) == w && flow_[pred_[w]] < delta) {
            delta = flow_[pred_[w]];
            leave = w;
            leave_on_u = true;
        }
    for (int w = v; w != join; w = parent_[w])
        if (src(pred_[w]) != w && flow_[pred_[w]] <= delta) {
            delta = flow_[pred_[w]];
            leave = w;
            leave_on_u = false;
        }
    if (leave < 0) throw Error(ErrorKind::InvalidArgument, "transport problem unbounded");
    if (delta > 0) {
        flow_[enter] += delta;
        for (int w = u; w != join; w = parent_[w]) flow_[pred_[w]] += src(pred_[w]) == w ? -delta : delta;
        for (int w = v; w != join; w = parent_[w]) flow_[pred_[w]] += src(pred_[w]) == w ? delta : -delta;
    }
    const long out = pred_[leave];
    auto drop = [&](int node) {
        auto& adj = tree_adj_[node];
        *std::find(adj.begin(), adj.end(), out) = adj.back();
        adj.pop_back();
    };
    drop(src(out));
    drop(tgt(out));
    in_tree_[out] = 0;
    in_tree_[enter] = 1;
    tree_adj_[u].push_back(enter);
    tree_adj_[v].push_back(enter);
    // The side cut off by the leaving arc holds the entering endpoint on the leaving arc's side.
    if (leave_on_u) reroot(u, v, enter);
    else reroot(v, u, enter);
}

TransportPlan TransportSolver::solve() {
    recompute_potentials();
    const double tol = 1e-12 * (1.0 + cmax_);
    auto improving = [&](const Rc& r) { return r.big < 0 || (r.big == 0 && r.small < -tol); };
    auto better = [](const Rc& x, const Rc& y) { return x.big < y.big || (x.big == y.big && x.small < y.small); };
    const long block = std::max<long>(10, static_cast<long>(std::sqrt(static_cast<double>(arcs_))));
    const long max_pivots = 100 * arcs_ + 1000;
    for (long pivots = 0;; ++pivots) {
        if (pivots > max_pivots) throw Error(ErrorKind::InvalidArgument, "network simplex failed to converge");
        // Block search pricing.
        long enter = -1;
        Rc best{0, 0.0};
        long in_block = 0;
        for (long cnt = 0; cnt < arcs_; ++cnt) {
            const long e = next_;
            next_ = next_ + 1 == arcs_ ? 0 : next_ + 1;
            if (!in_tree_[e]) {
                const Rc r = reduced(e);
                if (improving(r) && (enter < 0 || better(r, best))) {
                    enter = e;
                    best = r;
                }
            }
            if (++in_block == block) {
                if (enter >= 0) break;
                in_block = 0;
            }
        }
        if (enter < 0) break;
        pivot(enter);
    }
    for (long e = real_; e < arcs_; ++e)
        if (flow_[e] != 0) throw Error(ErrorKind::InvalidArgument, "transport network infeasible");

    TransportPlan plan;
    plan.unit = unit_;
    double total = 0.0;
    for (int i = 0; i < a_; ++i)
        for (int j = 0; j < b_; ++j) {
            const std::size_t e = static_cast<std::size_t>(i) * b_ + j;
            if (flow_[e] > 0) {
                plan.entries.push_back({i, j, flow_[e]});
                total += cost_[e] * static_cast<double>(flow_[e]);
            }
        }
    plan.cost = total / static_cast<double>(unit_);
    // Duals from the potentials: u_i + v_j <= c_ij. Ordinary parts stay below (cmax + 1) V in size, so
    // any larger value for the big unit keeps the duals feasible; the objective does not depend on it.
    const double bigm = 2.0 * (cmax_ + 1.0) * (root_ + 1);
    plan.dual_u.resize(a_);
    plan.dual_v.resize(b_);
    for (int i = 0; i < a_; ++i) plan.dual_u[i] = -(static_cast<double>(pk_[i] - pk_[0]) * bigm + ps_[i]);
    for (int j = 0; j < b_; ++j) plan.dual_v[j] = static_cast<double>(pk_[a_ + j] - pk_[0]) * bigm + ps_[a_ + j];
    return plan;
}

TransportPlan w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Mat& cost) {
    return TransportSolver(mu, nu, cost).solve();
}

double dual_objective(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TransportPlan& plan) {
    const std::int64_t fa = plan.unit / mu.denominator;
    const std::int64_t fb = plan.unit / nu.denominator;
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += static_cast<double>(mu.mass[i] * fa) * plan.dual_u[i];
    for (std::size_t j = 0; j < nu.size(); ++j) s += static_cast<double>(nu.mass[j] * fb) * plan.dual_v[j];
    return s / static_cast<double>(plan.unit);
}

namespace {

struct StateHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::size_t h = v.size();
        for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

struct BruteSolver {
    const Mat& cost;
    int a;
    int b;
    std::unordered_map<std::vector<std::int64_t>, double, StateHash> memo;

    // Every basic feasible solution arises from repeatedly saturating one cell (a row or a column
    // runs out), so minimising over that choice at each step visits all vertices of the polytope.
    double solve(std::vector<std::int64_t>& state) {
        bool empty = true;
        for (auto v : state)
            if (v != 0) {
                empty = false;
                break;
            }
        if (empty) return 0.0;
        auto it = memo.find(state);
        if (it != memo.end()) return it->second;
        double best = kInf;
        for (int i = 0; i < a; ++i) {
            if (state[i] == 0) continue;
            for (int j = 0; j < b; ++j) {
                if (state[a + j] == 0) continue;
                const std::int64_t q = std::min(state[i], state[a + j]);
                state[i] -= q;
                state[a + j] -= q;
                best = std::min(best, cost(i, j) * static_cast<double>(q) + solve(state));
                state[i] += q;
                state[a + j] += q;
            }
        }
        memo.emplace(state, best);
        return best;
    }
};

}  // namespace

double w1_brute(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Mat& cost) {
    if (mu.size() * nu.size() > 49) throw Error(ErrorKind::InstanceTooLarge, "brute force limited to 49 cells");
    Scaled sc = scale_masses(mu, nu, cost);
    std::vector<std::int64_t> state = sc.supply;
    state.insert(state.end(), sc.demand.begin(), sc.demand.end());
    BruteSolver solver{cost, static_cast<int>(mu.size()), static_cast<int>(nu.size()), {}};
    return solver.solve(state) / static_cast<double>(sc.unit);
}

namespace {

bool perfect_matching(const Mat& cost, double threshold, std::vector<int>& match_b) {
    const int n = static_cast<int>(cost.rows());
    match_b.assign(n, -1);
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int u) {
        for (int v = 0; v < n; ++v) {
            if (cost(u, v) > threshold || seen[v]) continue;
            seen[v] = 1;
            if (match_b[v] < 0 || augment(match_b[v])) {
                match_b[v] = u;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < n; ++u) {
        seen.assign(n, 0);
        if (!augment(u)) return false;
    }
    return true;
}

}  // namespace

BottleneckResult bottleneck_matching(const Mat& cost) {
    if (cost.rows() != cost.cols()) throw Error(ErrorKind::SizeMismatch, "bottleneck matching needs |A| = |B|");
    const int n = static_cast<int>(cost.rows());
    BottleneckResult res;
    if (n == 0) return res;
    std::vector<double> values(cost.data(), cost.data() + cost.size());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::size_t lo = 0, hi = values.size() - 1;
    std::vector<int> match_b;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (perfect_matching(cost, values[mid], match_b))
            hi = mid;
        else
            lo = mid + 1;
    }
    perfect_matching(cost, values[lo], match_b);
    res.value = values[lo];
    res.match.assign(n, -1);
    for (int v = 0; v < n; ++v) res.match[match_b[v]] = v;
    return res;
}

BottleneckResult bottleneck_matching(const Mat& A, const Mat& B,
                                     const std::function<double(const VecRef&, const VecRef&)>& cost) {
    if (A.cols() != B.cols()) throw Error(ErrorKind::SizeMismatch, "bottleneck matching needs |A| = |B|");
    Mat c(A.cols(), B.cols());
    for (Eigen::Index i = 0; i < A.cols(); ++i)
        for (Eigen::Index j = 0; j < B.cols(); ++j) c(i, j) = cost(A.col(i), B.col(j));
    return bottleneck_matching(c);
}

double w_infty_scale(int n, int m) {
    const double ln = std::log(static_cast<double>(n));
    if (m == 1) return std::sqrt(ln) / std::sqrt(static_cast<double>(n));
    const double p = m == 2 ? 0.75 : 1.0 / m;
    return std::pow(ln, p) / std::pow(static_cast<double>(n), 1.0 / m);
}

WInftyEstimate estimate_w_infty_empirical(const PointCloud& cloud, const ManifoldOracle& oracle, int reference_n,
                                          std::uint64_t reference_seed) {
    if (reference_n < cloud.n() || reference_n % cloud.n() != 0)
        throw Error(ErrorKind::InvalidArgument, "reference size must be a multiple of n");
    const PointCloud ref = sample_uniform(oracle, reference_n, reference_seed);
    WInftyEstimate est;
    std::vector<double> radius(ref.n());
#pragma omp parallel for schedule(static)
    for (int r = 0; r < ref.n(); ++r) {
        double best = kInf;
        for (int i = 0; i < cloud.n(); ++i) best = std::min(best, oracle.geodesic_distance(ref.point(r), cloud.point(i)));
        radius[r] = best;
    }
    for (double v : radius) est.proxy = std::max(est.proxy, v);
    est.scale = w_infty_scale(cloud.n(), oracle.intrinsic_dim());
    est.fitted_A = est.proxy / est.scale;
    return est;
}

DiscreteMeasure add_measures(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const std::int64_t l = checked_lcm(a.denominator, b.denominator);
    std::map<int, std::int64_t> acc;
    for (std::size_t k = 0; k < a.size(); ++k) acc[a.support[k]] += a.mass[k] * (l / a.denominator);
    for (std::size_t k = 0; k < b.size(); ++k) acc[b.support[k]] += b.mass[k] * (l / b.denominator);
    DiscreteMeasure out;
    out.denominator = l;
    for (auto [id, m] : acc) {
        out.support.push_back(id);
        out.mass.push_back(m);
    }
    return out;
}

Mat cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const std::function<double(int, int)>& cost) {
    Mat c(mu.size(), nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j) c(i, j) = cost(mu.support[i], nu.support[j]);
    return c;
}

bool splitting_check(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, const DiscreteMeasure& nu1,
                     const DiscreteMeasure& nu2, const std::function<double(int, int)>& cost) {
    const DiscreteMeasure mu = add_measures(mu1, mu2);
    const DiscreteMeasure nu = add_measures(nu1, nu2);
    const double whole = w1_exact(mu, nu, cost_matrix(mu, nu, cost)).cost;
    const double p1 = w1_exact(mu1, nu1, cost_matrix(mu1, nu1, cost)).cost;
    const double p2 = w1_exact(mu2, nu2, cost_matrix(mu2, nu2, cost)).cost;
    return whole <= p1 + p2 + 1e-9;
}

void write_plan_csv(const std::string& path, const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TransportPlan& plan,
                    const Mat& cost, const std::string& provenance_line) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << provenance_line << "\nsi,tj,mass,cost\n";
    for (const auto& e : plan.entries)
        out << mu.support[e.i] << ',' << nu.support[e.j] << ',' << format_double(plan.mass(e)) << ','
            << format_double(cost(e.i, e.j)) << '\n';
}

}  // namespace ricci
