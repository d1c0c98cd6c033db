#include "ricci/graph_metric.hpp"

#include "ricci/error.hpp"
#include "ricci/kernels.hpp"
#include "ricci/parallel.hpp"
#include "ricci/point_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>

namespace ricci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SearchSpace {
    std::vector<double> g;
    std::vector<int> parent;
    std::vector<char> closed;
    std::vector<int> touched;

    void reset(int n) {
        if (static_cast<int>(g.size()) != n) {
            g.assign(n, kInf);
            parent.assign(n, -1);
            closed.assign(n, 0);
            touched.clear();
            return;
        }
        for (int v : touched) {
            g[v] = kInf;
            parent[v] = -1;
            closed[v] = 0;
        }
        touched.clear();
    }
    void touch(int v) {
        if (g[v] == kInf && !closed[v]) touched.push_back(v);
    }
};

SearchSpace& search_space(int n) {
    thread_local SearchSpace ws;
    ws.reset(n);
    return ws;
}

using HeapItem = std::pair<double, int>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

int find_root(std::vector<int>& parent, int v) {
    while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    return v;
}

}  // namespace

ProfileFn default_profile() {
    ProfileFn p;
    p.value = [](double t) { return t >= 1.0 ? t : 0.25 * (1.0 - t) * (1.0 - t) * (1.0 - t) + t; };
    p.derivative = [](double t) { return t >= 1.0 ? 1.0 : 1.0 - 0.75 * (1.0 - t) * (1.0 - t); };
    p.psi0 = 0.25;
    p.dpsi0 = 0.25;
    p.identity_from = 1.0;
    p.description = "psi(t) = (1-t)^3/4 + t on [0,1], t beyond";
    return p;
}

GraphMetric::GraphMetric(const Rgg& rgg, double c0, double c1, ProfileFn psi)
    : GraphMetric(rgg, c0 * rgg.eps(), c1 * rgg.eps(), std::move(psi), 0) {}

GraphMetric GraphMetric::with_scales(const Rgg& rgg, double delta0, double delta1, ProfileFn psi) {
    return GraphMetric(rgg, delta0, delta1, std::move(psi), 0);
}

GraphMetric::GraphMetric(const Rgg& rgg, double delta0, double delta1, ProfileFn psi, int)
    : rgg_(&rgg), delta0_(delta0), delta1_(delta1), psi_(std::move(psi)) {
    if (!(delta0 > 0.0) || !(delta1 > delta0)) throw Error(ErrorKind::InvalidArgument, "need 0 < delta0 < delta1");
    const int n = rgg.n();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto unite = [&](int a, int b) {
        a = find_root(parent, a);
        b = find_root(parent, b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    if (n <= kHopCacheLimit) {
        auto lists = kernels::neighbor_lists_omp(rgg.field(), delta1_);
        hop_offsets_.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) hop_offsets_[i + 1] = hop_offsets_[i] + static_cast<int>(lists[i].size()) - 1;
        hop_members_.reserve(hop_offsets_.back());
        hop_weights_.reserve(hop_offsets_.back());
        for (int i = 0; i < n; ++i)
            for (int j : lists[i])
                if (j != i) {
                    hop_members_.push_back(j);
                    hop_weights_.push_back(*pre_distance(i, j));
                    if (j > i) unite(i, j);
                }
    } else {
        const double cut2 = std::pow(delta1_ * (1.0 + 1e-12), 2);
        const PointCloud& cloud = rgg.cloud();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (find_root(parent, i) == find_root(parent, j)) continue;
                if ((cloud.point(i) - cloud.point(j)).squaredNorm() > cut2) continue;
                if (rgg.field()(i, j) <= delta1_) unite(i, j);
            }
    }
    component_.resize(n);
    std::vector<int> label(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find_root(parent, i);
        if (label[r] < 0) label[r] = component_count_++;
        component_[i] = label[r];
    }
}

bool GraphMetric::valid_regime() const { return c1() >= 2.0 + 4.0 * c0() - 1e-12; }

std::optional<double> GraphMetric::pre_distance(int i, int j) const {
    if (i == j) return 0.0;
    const double d = field()(i, j);
    if (!(d <= delta1_)) return std::nullopt;
    const double t = d / delta0_;
    if (t >= psi_.identity_from) return d;
    return delta0_ * psi_.value(t);
}

template <class F>
void GraphMetric::for_each_hop(int v, F&& f) const {
    if (!hop_offsets_.empty()) {
        for (int k = hop_offsets_[v]; k < hop_offsets_[v + 1]; ++k) f(hop_members_[k], hop_weights_[k]);
        return;
    }
    const PointCloud& cloud = rgg_->cloud();
    const double cut2 = std::pow(delta1_ * (1.0 + 1e-12), 2);
    for (int w = 0; w < n(); ++w) {
        if (w == v || (cloud.point(v) - cloud.point(w)).squaredNorm() > cut2) continue;
        if (auto c = pre_distance(v, w)) f(w, *c);
    }
}

double GraphMetric::lower_bound(int i, int j) const {
    if (dense_) return (*dense_)(i, j);
    const double lb = field().metric_lower_bound(i, j);
    return saturation_ ? std::min(lb, *saturation_) : lb;
}

std::optional<double> GraphMetric::closed_form(int i, int j) const {
    if (i == j) return 0.0;
    if (dense_) return (*dense_)(i, j);
    if (component_[i] != component_[j]) {
        if (saturation_) return *saturation_;
        return std::nullopt;
    }
    if (!field().is_metric()) return std::nullopt;
    auto pre = pre_distance(i, j);
    if (!pre) return std::nullopt;
    return saturation_ ? std::min(*pre, *saturation_) : *pre;
}

GraphMetric::Path GraphMetric::shortest_path(int s, int t) const {
    if (s == t) return {0.0, {s}};
    if (component_[s] != component_[t])
        throw Error(ErrorKind::Disconnected, std::to_string(s) + " and " + std::to_string(t));
    SearchSpace& ws = search_space(n());
    MinHeap heap;
    ws.touch(s);
    ws.g[s] = 0.0;
    heap.emplace(field().metric_lower_bound(s, t), s);
    while (!heap.empty()) {
        const auto [f, v] = heap.top();
        heap.pop();
        if (ws.closed[v]) continue;
        ws.closed[v] = 1;
        if (v == t) break;
        const double gv = ws.g[v];
        for_each_hop(v, [&](int w, double cost) {
            if (ws.closed[w]) return;
            const double ng = gv + cost;
            if (ng < ws.g[w]) {
                ws.touch(w);
                ws.g[w] = ng;
                ws.parent[w] = v;
                heap.emplace(ng + field().metric_lower_bound(w, t), w);
            }
        });
    }
    Path p;
    p.distance = ws.g[t];
    for (int v = t; v != -1; v = ws.parent[v]) p.vertices.push_back(v);
    std::reverse(p.vertices.begin(), p.vertices.end());
    return p;
}

double GraphMetric::distance(int i, int j) const {
    if (auto c = closed_form(i, j)) return *c;
    const double d = shortest_path(i, j).distance;
    return saturation_ ? std::min(d, *saturation_) : d;
}

std::vector<std::optional<double>> GraphMetric::single_source(int source) const {
    SearchSpace& ws = search_space(n());
    MinHeap heap;
    ws.touch(source);
    ws.g[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [gv, v] = heap.top();
        heap.pop();
        if (ws.closed[v]) continue;
        ws.closed[v] = 1;
        for_each_hop(v, [&](int w, double cost) {
            if (ws.closed[w]) return;
            const double ng = gv + cost;
            if (ng < ws.g[w]) {
                ws.touch(w);
                ws.g[w] = ng;
                heap.emplace(ng, w);
            }
        });
    }
    std::vector<std::optional<double>> out(n());
    for (int v = 0; v < n(); ++v) {
        if (ws.closed[v])
            out[v] = saturation_ ? std::min(ws.g[v], *saturation_) : ws.g[v];
        else if (saturation_)
            out[v] = *saturation_;
    }
    return out;
}

std::vector<std::optional<double>> GraphMetric::distances_to(int source, const std::vector<int>& goals,
                                                             const std::vector<int>& extra) const {
    SearchSpace& ws = search_space(n());
    std::vector<int> live;
    for (int t : goals) {
        if (component_[t] != component_[source] && !saturation_)
            throw Error(ErrorKind::Disconnected, std::to_string(source) + " and " + std::to_string(t));
        // Reuse `parent` as a goal marker; this search does not record paths.
        if (component_[t] == component_[source] && ws.parent[t] != -2) {
            ws.touch(t);
            ws.parent[t] = -2;
            live.push_back(t);
        }
    }
    std::size_t pending = live.size();
    // Min of consistent lower bounds stays consistent; too many goals make it not worth evaluating.
    const bool steer = !live.empty() && live.size() <= 16;
    auto h = [&](int v) {
        if (!steer) return 0.0;
        double best = kInf;
        for (int t : live) best = std::min(best, field().metric_lower_bound(v, t));
        return best;
    };
    MinHeap heap;
    ws.touch(source);
    ws.g[source] = 0.0;
    heap.emplace(h(source), source);
    while (pending > 0 && !heap.empty()) {
        const int v = heap.top().second;
        heap.pop();
        if (ws.closed[v]) continue;
        ws.closed[v] = 1;
        if (ws.parent[v] == -2) --pending;
        const double gv = ws.g[v];
        for_each_hop(v, [&](int w, double cost) {
            if (ws.closed[w]) return;
            const double ng = gv + cost;
            if (ng < ws.g[w]) {
                ws.touch(w);
                ws.g[w] = ng;
                heap.emplace(ng + h(w), w);
            }
        });
    }
    auto settled = [&](int t) -> std::optional<double> {
        if (component_[t] != component_[source]) {
            if (saturation_) return *saturation_;
            return std::nullopt;
        }
        if (!ws.closed[t]) return std::nullopt;
        return saturation_ ? std::min(ws.g[t], *saturation_) : ws.g[t];
    };
    std::vector<std::optional<double>> out;
    out.reserve(goals.size() + extra.size());
    for (int t : goals) out.push_back(settled(t));
    for (int t : extra) out.push_back(settled(t));
    return out;
}

GraphMetric GraphMetric::with_all_pairs(bool parallel) const {
    GraphMetric out = *this;
    out.dense_ = std::make_shared<const Mat>(all_pairs(parallel));
    return out;
}

Mat GraphMetric::all_pairs(bool parallel) const {
    const int nn = n();
    if (nn > kDenseGraphLimit) throw Error(ErrorKind::InstanceTooLarge, "all-pairs distances need n <= 4000");
    if (!connected() && !saturation_) throw Error(ErrorKind::Disconnected, "graph has several components");
    Mat out(nn, nn);
    ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (int s = 0; s < nn; ++s) {
        try {
            const auto row = single_source(s);
            for (int t = 0; t < nn; ++t) out(t, s) = *row[t];
        } catch (...) {
            err.capture(s);
        }
    }
    err.rethrow();
    // Exact symmetry regardless of summation order along different paths.
    for (int s = 0; s < nn; ++s)
        for (int t = s + 1; t < nn; ++t) out(s, t) = out(t, s);
    return out;
}

MetricComparison compare_metrics(const GraphMetric& metric, const ManifoldOracle& oracle,
                                 const std::vector<std::pair<int, int>>& pairs, double slack_C) {
    MetricComparison rep;
    const PointCloud& cloud = metric.rgg().cloud();
    const bool exact = metric.field().mode() == FieldMode::Exact;
    const double eps = metric.eps();
    const double beta = metric.field().beta().value_or(0.0);
    rep.slack_scale = beta * eps * eps + eps * eps * eps;
    for (auto [i, j] : pairs) {
        if (i == j) continue;
        ++rep.pairs;
        const double dm = oracle.geodesic_distance(cloud.point(i), cloud.point(j));
        const double dg = metric.distance(i, j);
        const bool window = 2.0 * metric.delta0() <= dm && dm <= metric.delta1() / 2.0;
        if (window) ++rep.window_pairs;
        if (exact) {
            if (dg < dm) ++rep.lower_violations;
            if (window && dg > dm) ++rep.window_violations;
        } else {
            const double s = rep.slack_scale;
            rep.fitted_lower_C = std::max(rep.fitted_lower_C, (dm / dg - 1.0) / s);
            if ((1.0 + slack_C * s) * dg < dm) ++rep.lower_slack_violations;
            if (window) {
                rep.fitted_window_C = std::max(rep.fitted_window_C, (dg / dm - 1.0) / s);
                if (dg > dm * (1.0 + slack_C * s)) ++rep.window_slack_violations;
            }
        }
    }
    return rep;
}

std::vector<std::pair<int, int>> adjacent_pair_set(const GraphMetric& metric) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < metric.n(); ++i)
        for (int j = i + 1; j < metric.n(); ++j) {
            const auto pre = metric.pre_distance(i, j);
            if (!pre) continue;
            if (metric.field().is_metric() || metric.shortest_path(i, j).distance == *pre) out.emplace_back(i, j);
        }
    return out;
}

void write_dg_csv(const std::string& path, const GraphMetric& metric, const std::vector<std::pair<int, int>>& pairs,
                  const std::string& provenance_line) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << provenance_line << "\ni,j,dG\n";
    for (auto [i, j] : pairs) {
        if (i > j) std::swap(i, j);
        out << i << ',' << j << ',' << format_double(metric.distance(i, j)) << '\n';
    }
}

}  // namespace ricci
