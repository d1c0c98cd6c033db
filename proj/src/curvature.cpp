#include "ricci/curvature.hpp"

#include "ricci/error.hpp"
#include "ricci/parallel.hpp"
#include "ricci/point_io.hpp"
#include "ricci/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

namespace ricci {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Case1: return "case1";
        case Regime::Case2: return "case2";
        case Regime::Case3: return "case3";
        case Regime::TheoremWindow: return "theorem_window";
        case Regime::Other: return "other";
    }
    return "other";
}

double kappa_hat_factor(int m, double eps) { return 2.0 * (m + 2) / (eps * eps); }

std::pair<double, double> theorem_window(const GraphMetric& metric) {
    if (metric.field().mode() == FieldMode::Exact) return {2.0 * metric.delta0(), metric.delta1() / 2.0};
    return {3.0 * metric.delta0(), metric.delta1() / 3.0};
}

Regime classify_regime(const GraphMetric& metric, double d, double C_M) {
    const auto [lo, hi] = theorem_window(metric);
    if (lo <= d && d <= hi) return Regime::TheoremWindow;
    const double case1 = metric.profile().psi0 * metric.delta0() / (12.0 * C_M);
    const double case3 = metric.delta1() - 2.0 * metric.eps();
    if (d <= case1) return Regime::Case1;
    if (d <= metric.delta1() && d >= case3) return Regime::Case3;
    if (d < case3) return Regime::Case2;
    return Regime::Other;
}

namespace {

// Transport between the two balls. Costs start at the field's closed form where it is exact and at a
// metric lower bound elsewhere; lower-bound entries used by the optimal plan are replaced by exact
// shortest-path values until the plan only uses exact costs. That plan is optimal for the true costs,
// which dominate the matrix entry-wise.
TransportPlan ball_transport(const GraphMetric& metric, const DiscreteMeasure& mu, const DiscreteMeasure& nu, int& solves) {
    const int a = static_cast<int>(mu.size());
    const int b = static_cast<int>(nu.size());
    Mat cost(a, b);
    std::vector<char> exact(static_cast<std::size_t>(a) * b, 0);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            if (auto c = metric.closed_form(mu.support[i], nu.support[j])) {
                cost(i, j) = *c;
                exact[static_cast<std::size_t>(i) * b + j] = 1;
            } else {
                cost(i, j) = metric.lower_bound(mu.support[i], nu.support[j]);
            }
        }
    TransportSolver solver(mu, nu, cost);
    for (;;) {
        TransportPlan plan = solver.solve();
        ++solves;
        bool changed = false;
        // Group inexact plan entries by row; one steered search per row settles them.
        std::vector<std::vector<int>> goal_cols(a);
        for (const auto& e : plan.entries)
            if (!exact[static_cast<std::size_t>(e.i) * b + e.j]) goal_cols[e.i].push_back(e.j);
        for (int i = 0; i < a; ++i) {
            if (goal_cols[i].empty()) continue;
            std::vector<int> goals, extra_cols, extra;
            for (int j : goal_cols[i]) goals.push_back(nu.support[j]);
            for (int j = 0; j < b; ++j)
                if (!exact[static_cast<std::size_t>(i) * b + j] &&
                    std::find(goal_cols[i].begin(), goal_cols[i].end(), j) == goal_cols[i].end()) {
                    extra_cols.push_back(j);
                    extra.push_back(nu.support[j]);
                }
            const auto d = metric.distances_to(mu.support[i], goals, extra);
            auto fill = [&](int j, double v) {
                cost(i, j) = v;
                solver.set_cost(i, j, v);
                exact[static_cast<std::size_t>(i) * b + j] = 1;
            };
            for (std::size_t k = 0; k < goals.size(); ++k) {
                if (cost(i, goal_cols[i][k]) != *d[k]) changed = true;
                fill(goal_cols[i][k], *d[k]);
            }
            for (std::size_t k = 0; k < extra.size(); ++k)
                if (const auto& v = d[goals.size() + k]) fill(extra_cols[k], *v);
        }
        if (!changed) return plan;
    }
}

}  // namespace

CurvatureRecord kappa_pair(const Rgg& rgg, const GraphMetric& metric, int x, int y, const CurvatureOptions& opt) {
    if (&metric.rgg() != &rgg) throw Error(ErrorKind::InvalidArgument, "metric built on a different graph");
    if (x == y) throw Error(ErrorKind::ZeroDistance, "x = y");
    CurvatureRecord rec;
    rec.x = x;
    rec.y = y;
    rec.d_field = rgg.field()(x, y);
    rec.d_G = metric.distance(x, y);
    if (!(rec.d_G > 0.0)) throw Error(ErrorKind::ZeroDistance, "coincident points");
    const DiscreteMeasure mu = DiscreteMeasure::uniform(ball_measure(rgg, x).support);
    const DiscreteMeasure nu = DiscreteMeasure::uniform(ball_measure(rgg, y).support);
    if (!metric.saturation()) {
        const int comp = metric.component(x);
        for (int v : mu.support)
            if (metric.component(v) != comp) throw Error(ErrorKind::Disconnected, "ball of " + std::to_string(x));
        for (int v : nu.support)
            if (metric.component(v) != comp) throw Error(ErrorKind::Disconnected, "ball of " + std::to_string(y));
    }
    const TransportPlan plan = ball_transport(metric, mu, nu, rec.solves);
    rec.W1G = plan.cost;
    rec.kappa = 1.0 - rec.W1G / rec.d_G;
    rec.kappa_hat = kappa_hat_factor(rgg.intrinsic_dim(), rgg.eps()) * rec.kappa;
    rec.regime = classify_regime(metric, rec.d_field, opt.C_M);
    if (const auto& oracle = rgg.cloud().oracle) {
        try {
            Vec v = oracle->log(rgg.cloud().point(x), rgg.cloud().point(y));
            v.normalize();
            rec.ric_oracle = oracle->ricci(rgg.cloud().point(x), v);
        } catch (const Error&) {
        }
    }
    return rec;
}

std::vector<CurvatureRecord> kappa_batch(const Rgg& rgg, const GraphMetric& metric,
                                         const std::vector<std::pair<int, int>>& pairs, const CurvatureOptions& opt,
                                         bool parallel) {
    const long long np = static_cast<long long>(pairs.size());
    std::vector<CurvatureRecord> out(pairs.size());
    ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (long long k = 0; k < np; ++k) {
        try {
            out[k] = kappa_pair(rgg, metric, pairs[k].first, pairs[k].second, opt);
        } catch (...) {
            err.capture(k);
        }
    }
    err.rethrow();
    return out;
}

PairPolicy PairPolicy::parse(const std::string& text) {
    PairPolicy p;
    if (text == "all-edges" || text == "all_edges") {
        p.kind = Kind::AllEdges;
    } else if (text == "theorem-window" || text == "theorem_window") {
        p.kind = Kind::TheoremWindow;
    } else if (text.rfind("sample:", 0) == 0) {
        p.kind = Kind::Sample;
        const std::string rest = text.substr(7);
        const auto colon = rest.find(':');
        try {
            p.k = std::stoi(rest.substr(0, colon));
            if (colon != std::string::npos) p.seed = std::stoull(rest.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, "bad pair policy '" + text + "'");
        }
        if (p.k < 0) throw Error(ErrorKind::InvalidArgument, "sample size must be >= 0");
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown pair policy '" + text + "'");
    }
    return p;
}

std::string PairPolicy::to_string() const {
    switch (kind) {
        case Kind::AllEdges: return "all-edges";
        case Kind::TheoremWindow: return "theorem-window";
        case Kind::Sample: return "sample:" + std::to_string(k) + ":" + std::to_string(seed);
    }
    return "";
}

std::vector<std::pair<int, int>> pair_workload(const Rgg& rgg, const GraphMetric& metric, const PairPolicy& policy) {
    if (policy.kind == PairPolicy::Kind::AllEdges) return rgg.edges();
    const auto [lo, hi] = theorem_window(metric);
    const PointCloud& cloud = rgg.cloud();
    const double cut2 = std::pow(hi * (1.0 + 1e-12), 2);
    std::vector<std::pair<int, int>> window;
    for (int i = 0; i < rgg.n(); ++i)
        for (int j = i + 1; j < rgg.n(); ++j) {
            if ((cloud.point(i) - cloud.point(j)).squaredNorm() > cut2) continue;
            const double d = rgg.field()(i, j);
            if (lo <= d && d <= hi) window.emplace_back(i, j);
        }
    if (policy.kind == PairPolicy::Kind::TheoremWindow) return window;
    const std::size_t k = std::min<std::size_t>(policy.k, window.size());
    std::mt19937_64 rng(policy.seed);
    for (std::size_t t = 0; t < k; ++t) {
        std::uniform_int_distribution<std::size_t> pick(t, window.size() - 1);
        std::swap(window[t], window[pick(rng)]);
    }
    window.resize(k);
    std::sort(window.begin(), window.end());
    return window;
}

double s_K(const ProfileFn& psi, double c0, double c1, double C_M, double K) {
    if (K >= 0.0) return psi.dpsi0 * c0 / (12.0 * c1 * C_M);
    return c1 / (c0 * psi.psi0);
}

GlobalBoundReport global_lower_bound(const Rgg& rgg, const GraphMetric& metric, const ManifoldOracle* oracle,
                                     std::optional<double> C_M_override, std::optional<double> w_infty_proxy,
                                     bool parallel) {
    if (!metric.connected()) throw Error(ErrorKind::Disconnected, "global bound needs a connected graph");
    GlobalBoundReport rep;
    const auto adjacent = adjacent_pair_set(metric);
    rep.adjacent_pairs = static_cast<long long>(adjacent.size());
    const double eps = rgg.eps();
    if (C_M_override) {
        rep.C_M = *C_M_override;
    } else if (oracle && !adjacent.empty()) {
        rep.C_M = estimate_ball_difference_constant(rgg, *oracle, adjacent);
        rep.C_M_estimated = true;
    }
    CurvatureOptions opt;
    opt.C_M = rep.C_M > 0.0 ? rep.C_M : 1.0;
    // Adjacent pairs cover most of a small graph; one all-pairs pass then beats per-pair searches.
    const long long n = rgg.n();
    const bool dense = !metric.has_all_pairs() && n <= kDenseGraphLimit && metric.hop_arcs() >= 0 &&
                       static_cast<double>(n) * static_cast<double>(metric.hop_arcs()) <= 5e8 &&
                       static_cast<long long>(adjacent.size()) >= n;
    const std::optional<GraphMetric> cached = dense ? std::optional<GraphMetric>(metric.with_all_pairs(parallel))
                                                    : std::nullopt;
    const auto records = kappa_batch(rgg, cached ? *cached : metric, adjacent, opt, parallel);
    rep.K_G_emp = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        const double v = r.kappa / (eps * eps);
        if (v < rep.K_G_emp) {
            rep.K_G_emp = v;
            rep.argmin = {r.x, r.y};
        }
    }
    const bool exact = rgg.field().mode() == FieldMode::Exact;
    rep.floor_cap = exact ? 1.0 / (2.0 * eps * eps) : 1.0 / (4.0 * eps * eps);
    const double K = oracle ? oracle->ricci_lower_bound() / (2.0 * (oracle->intrinsic_dim() + 2)) : 0.0;
    rep.s_K = s_K(metric.profile(), metric.c0(), metric.c1(), opt.C_M, K);
    if (oracle) {
        rep.K = K;
        rep.predicted_floor_leading = std::min(rep.s_K * K, rep.floor_cap);
        if (!records.empty()) rep.sign_agrees = (rep.K_G_emp >= 0.0) == (*rep.predicted_floor_leading >= 0.0);
    }
    if (w_infty_proxy) {
        rep.w_infty_proxy = w_infty_proxy;
        rep.error_term_scale = eps + *w_infty_proxy / (eps * eps * eps);
    }
    return rep;
}

ContinuumKappa continuum_kappa_mc(const ManifoldOracle& oracle, const VecRef& x, const VecRef& y, double eps, int mc_n,
                                  std::uint64_t seed, int bootstrap) {
    const double d = oracle.geodesic_distance(x, y);
    if (!(d > 0.0)) throw Error(ErrorKind::ZeroDistance, "x = y");
    if (d >= oracle.injectivity_radius() - 2.0 * eps) throw Error(ErrorKind::CutLocus, "balls reach the cut locus");
    if (mc_n < 2) throw Error(ErrorKind::InvalidArgument, "mc_n must be >= 2");
    const int m = oracle.intrinsic_dim();
    const Mat basis = oracle.tangent_basis(x);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const bool round = oracle.kind() != ManifoldKind::CliffordTorus;
    const double r = oracle.radius();
    Mat xs(oracle.ambient_dim(), mc_n);
    Mat ys(oracle.ambient_dim(), mc_n);
    for (int k = 0; k < mc_n;) {
        Vec dir(m);
        for (int a = 0; a < m; ++a) dir(a) = normal(rng);
        dir.normalize();
        const double rho = eps * std::pow(unif(rng), 1.0 / m);
        // Volume density of exp_x relative to the tangent ball; at most 1 on spheres, 1 on flat oracles.
        double jac = 1.0;
        if (round && m > 1 && rho > 0.0) jac = std::pow(std::sin(rho / r) / (rho / r), m - 1);
        if (unif(rng) > jac) continue;
        const Vec v = basis * (rho * dir);
        xs.col(k) = oracle.exp(x, v);
        ys.col(k) = oracle.parallel_map(x, y, xs.col(k));
        ++k;
    }
    Mat cost(mc_n, mc_n);
    for (int i = 0; i < mc_n; ++i)
        for (int j = 0; j < mc_n; ++j) cost(i, j) = oracle.geodesic_distance(xs.col(i), ys.col(j));
    std::vector<int> ids(mc_n);
    std::iota(ids.begin(), ids.end(), 0);
    const DiscreteMeasure mu = DiscreteMeasure::uniform(ids);
    ContinuumKappa out;
    out.kappa = 1.0 - w1_exact(mu, mu, cost).cost / d;
    if (bootstrap > 1) {
        std::vector<double> reps;
        std::uniform_int_distribution<int> pick(0, mc_n - 1);
        for (int b = 0; b < bootstrap; ++b) {
            std::vector<std::int64_t> count(mc_n, 0);
            for (int k = 0; k < mc_n; ++k) ++count[pick(rng)];
            DiscreteMeasure w;
            w.denominator = mc_n;
            for (int k = 0; k < mc_n; ++k)
                if (count[k] > 0) {
                    w.support.push_back(k);
                    w.mass.push_back(count[k]);
                }
            Mat c(w.size(), w.size());
            for (std::size_t i = 0; i < w.size(); ++i)
                for (std::size_t j = 0; j < w.size(); ++j) c(i, j) = cost(w.support[i], w.support[j]);
            reps.push_back(1.0 - w1_exact(w, w, c).cost / d);
        }
        const double mb = mean(reps);
        double ss = 0.0;
        for (double v : reps) ss += (v - mb) * (v - mb);
        out.standard_error = std::sqrt(ss / (reps.size() - 1));
    }
    return out;
}

double consistency_error_scale(int n, int m, double eps) {
    // W_inf scale already carries the m = 1 substitution.
    return eps + w_infty_scale(n, m) / (eps * eps * eps);
}

ConsistencySummary consistency_report(const std::vector<CurvatureRecord>& records, int n, int m, double eps) {
    ConsistencySummary s;
    s.error_scale = consistency_error_scale(n, m, eps);
    std::vector<double> khat;
    for (const auto& r : records) {
        if (r.regime != Regime::TheoremWindow || !r.ric_oracle) continue;
        s.errors.push_back(std::abs(r.kappa_hat - *r.ric_oracle));
        khat.push_back(r.kappa_hat);
    }
    s.window_records = static_cast<long long>(s.errors.size());
    if (s.errors.empty()) return s;
    s.mean_error = mean(s.errors);
    s.median_error = median(s.errors);
    s.max_error = max_value(s.errors);
    s.mean_kappa_hat = mean(khat);
    s.fitted_constant = s.median_error / s.error_scale;
    return s;
}

bool trend_non_increasing(const std::vector<double>& values, int allowed_inversions) {
    return count_inversions(values) <= allowed_inversions;
}

void write_records_csv(const std::string& path, const std::vector<CurvatureRecord>& records,
                       const std::string& provenance_line) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << provenance_line << "\nx,y,d_field,d_G,W1G,kappa,kappa_hat,regime,ric_oracle\n";
    for (const auto& r : records) {
        out << r.x << ',' << r.y << ',' << format_double(r.d_field) << ',' << format_double(r.d_G) << ','
            << format_double(r.W1G) << ',' << format_double(r.kappa) << ',' << format_double(r.kappa_hat) << ','
            << to_string(r.regime) << ',' << (r.ric_oracle ? format_double(*r.ric_oracle) : std::string()) << '\n';
    }
}

}  // namespace ricci
