// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "ricci/curvature.hpp"
#include "ricci/error.hpp"
#include "ricci/experiments.hpp"
#include "ricci/heat.hpp"
#include "ricci/stats.hpp"
#include "ricci/transport.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

using namespace ricci;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(const std::string& id, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    fmt::print("{} [{}] {} | runtime {:.2f} s (limit {} s{})\n", pass ? "PASS" : "FAIL", id, o.detail, s, limit_s,
               in_time ? "" : ", exceeded");
    std::fflush(stdout);
}

std::shared_ptr<const PointCloud> cloud_of(const ManifoldOracle& m, int n, std::uint64_t seed) {
    return std::make_shared<const PointCloud>(sample_uniform(m, n, seed));
}

DiscreteMeasure random_measure(std::mt19937_64& rng, int size, std::int64_t total) {
    DiscreteMeasure m;
    m.support.resize(size);
    std::iota(m.support.begin(), m.support.end(), 0);
    m.mass.assign(size, 1);
    std::uniform_int_distribution<int> pick(0, size - 1);
    for (std::int64_t extra = total - size; extra > 0; --extra) ++m.mass[pick(rng)];
    m.denominator = total;
    return m;
}

Outcome ot_exactness() {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> size(1, 6), total_extra(0, 24), cost(0, 100);
    int mismatches = 0;
    double worst_gap = 0.0;
    for (int t = 0; t < 500; ++t) {
        const int a = size(rng), b = size(rng);
        const std::int64_t total = std::max(a, b) + total_extra(rng);
        const auto mu = random_measure(rng, a, total), nu = random_measure(rng, b, total);
        Mat c(a, b);
        for (Eigen::Index k = 0; k < c.size(); ++k) c.data()[k] = cost(rng);
        const auto plan = w1_exact(mu, nu, c);
        if (plan.cost != w1_brute(mu, nu, c)) ++mismatches;
        worst_gap = std::max(worst_gap, std::abs(plan.cost - dual_objective(mu, nu, plan)));
    }
    return {mismatches == 0 && worst_gap <= 1e-9,
            fmt::format("OT exactness: 500 instances, {} mismatches vs brute force, max duality gap {:.3g}", mismatches,
                        worst_gap)};
}

Outcome metric_correctness() {
    const auto S2 = ManifoldOracle::sphere(2);
    const auto c = cloud_of(S2, 200, 102);
    const Rgg rgg = build_rgg(DistanceField::exact(c), 0.5);
    const GraphMetric g(rgg, 0.05, 2.2);
    const Mat D = g.all_pairs();
    const int n = 200;
    long long axiom = 0, triangle = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (D(i, j) != D(j, i)) ++axiom;
            if ((i == j) != (D(i, j) == 0.0)) ++axiom;
            for (int k = 0; k < n; ++k)
                if (D(i, k) > D(i, j) + D(j, k) + 1e-12) ++triangle;
        }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const auto cmp = compare_metrics(g, S2, pairs);
    const bool ok = axiom == 0 && triangle == 0 && cmp.lower_violations == 0 && cmp.window_violations == 0;
    return {ok, fmt::format("metric axioms on 200 points: {} identity/symmetry and {} triangle failures; d_G >= d_M "
                            "violations {}, window equality violations {} ({} window pairs)",
                            axiom, triangle, cmp.lower_violations, cmp.window_violations, cmp.window_pairs)};
}

Outcome fig2_reproduction() {
    const Fig2Set set = fig2_set(3);
    Histogram pooled;
    long long total = 0, above = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto recs = fig2_edges(set, seed);
        std::vector<double> k;
        for (const auto& r : recs) k.push_back(r.kappa);
        accumulate(pooled, histogram(k));
        total += static_cast<long long>(k.size());
        above += std::count_if(k.begin(), k.end(), [](double v) { return v >= 0.5; });
    }
    const int mb = pooled.modal_bin();
    const double lo = pooled.lo + mb * pooled.width();
    const double frac = total ? static_cast<double>(above) / static_cast<double>(total) : 0.0;
    const bool modal_ok = lo >= 0.8 - 1e-12 && lo + pooled.width() <= 1.0 + 1e-12;
    return {modal_ok && frac >= 0.8,
            fmt::format("fig2 set 3 over 5 seeds ({} edges): modal bin [{:.1f}, {:.1f}) ({}), fraction kappa_G >= 0.5 "
                        "= {:.3f} (need modal bin in [0.8, 1.0] and >= 0.8)",
                        total, lo, lo + pooled.width(), pooled.counts[mb], frac)};
}

std::string window_stats(const std::vector<CurvatureRecord>& recs, double& mean_out, double& frac_pos,
                         double& mean_abs) {
    std::vector<double> kh, ab;
    for (const auto& r : recs) {
        kh.push_back(r.kappa_hat);
        ab.push_back(std::abs(r.kappa_hat));
    }
    mean_out = mean(kh);
    mean_abs = mean(ab);
    frac_pos = static_cast<double>(std::count_if(kh.begin(), kh.end(), [](double v) { return v > 0.0; })) /
               static_cast<double>(kh.size());
    return fmt::format("{} pairs, mean kappa_hat {:.3f}, median {:.3f}, fraction > 0 {:.2f}", kh.size(), mean_out,
                       median(kh), frac_pos);
}

Outcome consistency_sphere(FieldMode mode, double lo, double hi) {
    const auto run = window_curvature_run(ManifoldOracle::sphere(2), 3000, 0.35, 0.05, 2.2, mode, 50, 104);
    double m = 0, pos = 0, ab = 0;
    const std::string s = window_stats(run.records, m, pos, ab);
    const bool ok = run.records.size() == 50 && lo <= m && m <= hi && pos >= 0.9;
    return {ok, fmt::format("S2 {} field, n = 3000, eps = 0.35: {} (need mean in [{}, {}] and >= 0.90 positive)",
                            to_string(mode), s, lo, hi)};
}

Outcome consistency_circle() {
    const auto run = window_curvature_run(ManifoldOracle::circle(), 3000, 0.35, 0.05, 2.2, FieldMode::Exact, 50, 105);
    double m = 0, pos = 0, ab = 0;
    const std::string s = window_stats(run.records, m, pos, ab);
    return {run.records.size() == 50 && ab <= 0.5,
            fmt::format("circle, n = 3000, eps = 0.35: {}, mean |kappa_hat| {:.3f} (need <= 0.5)", s, ab)};
}

Outcome consistency_trend() {
    std::vector<double> med;
    std::string detail;
    for (int n : {1000, 4000, 16000}) {
        const double eps = 1.2 * std::pow(n, -1.0 / 8.0);
        const auto run = window_curvature_run(ManifoldOracle::sphere(2), n, eps, 0.05, 2.2, FieldMode::Exact, 50, 106);
        med.push_back(run.summary.median_error);
        detail += fmt::format(" n={} eps={:.4f} median |kappa_hat - Ric| = {:.3f};", n, eps, run.summary.median_error);
    }
    const int inv = count_inversions(med);
    return {trend_non_increasing(med, 1), fmt::format("S2 error trend:{} inversions {} (allowed 1)", detail, inv)};
}

Outcome data_driven_field() {
    const auto S2 = ManifoldOracle::sphere(2);
    const auto c = cloud_of(S2, 3000, 107);
    std::vector<double> eps{0.05, 0.1, 0.2, 0.4}, e_sff, e_euc;
    for (double e : eps) {
        e_sff.push_back(field_error_near_eps(DistanceField::sff(c, 2, 4.0 * e), S2, e));
        e_euc.push_back(field_error_near_eps(DistanceField::euclidean(c), S2, e));
    }
    const double s_sff = log_log_slope(eps, e_sff), s_euc = log_log_slope(eps, e_euc);
    return {s_sff >= 3.5 && s_euc <= 3.2,
            fmt::format("distance error slope vs eps on pairs with d in [0.9 eps, eps]: sff {:.3f} (need >= 3.5), "
                        "euclidean {:.3f} (need <= 3.2)",
                        s_sff, s_euc)};
}

Outcome global_bound() {
    const ProfileFn psi = default_profile();
    const double pos = s_K(psi, 0.05, 2.2, 1.0, 0.0), neg = s_K(psi, 0.05, 2.2, 1.0, -1.0);
    const bool formula = std::abs(pos - 4.7348e-4) <= 5e-9 && std::abs(neg - 176.0) <= 1e-9;

    const auto c = cloud_of(ManifoldOracle::sphere(2), 150, 108);
    const Rgg rgg = build_rgg(DistanceField::exact(c), 0.6);
    const GraphMetric g(rgg, 0.05, 2.2);
    const auto rep = global_lower_bound(rgg, g, nullptr, 1.0);
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < 150; ++i)
        for (int j = i + 1; j < 150; ++j) all.emplace_back(i, j);
    const auto recs = kappa_batch(rgg, g, all);
    const double adj_min = rep.K_G_emp * 0.36;
    long long counter = 0;
    double global_min = 1.0;
    for (const auto& r : recs) {
        global_min = std::min(global_min, r.kappa);
        if (adj_min > r.kappa + 1e-9) ++counter;
    }
    return {formula && counter == 0,
            fmt::format("s_K = {:.5g} (K >= 0) and {:.6g} (K < 0); adjacent-pair minimum {:.6f} vs global minimum "
                        "{:.6f} over {} pairs, {} counterexamples",
                        pos, neg, adj_min, global_min, all.size(), counter)};
}

Outcome heat_contraction() {
    const auto S2 = ManifoldOracle::sphere(2);
    const auto small = cloud_of(S2, 150, 109);
    const Rgg rs = build_rgg(DistanceField::exact(small), 0.6);
    const GraphMetric gs(rs, 0.05, 2.2);
    const HeatSystem hs(rs, gs, &S2);
    const auto avg = averaging_contraction_check(hs, global_lower_bound(rs, gs, &S2).K_G_emp, 1000, 110);

    const auto big = cloud_of(S2, 1000, 111);
    const Rgg rb = build_rgg(DistanceField::exact(big), 0.35);
    const GraphMetric gb(rb, 0.05, 2.2);
    const HeatSystem hb(rb, gb, &S2);
    const double K = global_lower_bound(rb, gb, &S2).K_G_emp;
    Vec u0(1000);
    for (int i = 0; i < 1000; ++i) u0(i) = big->points(2, i);
    const auto rep = contraction_experiment(hb, u0, default_heat_grid(), K);
    const bool envelopes = rep.vacuous || rep.violations == 0;
    const bool ok = avg.violations == 0 && envelopes && rep.max_mean_drift <= 1e-9;
    return {ok, fmt::format("averaging contraction: {} violations in 1000 trials; headline n = 1000, eps = 0.35: "
                            "K_G_emp {:.4f}, rate {:.4g}{}, envelope violations {}, mean drift {:.2g}",
                            avg.violations, K, rep.rate, rep.vacuous ? " (envelopes vacuous)" : "", rep.violations,
                            rep.max_mean_drift)};
}

Outcome chord_expansion() {
    std::vector<double> grid;
    for (int k = 0; k <= 14; ++k) grid.push_back(0.05 * std::pow(8.0, k / 14.0));
    grid.back() = 0.4;
    const auto rep = chord_expansion_check(ManifoldOracle::circle(), grid);
    const auto at = chord_expansion_check(ManifoldOracle::circle(), {0.2});
    const double r = at.rows.front().residual;
    return {rep.slope >= 4.5 && std::abs(r - 1.5e-6) <= 0.2 * 1.5e-6,
            fmt::format("circle chord expansion: slope {:.3f} (need >= 4.5), residual at t = 0.2 {:.4e}", rep.slope, r)};
}

Outcome bottleneck() {
    std::mt19937_64 rng(112);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    for (int t = 0; t < 200; ++t) {
        Mat c(6, 6);
        for (Eigen::Index k = 0; k < c.size(); ++k) c.data()[k] = u(rng);
        std::vector<int> p{0, 1, 2, 3, 4, 5};
        double best = std::numeric_limits<double>::infinity();
        do {
            double worst = 0.0;
            for (int a = 0; a < 6; ++a) worst = std::max(worst, c(a, p[a]));
            best = std::min(best, worst);
        } while (std::next_permutation(p.begin(), p.end()));
        if (bottleneck_matching(c).value != best) ++mismatches;
    }
    return {mismatches == 0, fmt::format("bottleneck matching: {} mismatches vs permutation brute force on 200 "
                                         "6x6 instances", mismatches)};
}

}  // namespace

int main() {
    run("1", 10, ot_exactness);
    run("2", 30, metric_correctness);
    run("3", 300, fig2_reproduction);
    const auto t4 = std::chrono::steady_clock::now();
    run("4a", 900, [] { return consistency_sphere(FieldMode::Exact, 0.5, 1.5); });
    run("4b", 900, consistency_circle);
    const double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - t4).count();
    run("4c", 900 - spent, consistency_trend);
    const auto t5 = std::chrono::steady_clock::now();
    run("5a", 900, data_driven_field);
    const double spent5 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t5).count();
    run("5b", 900 - spent5, [] { return consistency_sphere(FieldMode::Sff, 0.3, 1.7); });
    run("6", 120, global_bound);
    run("7", 300, heat_contraction);
    run("8", 1, chord_expansion);
    run("9", 5, bottleneck);
    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
