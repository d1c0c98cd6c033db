#include "ricci/heat.hpp"

#include "ricci/error.hpp"
#include "ricci/point_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <random>

namespace ricci {

HeatSystem::HeatSystem(const Rgg& rgg, const GraphMetric& metric, const ManifoldOracle* oracle, bool parallel)
    : rgg_(&rgg), metric_(&metric), parallel_(parallel) {
    if (&metric.rgg() != &rgg) throw Error(ErrorKind::InvalidArgument, "metric built on a different graph");
    const int m = oracle ? oracle->intrinsic_dim() : rgg.intrinsic_dim();
    scale_ = 1.0 / (rgg.n() * std::pow(rgg.eps(), m + 2));
    dist_ = metric.all_pairs(parallel);
    diam_ = dist_.maxCoeff();
    degree_ = degree_density(rgg, oracle);
}

Vec HeatSystem::apply_laplacian(const Vec& u) const {
    return parallel_ ? kernels::laplacian_apply_omp(*rgg_, scale_, u) : kernels::laplacian_apply_serial(*rgg_, scale_, u);
}

Mat HeatSystem::dense_laplacian() const {
    Mat L = Mat::Zero(n(), n());
    for (int x = 0; x < n(); ++x)
        for (int z : rgg_->ball(x)) {
            L(x, x) += scale_;
            L(x, z) -= scale_;
        }
    return L;
}

Vec HeatSystem::averaging(const Vec& u) const {
    Vec out(n());
    for (int x = 0; x < n(); ++x) {
        double s = 0.0;
        for (int z : rgg_->ball(x)) s += u(z);
        out(x) = s / rgg_->ball_size(x);
    }
    return out;
}

kernels::LipResult HeatSystem::lip(const Vec& u) const {
    return parallel_ ? kernels::lip_omp(dist_, u) : kernels::lip_serial(dist_, u);
}

double HeatSystem::gershgorin_bound() const {
    int worst = 0;
    for (int x = 0; x < n(); ++x) worst = std::max(worst, rgg_->ball_size(x) - 1);
    return 2.0 * worst * scale_;
}

ContractionCheck averaging_contraction_check(const HeatSystem& sys, double K_G_emp, int trials, std::uint64_t seed) {
    const double eps = sys.rgg().eps();
    const double factor = 1.0 - eps * eps * K_G_emp;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ContractionCheck out;
    out.worst_slack = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        Vec u(sys.n());
        for (int k = 0; k < sys.n(); ++k) u(k) = normal(rng);
        const double lhs = sys.lip(sys.averaging(u)).value;
        const double rhs = factor * sys.lip(u).value;
        out.worst_slack = std::max(out.worst_slack, lhs - rhs);
        if (lhs > rhs + 1e-9) ++out.violations;
    }
    return out;
}

Trajectory heat_flow(const HeatSystem& sys, const Vec& u0, const std::vector<double>& t_grid, double tol) {
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!(t_grid[k] >= 0.0) || (k > 0 && !(t_grid[k] > t_grid[k - 1])))
            throw Error(ErrorKind::NonMonotoneGrid, "time grid must be increasing and start at t >= 0");
    }
    Trajectory tr;
    const double h_max = 1.0 / (2.0 * std::max(sys.gershgorin_bound(), 1e-300));
    const double ref = std::max(1.0, u0.lpNorm<Eigen::Infinity>());
    Vec u = u0;
    double t = 0.0;
    double h = h_max;
    for (double target : t_grid) {
        while (t < target) {
            const double step = std::min({h, h_max, target - t});
            const Vec k1 = sys.apply_laplacian(u);
            const Vec mid = u - 0.5 * step * k1;
            const Vec k2 = sys.apply_laplacian(mid);
            // Euler and midpoint differ by step/2 * (k2 - k1); use it as the local error estimate.
            const double err = 0.5 * step * (k2 - k1).lpNorm<Eigen::Infinity>();
            if (err > tol * ref && step > 1e-12 * h_max) {
                h = step * std::max(0.2, 0.9 * std::sqrt(tol * ref / err));
                continue;
            }
            u -= step * k2;
            t = (step == target - t) ? target : t + step;
            ++tr.steps;
            h = err > 0.0 ? std::min(h_max, step * std::min(2.0, 0.9 * std::sqrt(tol * ref / err))) : h_max;
        }
        tr.t.push_back(target);
        tr.u.push_back(target == 0.0 ? u0 : u);
    }
    return tr;
}

ContractionReport contraction_experiment(const HeatSystem& sys, const Vec& u0, const std::vector<double>& t_grid,
                                         double K_G_emp) {
    ContractionReport rep;
    const double eps = sys.rgg().eps();
    const GraphMetric& metric = sys.metric();
    rep.degree_deviation = sys.degree().max_dev;
    rep.diameter = sys.diameter();
    rep.rate = K_G_emp - 4.0 * rep.degree_deviation * rep.diameter / (metric.c0() * metric.profile().psi0 * eps * eps * eps);
    rep.vacuous = !(rep.rate > 0.0);
    const double lip0 = sys.lip(u0).value;
    const double mean0 = u0.mean();
    const Trajectory tr = heat_flow(sys, u0, t_grid);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        const Vec& u = tr.u[k];
        ContractionRow row;
        row.t = tr.t[k];
        row.lip = sys.lip(u).value;
        const double decay = std::exp(-rep.rate * row.t);
        row.envelope_lip = lip0 * decay;
        const double mu = u.mean();
        row.linf_dev = (u.array() - mu).abs().maxCoeff();
        row.envelope_linf = rep.diameter * lip0 * decay;
        row.lip_violation = row.lip > row.envelope_lip + 1e-6 * lip0;
        row.linf_violation = row.linf_dev > row.envelope_linf + 1e-6 * lip0;
        rep.violations += row.lip_violation + row.linf_violation;
        rep.max_mean_drift = std::max(rep.max_mean_drift, std::abs(mu - mean0));
        rep.rows.push_back(row);
    }
    return rep;
}

DegreeDeviation degree_deviation(const HeatSystem& sys) {
    DegreeDeviation d;
    d.max_dev = sys.degree().max_dev;
    d.alpha = sys.degree().alpha;
    const double eps = sys.rgg().eps();
    d.ratio_eps3 = d.max_dev / (eps * eps * eps);
    return d;
}

void write_trajectory_csv(const std::string& path, const ContractionReport& rep, const std::string& provenance_line) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << provenance_line << "\nt,lip,envelope_lip,linf_dev,envelope_linf\n";
    for (const auto& r : rep.rows)
        out << format_double(r.t) << ',' << format_double(r.lip) << ',' << format_double(r.envelope_lip) << ','
            << format_double(r.linf_dev) << ',' << format_double(r.envelope_linf) << '\n';
}

}  // namespace ricci
