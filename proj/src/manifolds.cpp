#include "ricci/manifolds.hpp"

#include "ricci/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ricci {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroDistance = 1e-14;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    return a;
}

struct TorusAngles {
    double u;
    double v;
};

TorusAngles torus_angles(const VecRef& p) { return {std::atan2(p(1), p(0)), std::atan2(p(3), p(2))}; }

Vec torus_point(double u, double v) {
    Vec p(4);
    p << std::cos(u), std::sin(u), std::cos(v), std::sin(v);
    return p * kInvSqrt2;
}

Vec torus_eu(double u) {
    Vec e = Vec::Zero(4);
    e(0) = -std::sin(u);
    e(1) = std::cos(u);
    return e;
}

Vec torus_ev(double v) {
    Vec e = Vec::Zero(4);
    e(2) = -std::sin(v);
    e(3) = std::cos(v);
    return e;
}

}  // namespace

const char* to_string(ManifoldKind kind) {
    switch (kind) {
        case ManifoldKind::Sphere: return "sphere";
        case ManifoldKind::Circle: return "circle";
        case ManifoldKind::CliffordTorus: return "clifford_torus";
    }
    return "unknown";
}

ManifoldKind manifold_kind_from_string(const std::string& s) {
    if (s == "sphere") return ManifoldKind::Sphere;
    if (s == "circle") return ManifoldKind::Circle;
    if (s == "clifford_torus" || s == "torus") return ManifoldKind::CliffordTorus;
    throw Error(ErrorKind::InvalidArgument, "unknown manifold '" + s + "'");
}

ManifoldOracle ManifoldOracle::sphere(int m, double radius) {
    if (m < 1 || !(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "sphere needs m >= 1 and r > 0");
    return ManifoldOracle(m == 1 ? ManifoldKind::Circle : ManifoldKind::Sphere, m, m + 1, radius);
}

ManifoldOracle ManifoldOracle::circle(double radius) { return sphere(1, radius); }

ManifoldOracle ManifoldOracle::clifford_torus() {
    return ManifoldOracle(ManifoldKind::CliffordTorus, 2, 4, kInvSqrt2);
}

double ManifoldOracle::injectivity_radius() const { return is_round() ? kPi * r_ : kPi * kInvSqrt2; }

double ManifoldOracle::diameter() const { return is_round() ? kPi * r_ : kPi; }

double ManifoldOracle::volume() const {
    if (!is_round()) return 2.0 * kPi * kPi;
    const double k = m_ + 1;
    return 2.0 * std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0) * std::pow(r_, m_);
}

double ManifoldOracle::reach() const { return is_round() ? r_ : kInvSqrt2; }

double ManifoldOracle::unit_ball_volume(int m) { return std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0 + 1.0); }

double ManifoldOracle::constraint_residual(const VecRef& p) const {
    if (p.size() != d_) return std::numeric_limits<double>::infinity();
    if (is_round()) return std::abs(p.norm() - r_);
    const double a = std::hypot(p(0), p(1)) - kInvSqrt2;
    const double b = std::hypot(p(2), p(3)) - kInvSqrt2;
    return std::max(std::abs(a), std::abs(b));
}

double ManifoldOracle::geodesic_distance(const VecRef& x, const VecRef& y) const {
    double d;
    if (is_round()) {
        // Angle via the half-chord form; agrees with r*arccos(<x,y>/r^2) and stays accurate near 0 and pi.
        d = 2.0 * r_ * std::atan2((x - y).norm(), (x + y).norm());
    } else {
        const auto a = torus_angles(x);
        const auto b = torus_angles(y);
        d = std::hypot(wrap_angle(b.u - a.u), wrap_angle(b.v - a.v)) * kInvSqrt2;
    }
    return d < kZeroDistance ? 0.0 : d;
}

Vec ManifoldOracle::exp(const VecRef& x, const VecRef& v) const {
    if (is_round()) {
        const double len = v.norm();
        if (len == 0.0) return x;
        const double theta = len / r_;
        return std::cos(theta) * x + (std::sin(theta) * r_ / len) * v;
    }
    const auto ang = torus_angles(x);
    const double a = v.dot(torus_eu(ang.u));
    const double b = v.dot(torus_ev(ang.v));
    return torus_point(ang.u + std::sqrt(2.0) * a, ang.v + std::sqrt(2.0) * b);
}

Vec ManifoldOracle::log(const VecRef& x, const VecRef& y) const {
    if (is_round()) {
        const double d = geodesic_distance(x, y);
        if (d == 0.0) return Vec::Zero(d_);
        if (d >= injectivity_radius() * (1.0 - 1e-12)) throw Error(ErrorKind::CutLocus, "log at antipodal point");
        Vec u = y - (x.dot(y) / (r_ * r_)) * x;
        const double un = u.norm();
        if (un == 0.0) throw Error(ErrorKind::CutLocus, "degenerate direction");
        return (d / un) * u;
    }
    const auto a = torus_angles(x);
    const auto b = torus_angles(y);
    const double du = wrap_angle(b.u - a.u);
    const double dv = wrap_angle(b.v - a.v);
    if (std::abs(du) >= kPi * (1.0 - 1e-12) || std::abs(dv) >= kPi * (1.0 - 1e-12))
        throw Error(ErrorKind::CutLocus, "log on torus cut locus");
    return (du * kInvSqrt2) * torus_eu(a.u) + (dv * kInvSqrt2) * torus_ev(a.v);
}

Vec ManifoldOracle::parallel_transport(const VecRef& x, const VecRef& y, const VecRef& v) const {
    if (is_round()) {
        const Vec w = log(x, y);
        const double d = w.norm();
        if (d == 0.0) return v;
        const Vec u = w / d;
        const double theta = d / r_;
        const double a = v.dot(u);
        return v + a * ((std::cos(theta) - 1.0) * u - std::sin(theta) * (x / r_));
    }
    log(x, y);  // cut-locus check
    const auto a = torus_angles(x);
    const auto b = torus_angles(y);
    const double cu = v.dot(torus_eu(a.u));
    const double cv = v.dot(torus_ev(a.v));
    return cu * torus_eu(b.u) + cv * torus_ev(b.v);
}

Vec ManifoldOracle::parallel_map(const VecRef& x, const VecRef& y, const VecRef& xt) const {
    return exp(y, parallel_transport(x, y, log(x, xt)));
}

Mat ManifoldOracle::tangent_basis(const VecRef& x) const {
    if (is_round()) {
        Mat normal = x / x.norm();
        Eigen::HouseholderQR<Mat> qr(normal);
        Mat q = qr.householderQ() * Mat::Identity(d_, d_);
        return q.rightCols(m_);
    }
    const auto a = torus_angles(x);
    Mat basis(4, 2);
    basis.col(0) = torus_eu(a.u);
    basis.col(1) = torus_ev(a.v);
    return basis;
}

Vec ManifoldOracle::project_tangent(const VecRef& x, const VecRef& v) const {
    const Mat b = tangent_basis(x);
    return b * (b.transpose() * v);
}

double ManifoldOracle::ricci(const VecRef&, const VecRef&) const {
    if (kind_ == ManifoldKind::Sphere) return 1.0 / (r_ * r_);
    return 0.0;
}

double ManifoldOracle::sectional(const VecRef&, const VecRef& u, const VecRef& v) const {
    if (m_ < 2) throw Error(ErrorKind::InvalidArgument, "sectional curvature needs m >= 2");
    const double area2 = u.squaredNorm() * v.squaredNorm() - u.dot(v) * u.dot(v);
    if (!(area2 > 1e-24 * u.squaredNorm() * v.squaredNorm()))
        throw Error(ErrorKind::InvalidArgument, "sectional curvature needs independent vectors");
    return kind_ == ManifoldKind::Sphere ? 1.0 / (r_ * r_) : 0.0;
}

Vec ManifoldOracle::second_fundamental_form(const VecRef& x, const VecRef& v) const {
    if (is_round()) return -(v.squaredNorm() / (r_ * r_)) * x;
    const auto ang = torus_angles(x);
    const double a = v.dot(torus_eu(ang.u));
    const double b = v.dot(torus_ev(ang.v));
    Vec acc(4);
    acc << std::cos(ang.u) * a * a, std::sin(ang.u) * a * a, std::cos(ang.v) * b * b, std::sin(ang.v) * b * b;
    return -std::sqrt(2.0) * acc;
}

double ManifoldOracle::ricci_lower_bound() const { return kind_ == ManifoldKind::Sphere ? 1.0 / (r_ * r_) : 0.0; }

PointCloud sample_uniform(const ManifoldOracle& oracle, int n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    std::mt19937_64 rng(seed);
    PointCloud cloud;
    cloud.oracle = oracle;
    cloud.seed = seed;
    cloud.points.resize(oracle.ambient_dim(), n);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    switch (oracle.kind()) {
        case ManifoldKind::Sphere: {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (int i = 0; i < n; ++i) {
                Vec z(oracle.ambient_dim());
                double len = 0.0;
                while (len == 0.0) {
                    for (int k = 0; k < z.size(); ++k) z(k) = normal(rng);
                    len = z.norm();
                }
                cloud.points.col(i) = (oracle.radius() / len) * z;
            }
            break;
        }
        case ManifoldKind::Circle:
            for (int i = 0; i < n; ++i) {
                const double t = angle(rng);
                cloud.points(0, i) = oracle.radius() * std::cos(t);
                cloud.points(1, i) = oracle.radius() * std::sin(t);
            }
            break;
        case ManifoldKind::CliffordTorus:
            for (int i = 0; i < n; ++i) {
                const double u = angle(rng);
                const double v = angle(rng);
                cloud.points.col(i) = torus_point(u, v);
            }
            break;
    }
    return cloud;
}

}  // namespace ricci
