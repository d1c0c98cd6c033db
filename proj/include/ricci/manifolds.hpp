#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

namespace ricci {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

enum class ManifoldKind { Sphere, Circle, CliffordTorus };

const char* to_string(ManifoldKind kind);
ManifoldKind manifold_kind_from_string(const std::string& s);

// Closed-form test manifolds embedded in Euclidean space.
class ManifoldOracle {
public:
    static ManifoldOracle sphere(int m, double radius = 1.0);
    static ManifoldOracle circle(double radius = 1.0);
    static ManifoldOracle clifford_torus();

    ManifoldKind kind() const { return kind_; }
    int intrinsic_dim() const { return m_; }
    int ambient_dim() const { return d_; }
    double radius() const { return r_; }
    double injectivity_radius() const;
    double diameter() const;
    double volume() const;
    double reach() const;

    // Distance of p from satisfying the defining equations.
    double constraint_residual(const VecRef& p) const;

    double geodesic_distance(const VecRef& x, const VecRef& y) const;
    Vec exp(const VecRef& x, const VecRef& v) const;
    Vec log(const VecRef& x, const VecRef& y) const;
    Vec parallel_transport(const VecRef& x, const VecRef& y, const VecRef& v) const;
    Vec parallel_map(const VecRef& x, const VecRef& y, const VecRef& xt) const;

    // Orthonormal basis of T_x M as columns of a d x m matrix.
    Mat tangent_basis(const VecRef& x) const;
    Vec project_tangent(const VecRef& x, const VecRef& v) const;

    double ricci(const VecRef& x, const VecRef& v) const;
    double sectional(const VecRef& x, const VecRef& u, const VecRef& v) const;
    Vec second_fundamental_form(const VecRef& x, const VecRef& v) const;
    // Lower bound of Ric over the manifold.
    double ricci_lower_bound() const;

    // Volume of the unit ball in R^m.
    static double unit_ball_volume(int m);

private:
    ManifoldOracle(ManifoldKind kind, int m, int d, double r) : kind_(kind), m_(m), d_(d), r_(r) {}
    bool is_round() const { return kind_ != ManifoldKind::CliffordTorus; }

    ManifoldKind kind_;
    int m_;
    int d_;
    double r_;
};

struct PointCloud {
    Mat points;  // d x n, one point per column
    std::optional<ManifoldOracle> oracle;
    std::uint64_t seed = 0;

    int n() const { return static_cast<int>(points.cols()); }
    int dim() const { return static_cast<int>(points.rows()); }
    auto point(int i) const { return points.col(i); }
};

PointCloud sample_uniform(const ManifoldOracle& oracle, int n, std::uint64_t seed);

}  // namespace ricci
