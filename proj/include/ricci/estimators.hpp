#pragma once

#include "ricci/manifolds.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

enum class FieldMode { Exact, Euclidean, Sff };

const char* to_string(FieldMode mode);
FieldMode field_mode_from_string(const std::string& s);

// Local quadratic model of the normal displacement at one vertex.
struct SffEstimate {
    int base_index = -1;
    Mat tangent_basis;  // d x m, orthonormal columns
    // d x m(m+1)/2: column for monomial t_a t_b (a <= b, row-major order), scaled so that
    // hessian_form(w) = quad * monomials(w) equals H(w, w).
    Mat quad;
    int neighborhood_size = 0;

    int m() const { return static_cast<int>(tangent_basis.cols()); }
    // H(w, w) for tangent coordinates w.
    Vec hessian_form(const VecRef& w) const;
    // Symmetric m x m matrix of normal coordinate k.
    Mat hessian_matrix(int k) const;
};

int quadratic_terms(int m);
Vec quadratic_monomials(const VecRef& t);

// Indices of cloud points within Euclidean distance h of point i, including i.
std::vector<int> euclidean_neighbors(const PointCloud& cloud, int i, double h);

Mat estimate_tangent_basis(const PointCloud& cloud, int i, double h, int m);
SffEstimate fit_sff(const PointCloud& cloud, int i, double h, const Mat& basis);
// Estimate assembled from the oracle tangent space and second fundamental form.
SffEstimate oracle_sff(const ManifoldOracle& oracle, const VecRef& x, int base_index);

// Symmetric pairwise distance over a point cloud.
class DistanceField {
public:
    static DistanceField exact(std::shared_ptr<const PointCloud> cloud);
    static DistanceField euclidean(std::shared_ptr<const PointCloud> cloud);
    // Fits every vertex from data with fit radius h (callers default to 4 * eps).
    static DistanceField sff(std::shared_ptr<const PointCloud> cloud, int m, double h, bool parallel = true);
    static DistanceField sff_from_oracle(std::shared_ptr<const PointCloud> cloud);

    FieldMode mode() const { return mode_; }
    const PointCloud& cloud() const { return *cloud_; }
    const std::shared_ptr<const PointCloud>& cloud_ptr() const { return cloud_; }
    int n() const { return cloud_->n(); }
    bool uses_oracle_sff() const { return oracle_sff_; }
    double fit_radius() const { return h_; }
    std::optional<double> beta() const { return beta_; }
    const std::vector<SffEstimate>& estimates() const;

    double operator()(int i, int j) const;
    // Field value from vertex i to an arbitrary manifold point (exact mode only).
    double to_point(int i, const VecRef& p) const;
    // A metric on the cloud bounded above by the field.
    double metric_lower_bound(int i, int j) const;
    // True when the field itself satisfies the triangle inequality.
    bool is_metric() const { return mode_ != FieldMode::Sff; }

private:
    DistanceField(FieldMode mode, std::shared_ptr<const PointCloud> cloud) : mode_(mode), cloud_(std::move(cloud)) {}
    double sff_curvature_sq(int i, const VecRef& chord) const;

    FieldMode mode_;
    std::shared_ptr<const PointCloud> cloud_;
    std::shared_ptr<const std::vector<SffEstimate>> sff_;
    double h_ = 0.0;
    bool oracle_sff_ = false;
    std::optional<double> beta_;
};

// Max relative error of |H(w,w)|^2 against the oracle over basis and diagonal directions.
double sff_beta(const std::vector<SffEstimate>& estimates, const PointCloud& cloud, const ManifoldOracle& oracle);

struct ChordExpansionRow {
    double t;
    double chord;
    double corrected;
    double residual;
};

struct ChordExpansionReport {
    std::vector<ChordExpansionRow> rows;
    double slope;
};

ChordExpansionReport chord_expansion_check(const ManifoldOracle& circle, const std::vector<double>& t_grid);

struct Assumption31Report {
    double max_scaled_error = 0.0;
    long long implication_violations = 0;
    long long pairs_checked = 0;
};

Assumption31Report validate_assumption_31(const DistanceField& field, const ManifoldOracle& oracle, double eps, double c,
                                          double C);

// Sparse export: rows "i,j,value" for i < j over the given pairs.
void write_field_csv(const std::string& path, const DistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                     const std::string& provenance_line);
void write_sff_json(const std::string& path, const DistanceField& field);

}  // namespace ricci
