#include "ricci/estimators.hpp"

#include "ricci/error.hpp"
#include "ricci/parallel.hpp"
#include "ricci/point_io.hpp"
#include "ricci/stats.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace ricci {

const char* to_string(FieldMode mode) {
    switch (mode) {
        case FieldMode::Exact: return "exact";
        case FieldMode::Euclidean: return "euclidean";
        case FieldMode::Sff: return "sff";
    }
    return "unknown";
}

FieldMode field_mode_from_string(const std::string& s) {
    if (s == "exact") return FieldMode::Exact;
    if (s == "euclidean") return FieldMode::Euclidean;
    if (s == "sff" || s == "sff_corrected") return FieldMode::Sff;
    throw Error(ErrorKind::InvalidArgument, "unknown field mode '" + s + "'");
}

int quadratic_terms(int m) { return m * (m + 1) / 2; }

Vec quadratic_monomials(const VecRef& t) {
    const int m = static_cast<int>(t.size());
    Vec q(quadratic_terms(m));
    int k = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) q(k++) = t(a) * t(b);
    return q;
}

Vec SffEstimate::hessian_form(const VecRef& w) const { return quad * quadratic_monomials(w); }

Mat SffEstimate::hessian_matrix(int k) const {
    const int mm = m();
    Mat h(mm, mm);
    int c = 0;
    for (int a = 0; a < mm; ++a)
        for (int b = a; b < mm; ++b, ++c) {
            if (a == b) {
                h(a, a) = quad(k, c);
            } else {
                h(a, b) = 0.5 * quad(k, c);
                h(b, a) = h(a, b);
            }
        }
    return h;
}

std::vector<int> euclidean_neighbors(const PointCloud& cloud, int i, double h) {
    std::vector<int> out;
    const double h2 = h * h;
    const auto xi = cloud.point(i);
    for (int j = 0; j < cloud.n(); ++j)
        if ((cloud.point(j) - xi).squaredNorm() <= h2) out.push_back(j);
    return out;
}

Mat estimate_tangent_basis(const PointCloud& cloud, int i, double h, int m) {
    const auto nb = euclidean_neighbors(cloud, i, h);
    if (static_cast<int>(nb.size()) < m + 1)
        throw Error(ErrorKind::InsufficientNeighborhood,
                    "vertex " + std::to_string(i) + " has " + std::to_string(nb.size()) + " points within h");
    const int d = cloud.dim();
    Mat local(d, static_cast<Eigen::Index>(nb.size()));
    for (std::size_t k = 0; k < nb.size(); ++k) local.col(static_cast<Eigen::Index>(k)) = cloud.point(nb[k]);
    const Vec centre = local.rowwise().mean();
    local.colwise() -= centre;
    const Mat cov = local * local.transpose() / static_cast<double>(nb.size());
    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    const Vec& ev = es.eigenvalues();  // ascending
    if (m < d && ev(d - m) - ev(d - m - 1) < 1e-12)
        throw Error(ErrorKind::IllConditionedTangent, "vertex " + std::to_string(i));
    return es.eigenvectors().rightCols(m).rowwise().reverse();
}

SffEstimate fit_sff(const PointCloud& cloud, int i, double h, const Mat& basis) {
    const int m = static_cast<int>(basis.cols());
    const int p = quadratic_terms(m);
    const auto nb = euclidean_neighbors(cloud, i, h);
    if (static_cast<int>(nb.size()) < p + m + 1)
        throw Error(ErrorKind::InsufficientNeighborhood,
                    "vertex " + std::to_string(i) + " has " + std::to_string(nb.size()) + " points within h");
    const int d = cloud.dim();
    const int rows = static_cast<int>(nb.size());
    Mat design(rows, 1 + m + p);
    Mat target(rows, d);
    const Mat normal_proj = Mat::Identity(d, d) - basis * basis.transpose();
    for (int r = 0; r < rows; ++r) {
        const Vec dx = cloud.point(nb[r]) - cloud.point(i);
        const Vec t = basis.transpose() * dx;
        design(r, 0) = 1.0;
        design.row(r).segment(1, m) = t.transpose();
        design.row(r).tail(p) = quadratic_monomials(t).transpose();
        target.row(r) = (normal_proj * dx).transpose();
    }
    Eigen::ColPivHouseholderQR<Mat> qr(design);
    if (qr.rank() < design.cols()) throw Error(ErrorKind::SingularFit, "vertex " + std::to_string(i));
    const Mat coef = qr.solve(target);  // (1+m+p) x d
    SffEstimate est;
    est.base_index = i;
    est.tangent_basis = basis;
    est.neighborhood_size = rows;
    // Fitted normal offset = sum_c coef_c * monomial_c; H(w,w) is twice that quadratic part.
    est.quad = 2.0 * coef.bottomRows(p).transpose();
    return est;
}

SffEstimate oracle_sff(const ManifoldOracle& oracle, const VecRef& x, int base_index) {
    SffEstimate est;
    est.base_index = base_index;
    est.tangent_basis = oracle.tangent_basis(x);
    const int m = oracle.intrinsic_dim();
    est.quad.resize(oracle.ambient_dim(), quadratic_terms(m));
    int c = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b, ++c) {
            const Vec ea = est.tangent_basis.col(a);
            const Vec eb = est.tangent_basis.col(b);
            if (a == b) {
                est.quad.col(c) = oracle.second_fundamental_form(x, ea);
            } else {
                // Polarization; the monomial t_a t_b carries 2 II(e_a, e_b).
                est.quad.col(c) = oracle.second_fundamental_form(x, ea + eb) - oracle.second_fundamental_form(x, ea) -
                                  oracle.second_fundamental_form(x, eb);
            }
        }
    return est;
}

DistanceField DistanceField::exact(std::shared_ptr<const PointCloud> cloud) {
    if (!cloud->oracle) throw Error(ErrorKind::InvalidArgument, "exact field needs an oracle");
    return DistanceField(FieldMode::Exact, std::move(cloud));
}

DistanceField DistanceField::euclidean(std::shared_ptr<const PointCloud> cloud) {
    return DistanceField(FieldMode::Euclidean, std::move(cloud));
}

DistanceField DistanceField::sff(std::shared_ptr<const PointCloud> cloud, int m, double h, bool parallel) {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "fit radius must be positive");
    DistanceField f(FieldMode::Sff, cloud);
    f.h_ = h;
    const int n = cloud->n();
    auto est = std::make_shared<std::vector<SffEstimate>>(n);
    ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (int i = 0; i < n; ++i) {
        try {
            (*est)[i] = fit_sff(*cloud, i, h, estimate_tangent_basis(*cloud, i, h, m));
        } catch (...) {
            err.capture(i);
        }
    }
    err.rethrow();
    if (cloud->oracle) f.beta_ = sff_beta(*est, *cloud, *cloud->oracle);
    f.sff_ = std::move(est);
    return f;
}

DistanceField DistanceField::sff_from_oracle(std::shared_ptr<const PointCloud> cloud) {
    if (!cloud->oracle) throw Error(ErrorKind::InvalidArgument, "oracle second fundamental form needs an oracle");
    DistanceField f(FieldMode::Sff, cloud);
    f.oracle_sff_ = true;
    f.beta_ = 0.0;
    const int n = cloud->n();
    auto est = std::make_shared<std::vector<SffEstimate>>(n);
    for (int i = 0; i < n; ++i) (*est)[i] = oracle_sff(*cloud->oracle, cloud->point(i), i);
    f.sff_ = std::move(est);
    return f;
}

const std::vector<SffEstimate>& DistanceField::estimates() const {
    static const std::vector<SffEstimate> empty;
    return sff_ ? *sff_ : empty;
}

double DistanceField::sff_curvature_sq(int i, const VecRef& chord) const {
    const SffEstimate& e = (*sff_)[i];
    Vec w = e.tangent_basis.transpose() * chord;
    const double len = w.norm();
    if (len == 0.0) return 0.0;
    w /= len;
    return e.hessian_form(w).squaredNorm();
}

double DistanceField::operator()(int i, int j) const {
    if (i == j) return 0.0;
    const int a = std::min(i, j);
    const int b = std::max(i, j);
    const auto xa = cloud_->point(a);
    const auto xb = cloud_->point(b);
    switch (mode_) {
        case FieldMode::Exact: return cloud_->oracle->geodesic_distance(xa, xb);
        case FieldMode::Euclidean: return (xa - xb).norm();
        case FieldMode::Sff: {
            const Vec chord = xb - xa;
            const double c = chord.norm();
            const double q = sff_curvature_sq(a, chord) + sff_curvature_sq(b, -chord);
            return c + q * c * c * c / 48.0;
        }
    }
    return 0.0;
}

double DistanceField::to_point(int i, const VecRef& p) const {
    if (mode_ != FieldMode::Exact) throw Error(ErrorKind::InvalidArgument, "off-sample base needs the exact field");
    return cloud_->oracle->geodesic_distance(cloud_->point(i), p);
}

double DistanceField::metric_lower_bound(int i, int j) const {
    if (mode_ == FieldMode::Exact) return (*this)(i, j);
    if (i == j) return 0.0;
    return (cloud_->point(std::min(i, j)) - cloud_->point(std::max(i, j))).norm();
}

double sff_beta(const std::vector<SffEstimate>& estimates, const PointCloud& cloud, const ManifoldOracle& oracle) {
    double worst = 0.0;
    for (const auto& e : estimates) {
        const Vec x = cloud.point(e.base_index);
        const Mat tb = oracle.tangent_basis(x);
        const int m = static_cast<int>(tb.cols());
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) {
                Vec w = tb.col(a) + (a == b ? Vec::Zero(tb.rows()) : Vec(tb.col(b)));
                w.normalize();
                const double truth = oracle.second_fundamental_form(x, w).squaredNorm();
                Vec coords = e.tangent_basis.transpose() * w;
                if (coords.norm() == 0.0) continue;
                coords.normalize();
                const double est = e.hessian_form(coords).squaredNorm();
                if (truth > 0.0) worst = std::max(worst, std::abs(est - truth) / truth);
            }
    }
    return worst;
}

ChordExpansionReport chord_expansion_check(const ManifoldOracle& circle, const std::vector<double>& t_grid) {
    if (circle.kind() != ManifoldKind::Circle) throw Error(ErrorKind::InvalidArgument, "chord expansion needs a circle");
    const double r = circle.radius();
    const double acc2 = 1.0 / (r * r);
    ChordExpansionReport rep;
    std::vector<double> ts, res;
    for (double t : t_grid) {
        if (!(t > 0.0) || t >= circle.injectivity_radius())
            throw Error(ErrorKind::InvalidArgument, "t outside (0, injectivity radius)");
        const double chord = 2.0 * r * std::sin(t / (2.0 * r));
        const double corrected = chord + chord * chord * chord * acc2 / 24.0;
        rep.rows.push_back({t, chord, corrected, std::abs(t - corrected)});
        ts.push_back(t);
        res.push_back(std::abs(t - corrected));
    }
    rep.slope = log_log_slope(ts, res);
    return rep;
}

Assumption31Report validate_assumption_31(const DistanceField& field, const ManifoldOracle& oracle, double eps, double c,
                                          double C) {
    const PointCloud& cloud = field.cloud();
    const int n = cloud.n();
    const double reach = C * eps;
    Assumption31Report rep;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            // Both the field and the geodesic distance dominate the chord.
            if ((cloud.point(i) - cloud.point(j)).norm() > reach) continue;
            const double dm = oracle.geodesic_distance(cloud.point(i), cloud.point(j));
            const double dh = field(i, j);
            const bool in_m = c * eps <= dm && dm <= C * eps;
            const bool in_h = c * eps <= dh && dh <= C * eps;
            if (in_m || in_h) {
                ++rep.pairs_checked;
                rep.max_scaled_error = std::max(rep.max_scaled_error, std::abs(dm - dh) / (eps * eps * eps));
            }
            if (dh <= c * eps && dm > (4.0 / 3.0) * c * eps) ++rep.implication_violations;
        }
    return rep;
}

void write_field_csv(const std::string& path, const DistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                     const std::string& provenance_line) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << provenance_line << "\ni,j,value\n";
    for (auto [i, j] : pairs) {
        if (i > j) std::swap(i, j);
        if (i == j) continue;
        out << i << ',' << j << ',' << format_double(field(i, j)) << '\n';
    }
}

void write_sff_json(const std::string& path, const DistanceField& field) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : field.estimates()) {
        nlohmann::json v;
        v["base_index"] = e.base_index;
        v["neighborhood_size"] = e.neighborhood_size;
        nlohmann::json basis = nlohmann::json::array();
        for (int a = 0; a < e.tangent_basis.cols(); ++a) {
            std::vector<double> col(e.tangent_basis.rows());
            for (int k = 0; k < e.tangent_basis.rows(); ++k) col[k] = e.tangent_basis(k, a);
            basis.push_back(col);
        }
        v["tangent_basis"] = basis;
        nlohmann::json hess = nlohmann::json::array();
        for (int k = 0; k < e.quad.rows(); ++k) {
            const Mat h = e.hessian_matrix(k);
            nlohmann::json rows = nlohmann::json::array();
            for (int a = 0; a < h.rows(); ++a) {
                std::vector<double> row(h.cols());
                for (int b = 0; b < h.cols(); ++b) row[b] = h(a, b);
                rows.push_back(row);
            }
            hess.push_back(rows);
        }
        v["hessian"] = hess;
        arr.push_back(v);
    }
    nlohmann::json doc;
    doc["fit_radius"] = field.fit_radius();
    doc["beta"] = field.beta() ? nlohmann::json(*field.beta()) : nlohmann::json("unknown");
    doc["oracle_sff"] = field.uses_oracle_sff();
    doc["vertices"] = arr;
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << doc.dump(1) << '\n';
}

}  // namespace ricci
