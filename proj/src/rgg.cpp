#include "ricci/rgg.hpp"

#include "ricci/error.hpp"
#include "ricci/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ricci {

Rgg::Rgg(DistanceField field, double eps, std::vector<int> offsets, std::vector<int> members)
    : field_(std::move(field)), eps_(eps), offsets_(std::move(offsets)), members_(std::move(members)) {}

int Rgg::intrinsic_dim() const {
    if (cloud().oracle) return cloud().oracle->intrinsic_dim();
    const auto& est = field_.estimates();
    if (!est.empty()) return est.front().m();
    throw Error(ErrorKind::InvalidArgument, "intrinsic dimension unknown without an oracle or fitted field");
}

bool Rgg::adjacent(int x, int z) const {
    const auto b = ball(x);
    return std::binary_search(b.begin(), b.end(), z);
}

std::vector<std::pair<int, int>> Rgg::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n(); ++i)
        for (int j : ball(i))
            if (j > i) out.emplace_back(i, j);
    return out;
}

long long Rgg::edge_count() const {
    long long total = 0;
    for (int i = 0; i < n(); ++i) total += ball_size(i) - 1;
    return total / 2;
}

Rgg build_rgg(const DistanceField& field, double eps, bool parallel) {
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
    auto lists = parallel ? kernels::neighbor_lists_omp(field, eps) : kernels::neighbor_lists_serial(field, eps);
    std::vector<int> offsets(field.n() + 1, 0);
    for (int i = 0; i < field.n(); ++i) offsets[i + 1] = offsets[i] + static_cast<int>(lists[i].size());
    std::vector<int> members;
    members.reserve(offsets.back());
    for (auto& l : lists) members.insert(members.end(), l.begin(), l.end());
    return Rgg(field, eps, std::move(offsets), std::move(members));
}

BallMeasure ball_measure(const Rgg& rgg, int base) {
    if (base < 0 || base >= rgg.n()) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
    const auto b = rgg.ball(base);
    return {base, std::vector<int>(b.begin(), b.end())};
}

BallMeasure ball_measure(const Rgg& rgg, const VecRef& base_point) {
    const DistanceField& f = rgg.field();
    BallMeasure m;
    for (int z = 0; z < rgg.n(); ++z)
        if (f.to_point(z, base_point) <= rgg.eps()) m.support.push_back(z);
    if (m.support.empty()) throw Error(ErrorKind::EmptyBall, "no data point within eps of the base point");
    return m;
}

DegreeDensity degree_density(const Rgg& rgg, const ManifoldOracle* oracle) {
    const int m = oracle ? oracle->intrinsic_dim() : rgg.intrinsic_dim();
    const double scale = static_cast<double>(rgg.n()) * std::pow(rgg.eps(), m);
    DegreeDensity out;
    out.D.resize(rgg.n());
    for (int x = 0; x < rgg.n(); ++x) out.D[x] = rgg.ball_size(x) / scale;
    if (oracle) {
        out.alpha = ManifoldOracle::unit_ball_volume(m) / oracle->volume();
        out.alpha_from_oracle = true;
    } else {
        double s = 0.0;
        for (double v : out.D) s += v;
        out.alpha = s / rgg.n();
    }
    for (double v : out.D) out.max_dev = std::max(out.max_dev, std::abs(v - out.alpha));
    return out;
}

double estimate_ball_difference_constant(const Rgg& rgg, const ManifoldOracle& oracle,
                                         const std::vector<std::pair<int, int>>& pairs) {
    double best = 0.0;
    const PointCloud& cloud = rgg.cloud();
    for (auto [x, y] : pairs) {
        if (x == y) continue;
        const double d = oracle.geodesic_distance(cloud.point(x), cloud.point(y));
        if (d == 0.0) continue;
        const auto bx = rgg.ball(x);
        const auto by = rgg.ball(y);
        std::vector<int> common;
        std::set_intersection(bx.begin(), bx.end(), by.begin(), by.end(), std::back_inserter(common));
        const double frac = static_cast<double>(bx.size() - common.size()) / static_cast<double>(bx.size());
        best = std::max(best, frac * rgg.eps() / d);
    }
    return best;
}

void write_rgg_json(const std::string& path, const Rgg& rgg, const std::string& provenance_line) {
    nlohmann::json j;
    j["n"] = rgg.n();
    j["eps"] = rgg.eps();
    j["field_mode"] = to_string(rgg.field().mode());
    nlohmann::json edges = nlohmann::json::array();
    for (auto [a, b] : rgg.edges()) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    j["meta"] = {{"provenance", provenance_line}, {"edge_count", rgg.edge_count()}};
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << j.dump() << '\n';
}

}  // namespace ricci
