#include "ricci/point_io.hpp"

#include "ricci/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ricci {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sidecar_path(const std::string& csv_path) { return csv_path + ".json"; }

void write_cloud_csv(const std::string& path, const PointCloud& cloud, const Provenance& prov) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << prov.comment_line() << '\n';
    for (int k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << 'x' << k;
    out << '\n';
    for (int i = 0; i < cloud.n(); ++i) {
        for (int k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << format_double(cloud.points(k, i));
        out << '\n';
    }
}

void write_cloud_sidecar(const std::string& csv_path, const PointCloud& cloud) {
    nlohmann::json j;
    if (cloud.oracle) {
        j["kind"] = to_string(cloud.oracle->kind());
        j["m"] = cloud.oracle->intrinsic_dim();
        j["radius"] = cloud.oracle->radius();
    } else {
        j["kind"] = nullptr;
        j["m"] = nullptr;
        j["radius"] = nullptr;
    }
    j["d"] = cloud.dim();
    j["n"] = cloud.n();
    j["seed"] = cloud.seed;
    const std::string path = sidecar_path(csv_path);
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << j.dump(2) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == name) return static_cast<int>(k);
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            t.header = split_csv_line(line);
            have_header = true;
        } else {
            t.rows.push_back(split_csv_line(line));
        }
    }
    if (!have_header) throw Error(ErrorKind::Io, "missing header in " + path);
    return t;
}

PointCloud read_cloud_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const int d = static_cast<int>(t.header.size());
    PointCloud cloud;
    cloud.points.resize(d, static_cast<Eigen::Index>(t.rows.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (static_cast<int>(t.rows[i].size()) != d) throw Error(ErrorKind::Io, "ragged row in " + path);
        for (int k = 0; k < d; ++k) cloud.points(k, static_cast<Eigen::Index>(i)) = std::stod(t.rows[i][k]);
    }
    std::ifstream side(sidecar_path(path));
    if (side) {
        const auto j = nlohmann::json::parse(side);
        cloud.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("kind") && j["kind"].is_string()) {
            const auto kind = manifold_kind_from_string(j["kind"].get<std::string>());
            if (kind == ManifoldKind::CliffordTorus)
                cloud.oracle = ManifoldOracle::clifford_torus();
            else
                cloud.oracle = ManifoldOracle::sphere(j["m"].get<int>(), j["radius"].get<double>());
            if (cloud.oracle->ambient_dim() != d) throw Error(ErrorKind::Io, "sidecar dimension mismatch");
        }
    }
    if (cloud.n() < 1) throw Error(ErrorKind::Io, "empty point cloud " + path);
    return cloud;
}

}  // namespace ricci
