#include "ricci/error.hpp"
#include "ricci/point_io.hpp"
#include "ricci/provenance.hpp"
#include "ricci/stats.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ricci;

namespace {

std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "ricci_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(PointIo, RoundTripIsBitExact) {
    const auto cloud = sample_uniform(ManifoldOracle::sphere(2, 1.5), 50, 3);
    const std::string path = temp_path("cloud.csv");
    write_cloud_csv(path, cloud, Provenance::from_config("kind=sphere", 3));
    write_cloud_sidecar(path, cloud);
    const auto back = read_cloud_csv(path);
    ASSERT_EQ(back.n(), 50);
    ASSERT_EQ(back.dim(), 3);
    EXPECT_TRUE((back.points.array() == cloud.points.array()).all());
    ASSERT_TRUE(back.oracle.has_value());
    EXPECT_EQ(back.oracle->kind(), ManifoldKind::Sphere);
    EXPECT_EQ(back.oracle->radius(), 1.5);
    EXPECT_EQ(back.seed, 3u);
}

TEST(PointIo, HeaderAndProvenanceLine) {
    const auto cloud = sample_uniform(ManifoldOracle::clifford_torus(), 3, 1);
    const std::string path = temp_path("torus.csv");
    write_cloud_csv(path, cloud, Provenance::from_config("x", 1));
    const auto table = read_csv(path);
    EXPECT_EQ(table.header, (std::vector<std::string>{"x0", "x1", "x2", "x3"}));
    EXPECT_EQ(table.rows.size(), 3u);
    const std::string text = slurp(path);
    EXPECT_EQ(text.rfind("# config_hash=", 0), 0u);
}

TEST(PointIo, SameInputsGiveIdenticalBytes) {
    const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
    write_cloud_csv(a, sample_uniform(ManifoldOracle::sphere(2), 100, 1), Provenance::from_config("c", 1));
    write_cloud_csv(b, sample_uniform(ManifoldOracle::sphere(2), 100, 1), Provenance::from_config("c", 1));
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(PointIo, QuotedFieldsAndMissingFile) {
    const std::string path = temp_path("quoted.csv");
    {
        std::ofstream out(path);
        out << "# comment\n\"a\",\"b,c\"\n1,\"say \"\"hi\"\"\"\n";
    }
    const auto t = read_csv(path);
    EXPECT_EQ(t.header[1], "b,c");
    EXPECT_EQ(t.rows[0][1], "say \"hi\"");
    EXPECT_EQ(t.column("b,c"), 1);
    EXPECT_EQ(t.column("zzz"), -1);
    EXPECT_THROW(read_csv(temp_path("does_not_exist.csv")), Error);
}

TEST(PointIo, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Provenance, HashIsStableAndSeedSensitive) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    const auto p = Provenance::from_config("n=10", 5);
    EXPECT_EQ(p.config_hash, hex64(fnv1a64("n=10")));
    EXPECT_NE(p.comment_line().find("seed=5"), std::string::npos);
    EXPECT_NE(p.comment_line().find(kVersion), std::string::npos);
}

TEST(Stats, Basics) {
    EXPECT_DOUBLE_EQ(mean({1, 2, 3}), 2.0);
    EXPECT_DOUBLE_EQ(median({3, 1, 2, 10}), 2.5);
    EXPECT_DOUBLE_EQ(max_value({-1, 4, 2}), 4.0);
    EXPECT_NEAR(log_log_slope({1, 2, 4}, {3, 24, 192}), 3.0, 1e-12);
    EXPECT_EQ(count_inversions({3, 2, 2.5, 1}), 1);
}
