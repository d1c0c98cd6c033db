#include "commands.hpp"

#include "svg.hpp"

#include "ricci/curvature.hpp"
#include "ricci/error.hpp"
#include "ricci/experiments.hpp"
#include "ricci/heat.hpp"
#include "ricci/point_io.hpp"
#include "ricci/stats.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;

namespace ricci::cli {

std::string ExperimentConfig::canonical() const {
    std::ostringstream s;
    s << "manifold=" << manifold << "\nm=" << m << "\nradius=" << format_double(radius) << "\nn=" << n
      << "\nseed=" << seed << "\neps=" << format_double(eps) << "\nc0=" << format_double(c0)
      << "\nc1=" << format_double(c1) << "\nfield=" << field << "\npairs=" << pairs << "\ninput=" << input
      << "\nset=" << set << "\nseeds=" << seeds << "\nschedule=" << schedule
      << "\neps_scale=" << format_double(eps_scale) << "\nwindow_pairs=" << window_pairs << "\nt_grid=" << t_grid
      << '\n';
    return s.str();
}

ManifoldOracle ExperimentConfig::oracle() const {
    switch (manifold_kind_from_string(manifold)) {
        case ManifoldKind::Sphere: return ManifoldOracle::sphere(m, radius);
        case ManifoldKind::Circle: return ManifoldOracle::circle(radius);
        case ManifoldKind::CliffordTorus: return ManifoldOracle::clifford_torus();
    }
    throw Error(ErrorKind::InvalidArgument, "manifold");
}

namespace {

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out);
    return (fs::path(cfg.out) / name).string();
}

// Every run leaves its configuration next to its outputs.
void write_config(const ExperimentConfig& cfg, const std::string& command) {
    std::ofstream out(out_path(cfg, command + ".config"));
    if (!out) throw Error(ErrorKind::Io, "cannot write config to " + cfg.out);
    out << cfg.provenance().comment_line() << '\n' << cfg.canonical();
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidArgument, "bad number '" + item + "' in list '" + text + "'");
        }
    }
    return v;
}

std::shared_ptr<const PointCloud> load_cloud(const ExperimentConfig& cfg) {
    if (!cfg.input.empty()) {
        auto c = read_cloud_csv(cfg.input);
        if (!c.oracle) c.oracle = cfg.oracle();
        return std::make_shared<const PointCloud>(std::move(c));
    }
    return std::make_shared<const PointCloud>(sample_uniform(cfg.oracle(), cfg.n, cfg.seed));
}

DistanceField make_field(const ExperimentConfig& cfg, const std::shared_ptr<const PointCloud>& cloud) {
    switch (field_mode_from_string(cfg.field)) {
        case FieldMode::Exact: return DistanceField::exact(cloud);
        case FieldMode::Euclidean: return DistanceField::euclidean(cloud);
        case FieldMode::Sff: return DistanceField::sff(cloud, cloud->oracle->intrinsic_dim(), 4.0 * cfg.eps);
    }
    throw Error(ErrorKind::InvalidArgument, "field");
}

// Graph, metric, and the cloud they index, kept together for their lifetimes.
struct Pipeline {
    std::shared_ptr<const PointCloud> cloud;
    std::unique_ptr<Rgg> rgg;
    std::unique_ptr<GraphMetric> metric;
};

Pipeline build_pipeline(const ExperimentConfig& cfg) {
    Pipeline p;
    p.cloud = load_cloud(cfg);
    p.rgg = std::make_unique<Rgg>(build_rgg(make_field(cfg, p.cloud), cfg.eps));
    p.metric = std::make_unique<GraphMetric>(*p.rgg, cfg.c0, cfg.c1);
    if (!p.metric->valid_regime())
        fmt::print(stderr,
                   "WARNING: c1 = {} < 2 + 4 c0 = {}; the graph metric is outside its valid regime and results are "
                   "reported as computed.\n",
                   cfg.c1, 2.0 + 4.0 * cfg.c0);
    return p;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

int cmd_sample(const ExperimentConfig& cfg) {
    const auto cloud = sample_uniform(cfg.oracle(), cfg.n, cfg.seed);
    const std::string path = out_path(cfg, "cloud.csv");
    write_cloud_csv(path, cloud, cfg.provenance());
    write_cloud_sidecar(path, cloud);
    write_config(cfg, "sample");
    fmt::print("wrote {} ({} points in R^{})\n", path, cloud.n(), cloud.dim());
    return kExitOk;
}

int cmd_build(const ExperimentConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    const std::string prov = cfg.provenance().comment_line();
    write_rgg_json(out_path(cfg, "rgg.json"), *p.rgg, prov);
    const auto edges = p.rgg->edges();
    write_dg_csv(out_path(cfg, "graph_distance.csv"), *p.metric, edges, prov);
    write_config(cfg, "build");
    fmt::print("n = {}, eps = {}, edges = {}, components = {}, valid regime = {}\n", p.rgg->n(), cfg.eps,
               p.rgg->edge_count(), p.metric->component_count(), p.metric->valid_regime());
    return kExitOk;
}

int cmd_curvature(const ExperimentConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    const auto pairs = pair_workload(*p.rgg, *p.metric, PairPolicy::parse(cfg.pairs));
    const auto recs = kappa_batch(*p.rgg, *p.metric, pairs);
    const std::string path = out_path(cfg, "curvature.csv");
    write_records_csv(path, recs, cfg.provenance().comment_line());
    write_config(cfg, "curvature");
    std::vector<double> kh;
    for (const auto& r : recs) kh.push_back(r.kappa_hat);
    if (kh.empty())
        fmt::print("no pairs under policy {}; wrote header-only {}\n", cfg.pairs, path);
    else
        fmt::print("{} pairs, mean kappa_hat = {:.4f}, median = {:.4f}; wrote {}\n", kh.size(), mean(kh), median(kh), path);
    return kExitOk;
}

int cmd_global_bound(const ExperimentConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    const ManifoldOracle* oracle = p.cloud->oracle ? &*p.cloud->oracle : nullptr;
    std::optional<double> w_inf;
    if (oracle) w_inf = estimate_w_infty_empirical(*p.cloud, *oracle, 4 * p.cloud->n(), cfg.seed + 1).proxy;
    const auto rep = global_lower_bound(*p.rgg, *p.metric, oracle, std::nullopt, w_inf);
    nlohmann::json j;
    j["provenance"] = cfg.provenance().comment_line();
    j["config"] = cfg.canonical();
    j["K_G_emp"] = rep.K_G_emp;
    j["argmin"] = {rep.argmin.first, rep.argmin.second};
    j["adjacent_pairs"] = rep.adjacent_pairs;
    j["s_K"] = rep.s_K;
    j["K"] = optional_json(rep.K);
    j["C_M"] = rep.C_M;
    j["C_M_source"] = rep.C_M_estimated ? "estimated" : "default";
    j["floor_cap"] = rep.floor_cap;
    j["predicted_floor_leading"] = optional_json(rep.predicted_floor_leading);
    j["w_infty_proxy"] = optional_json(rep.w_infty_proxy);
    j["error_term_scale"] = optional_json(rep.error_term_scale);
    j["sign_agrees"] = rep.sign_agrees ? nlohmann::json(*rep.sign_agrees) : nlohmann::json();
    write_json(out_path(cfg, "global_bound.json"), j);
    write_config(cfg, "global-bound");
    fmt::print("K_G_emp = {:.6g} over {} adjacent pairs, s_K = {:.6g}, C_M = {:.4g} ({})\n", rep.K_G_emp,
               rep.adjacent_pairs, rep.s_K, rep.C_M, rep.C_M_estimated ? "estimated" : "default");
    return kExitOk;
}

int cmd_heat(const ExperimentConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    const ManifoldOracle* oracle = p.cloud->oracle ? &*p.cloud->oracle : nullptr;
    const HeatSystem sys(*p.rgg, *p.metric, oracle);
    const double K = global_lower_bound(*p.rgg, *p.metric, oracle).K_G_emp;
    // Initial condition: the last ambient coordinate, a smooth function on every oracle.
    const Vec u0 = p.cloud->points.row(p.cloud->dim() - 1).transpose();
    const auto rep = contraction_experiment(sys, u0, parse_list(cfg.t_grid), K);
    const auto dev = degree_deviation(sys);
    const std::string prov = cfg.provenance().comment_line();
    write_trajectory_csv(out_path(cfg, "trajectory.csv"), rep, prov);
    nlohmann::json j;
    j["provenance"] = prov;
    j["config"] = cfg.canonical();
    j["K_G_emp"] = K;
    j["rate"] = rep.rate;
    j["vacuous"] = rep.vacuous;
    j["degree_deviation"] = dev.max_dev;
    j["degree_deviation_over_eps3"] = dev.ratio_eps3;
    j["alpha"] = dev.alpha;
    j["diameter"] = rep.diameter;
    j["envelope_violations"] = rep.violations;
    j["max_mean_drift"] = rep.max_mean_drift;
    write_json(out_path(cfg, "heat.json"), j);
    write_config(cfg, "heat");
    fmt::print("rate = {:.6g}{}, envelope violations = {}, mean drift = {:.3g}\n", rep.rate,
               rep.vacuous ? " (envelopes vacuous)" : "", rep.violations, rep.max_mean_drift);
    return kExitOk;
}

int cmd_consistency_sweep(const ExperimentConfig& cfg) {
    const ManifoldOracle oracle = cfg.oracle();
    const FieldMode mode = field_mode_from_string(cfg.field);
    const std::string path = out_path(cfg, "sweep.csv");
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << cfg.provenance().comment_line()
        << "\nn,eps,window_records,mean_kappa_hat,median_error,mean_error,max_error,error_scale,fitted_constant\n";
    std::vector<double> medians;
    for (double nd : parse_list(cfg.schedule)) {
        const int n = static_cast<int>(nd);
        const double eps = cfg.eps_scale * std::pow(static_cast<double>(n), -1.0 / 8.0);
        const auto run = window_curvature_run(oracle, n, eps, cfg.c0, cfg.c1, mode, cfg.window_pairs, cfg.seed);
        const auto& s = run.summary;
        out << n << ',' << format_double(eps) << ',' << s.window_records << ',' << format_double(s.mean_kappa_hat) << ','
            << format_double(s.median_error) << ',' << format_double(s.mean_error) << ',' << format_double(s.max_error)
            << ',' << format_double(s.error_scale) << ',' << format_double(s.fitted_constant) << '\n';
        medians.push_back(s.median_error);
        fmt::print("n = {}, eps = {:.4f}: median error {:.4f} over {} pairs\n", n, eps, s.median_error, s.window_records);
    }
    write_config(cfg, "consistency-sweep");
    fmt::print("inversions in the median-error sequence: {}\n", count_inversions(medians));
    return kExitOk;
}

int cmd_fig2(const ExperimentConfig& cfg) {
    std::vector<int> sets;
    if (cfg.set == 0)
        sets = {1, 2, 3, 4};
    else
        sets = {cfg.set};
    for (int index : sets) {
        const Fig2Set set = fig2_set(index);
        const std::string prov = cfg.provenance().comment_line();
        const std::string csv = out_path(cfg, fmt::format("fig2_set{}.csv", index));
        std::ofstream out(csv);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + csv);
        out << prov << "\nseed,x,y,d_field,d_G,W1G,kappa,kappa_hat\n";
        Histogram pooled;
        for (int s = 0; s < cfg.seeds; ++s) {
            const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
            const auto recs = fig2_edges(set, seed);
            std::vector<double> k;
            for (const auto& r : recs) {
                k.push_back(r.kappa);
                out << seed << ',' << r.x << ',' << r.y << ',' << format_double(r.d_field) << ',' << format_double(r.d_G)
                    << ',' << format_double(r.W1G) << ',' << format_double(r.kappa) << ','
                    << format_double(r.kappa_hat) << '\n';
            }
            accumulate(pooled, histogram(k));
        }
        const std::string title = fmt::format("S2, n = {}, eps = {}, delta0 = {}, delta1 = {}, {} seeds", set.n, set.eps,
                                              set.delta0, set.delta1, cfg.seeds);
        const std::string svg = out_path(cfg, fmt::format("fig2_set{}.svg", index));
        std::ofstream(svg) << histogram_svg(pooled, title, prov);
        const int mb = pooled.modal_bin();
        fmt::print("set {}: {} edges, modal bin [{:.1f}, {:.1f}); wrote {} and {}\n", index, pooled.total(),
                   pooled.lo + mb * pooled.width(), pooled.lo + (mb + 1) * pooled.width(), csv, svg);
    }
    write_config(cfg, "fig2");
    return kExitOk;
}

namespace {

struct Criterion {
    std::string id;
    bool pass;
    std::string detail;
};

std::vector<double> column_values(const CsvTable& t, const std::string& name) {
    const int c = t.column(name);
    if (c < 0) throw Error(ErrorKind::Io, "missing column " + name);
    std::vector<double> v;
    for (const auto& row : t.rows) v.push_back(std::stod(row.at(c)));
    return v;
}

}  // namespace

int cmd_report(const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out);
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "no such directory " + cfg.out);
    std::vector<Criterion> crit;
    nlohmann::json inputs = nlohmann::json::object();

    if (fs::exists(dir / "fig2_set3.csv")) {
        const auto k = column_values(read_csv((dir / "fig2_set3.csv").string()), "kappa");
        const Histogram h = histogram(k);
        const double lo = h.lo + h.modal_bin() * h.width();
        const double frac = k.empty() ? 0.0
                                      : static_cast<double>(std::count_if(k.begin(), k.end(), [](double v) { return v >= 0.5; })) /
                                            static_cast<double>(k.size());
        crit.push_back({"3", lo >= 0.8 - 1e-12 && frac >= 0.8,
                        fmt::format("modal bin [{:.1f}, {:.1f}), fraction >= 0.5: {:.3f}", lo, lo + h.width(), frac)});
        inputs["fig2_set3.csv"] = k.size();
    }
    if (fs::exists(dir / "curvature.csv")) {
        const auto t = read_csv((dir / "curvature.csv").string());
        const auto kh = column_values(t, "kappa_hat");
        inputs["curvature.csv"] = kh.size();
        if (!kh.empty()) {
            const double frac = static_cast<double>(std::count_if(kh.begin(), kh.end(), [](double v) { return v > 0.0; })) /
                                static_cast<double>(kh.size());
            crit.push_back({"curvature", true,
                            fmt::format("{} pairs, mean kappa_hat {:.4f}, fraction positive {:.2f}", kh.size(), mean(kh),
                                        frac)});
        }
    }
    if (fs::exists(dir / "sweep.csv")) {
        const auto med = column_values(read_csv((dir / "sweep.csv").string()), "median_error");
        crit.push_back({"4c", trend_non_increasing(med, 1),
                        fmt::format("{} schedule points, {} inversions", med.size(), count_inversions(med))});
        inputs["sweep.csv"] = med.size();
    }
    if (fs::exists(dir / "trajectory.csv")) {
        const auto t = read_csv((dir / "trajectory.csv").string());
        const auto lip = column_values(t, "lip"), env = column_values(t, "envelope_lip");
        const auto dev = column_values(t, "linf_dev"), envl = column_values(t, "envelope_linf");
        const double slack = lip.empty() ? 0.0 : 1e-6 * lip.front();
        long long bad = 0;
        for (std::size_t k = 0; k < lip.size(); ++k) bad += (lip[k] > env[k] + slack) + (dev[k] > envl[k] + slack);
        crit.push_back({"7", bad == 0, fmt::format("{} grid times, {} envelope violations", lip.size(), bad)});
        inputs["trajectory.csv"] = lip.size();
    }

    nlohmann::json j;
    j["inputs"] = inputs;
    nlohmann::json cj = nlohmann::json::array();
    bool all = true;
    for (const auto& c : crit) {
        cj.push_back({{"criterion", c.id}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
        fmt::print("{} [{}] {}\n", c.pass ? "PASS" : "FAIL", c.id, c.detail);
    }
    j["criteria"] = cj;
    j["all_pass"] = all;
    write_json((dir / "summary.json").string(), j);
    if (crit.empty()) fmt::print("no recognised outputs in {}\n", cfg.out);
    return all ? kExitOk : kExitAcceptance;
}

}  // namespace ricci::cli
