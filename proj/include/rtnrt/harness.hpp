#pragma once

#include "rtnrt/common.hpp"
#include "rtnrt/forward_solver.hpp"
#include "rtnrt/geometry.hpp"
#include "rtnrt/indicators.hpp"
#include "rtnrt/reconstruction.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rtnrt {

using nlohmann::json;

struct CurveSpec {
    std::string kind = "circle"; // circle | ellipse | polygon
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    double semi_a = 0.0, semi_b = 0.0, rotation = 0.0;
    std::vector<Vec2> vertices;
    int n = 256;
    int nodes_per_edge = 48;
    double grading = 3.0;

    BoundaryCurve build() const {
        if (kind == "circle") return make_circle(center, radius, n);
        if (kind == "ellipse") return make_ellipse(center, semi_a, semi_b, rotation, n);
        if (kind == "polygon") return make_convex_polygon(vertices, nodes_per_edge, grading);
        throw parameter_error("unknown curve kind '" + kind + "'");
    }
};

struct ExcitationSpec {
    std::string preset;                                    // cos_theta | entire
    std::map<int, std::pair<double, double>> fourier;      // used when preset empty

    std::map<int, std::pair<double, double>> coefficients(int max_mode = 24) const {
        if (preset.empty()) return fourier;
        if (preset == "cos_theta") return {{1, {1.0, 0.0}}};
        if (preset == "entire") {
            // e^{cos t} cos(sin t) = sum_{n>=0} cos(n t)/n!
            std::map<int, std::pair<double, double>> c;
            double fact = 1.0;
            for (int n = 0; n <= max_mode; ++n) {
                if (n > 0) fact *= double(n);
                c[n] = {1.0 / fact, 0.0};
            }
            return c;
        }
        throw parameter_error("unknown excitation preset '" + preset + "'");
    }

    VecX samples(const BoundaryCurve& omega) const {
        const auto coeffs = coefficients();
        VecX f = VecX::Zero(omega.size());
        for (std::size_t j = 0; j < omega.size(); ++j)
            for (const auto& [n, c] : coeffs)
                f(j) += c.first * std::cos(n * omega.params[j]) +
                        c.second * std::sin(n * omega.params[j]);
        return f;
    }
};

struct SweepSpec {
    std::string family = "disks"; // disks | polygons
    // disks
    double center_spacing = 0.1;
    std::vector<double> radii;
    std::vector<Vec2> centers;
    // polygons
    std::vector<Vec2> template_vertices;
    double translation_spacing = 0.1;
    double translation_extent = 0.2;
    std::vector<double> scales{1.0};
    std::optional<std::vector<Vec2>> d0;
    // shared
    int domain_nodes = 64;
    int polygon_nodes_per_edge = 16;
    double polygon_grading = 3.0;
    double omega_margin = 0.02;
    double margin_exclusion = 0.05;

    SweepPlan plan() const {
        SweepPlan p;
        if (family == "disks") {
            DiskFamily f;
            f.center_spacing = center_spacing;
            f.radii = radii;
            f.centers = centers;
            p.family = f;
        } else if (family == "polygons") {
            PolygonFamily f;
            f.template_vertices = template_vertices;
            f.translation_spacing = translation_spacing;
            f.translation_extent = translation_extent;
            f.scales = scales;
            f.d0 = d0;
            p.family = f;
        } else {
            throw parameter_error("unknown sweep family '" + family + "'");
        }
        p.domain_nodes = domain_nodes;
        p.polygon_nodes_per_edge = polygon_nodes_per_edge;
        p.polygon_grading = polygon_grading;
        p.omega_margin = omega_margin;
        p.margin_exclusion = margin_exclusion;
        return p;
    }
};

struct ScenarioConfig {
    CurveSpec omega;
    CurveSpec obstacle;
    ExcitationSpec excitation;
    std::string data_source = "solver"; // solver | oracle
    int solver_n = 0;                   // overrides omega.n when > 0
    double noise_level = 0.0;
    Method method = Method::both;
    SweepSpec sweep;
    Schedule schedule;
    double truncation = 1e-12;
    double slope_threshold = 0.05;
    double grid_resolution = 0.01;
    std::set<std::string> outputs{"indicators_csv", "mask_pgm", "duality_report_json",
                                  "cauchy_csv"};
    std::uint64_t seed = 1;

    IndicatorConfig indicator_config() const {
        IndicatorConfig cfg;
        cfg.schedule = schedule;
        cfg.truncation = truncation;
        cfg.slope_threshold = slope_threshold;
        return cfg;
    }
};

// ---- JSON (de)serialization of the config schema ----

namespace detail {

inline Vec2 vec2_from(const json& j) { return Vec2(j.at(0).get<double>(), j.at(1).get<double>()); }

inline std::vector<Vec2> points_from(const json& j) {
    std::vector<Vec2> pts;
    for (const auto& p : j) pts.push_back(vec2_from(p));
    return pts;
}

inline CurveSpec curve_spec_from(const json& j) {
    CurveSpec s;
    s.kind = j.value("kind", "circle");
    if (j.contains("center")) s.center = vec2_from(j["center"]);
    s.radius = j.value("radius", 1.0);
    if (j.contains("semi_axes")) {
        s.semi_a = j["semi_axes"].at(0).get<double>();
        s.semi_b = j["semi_axes"].at(1).get<double>();
    }
    s.rotation = j.value("rotation", 0.0);
    if (j.contains("vertices")) s.vertices = points_from(j["vertices"]);
    s.n = j.value("n", 256);
    s.nodes_per_edge = j.value("nodes_per_edge", 48);
    s.grading = j.value("grading", 3.0);
    return s;
}

} // namespace detail

inline ScenarioConfig config_from_json(const json& j) {
    ScenarioConfig c;
    if (j.contains("omega")) c.omega = detail::curve_spec_from(j["omega"]);
    if (j.contains("obstacle")) c.obstacle = detail::curve_spec_from(j["obstacle"]);
    if (j.contains("excitation")) {
        const auto& e = j["excitation"];
        if (e.contains("preset")) c.excitation.preset = e["preset"].get<std::string>();
        if (e.contains("fourier")) {
            for (const auto& [key, val] : e["fourier"].value("cos", json::object()).items())
                c.excitation.fourier[std::stoi(key)].first = val.get<double>();
            for (const auto& [key, val] : e["fourier"].value("sin", json::object()).items())
                c.excitation.fourier[std::stoi(key)].second = val.get<double>();
        }
    }
    if (j.contains("data_source")) {
        const auto& d = j["data_source"];
        c.data_source = d.value("type", "solver");
        c.solver_n = d.value("n", 0);
    }
    c.noise_level = j.value("noise_level", 0.0);
    const std::string m = j.value("method", "both");
    c.method = m == "rt" ? Method::rt : m == "nrt" ? Method::nrt : Method::both;
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        c.sweep.family = s.value("family", "disks");
        c.sweep.center_spacing = s.value("center_spacing", 0.1);
        if (s.contains("radii")) c.sweep.radii = s["radii"].get<std::vector<double>>();
        if (s.contains("centers")) c.sweep.centers = detail::points_from(s["centers"]);
        if (s.contains("template")) c.sweep.template_vertices = detail::points_from(s["template"]);
        c.sweep.translation_spacing = s.value("translation_spacing", 0.1);
        c.sweep.translation_extent = s.value("translation_extent", 0.2);
        if (s.contains("scales")) c.sweep.scales = s["scales"].get<std::vector<double>>();
        if (s.contains("d0")) c.sweep.d0 = detail::points_from(s["d0"]);
        c.sweep.domain_nodes = s.value("nodes", 64);
        c.sweep.polygon_nodes_per_edge = s.value("nodes_per_edge", 16);
        c.sweep.polygon_grading = s.value("grading", 3.0);
        c.sweep.omega_margin = s.value("omega_margin", 0.02);
        c.sweep.margin_exclusion = s.value("margin_exclusion", 0.05);
    }
    if (j.contains("schedule")) {
        c.schedule.alpha0 = j["schedule"].value("alpha0", 1e-2);
        c.schedule.q = j["schedule"].value("q", 0.5);
        c.schedule.steps = j["schedule"].value("K", 40);
    }
    c.truncation = j.value("truncation", 1e-12);
    c.slope_threshold = j.value("slope_threshold", 0.05);
    c.grid_resolution = j.value("grid_resolution", 0.01);
    if (j.contains("outputs"))
        c.outputs = std::set<std::string>(j["outputs"].begin(), j["outputs"].end());
    c.seed = j.value("seed", std::uint64_t(1));
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parameter_error("cannot open config file '" + path + "'");
    json j;
    is >> j;
    return config_from_json(j);
}

// ---- presets: the four acceptance scenarios ----

inline json preset_config(const std::string& name) {
    json j;
    j["omega"] = {{"kind", "circle"}, {"center", {0.0, 0.0}}, {"radius", 1.0}, {"n", 256}};
    j["excitation"] = {{"preset", "cos_theta"}};
    j["schedule"] = {{"alpha0", 1e-2}, {"q", 0.5}, {"K", 40}};
    j["truncation"] = 1e-12;
    j["slope_threshold"] = 0.05;
    j["grid_resolution"] = 0.01;
    j["outputs"] = {"indicators_csv", "mask_pgm", "duality_report_json", "cauchy_csv"};
    j["seed"] = 1;
    if (name == "concentric_disks") {
        j["obstacle"] = {{"kind", "circle"}, {"center", {0.0, 0.0}}, {"radius", 0.3}, {"n", 192}};
        j["data_source"] = {{"type", "oracle"}};
        j["method"] = "both";
        std::vector<double> radii{0.20, 0.25};
        for (double r = 0.35; r < 0.901; r += 0.05) radii.push_back(std::round(r * 100) / 100);
        j["sweep"] = {{"family", "disks"},
                      {"centers", {{0.0, 0.0}}},
                      {"radii", radii},
                      {"nodes", 96},
                      {"margin_exclusion", 0.05}};
    } else if (name == "offset_disk") {
        j["obstacle"] = {{"kind", "circle"}, {"center", {0.15, 0.0}}, {"radius", 0.25}, {"n", 144}};
        j["omega"]["n"] = 200;
        j["data_source"] = {{"type", "solver"}};
        j["method"] = "both";
        std::vector<double> radii;
        for (double r = 0.05; r < 0.601; r += 0.05) radii.push_back(std::round(r * 100) / 100);
        j["sweep"] = {{"family", "disks"},
                      {"center_spacing", 0.1},
                      {"radii", radii},
                      {"nodes", 64}};
    } else if (name == "irrational_triangle") {
        j["obstacle"] = {{"kind", "polygon"},
                         {"vertices", {{-0.45, -0.28}, {0.48, -0.22}, {0.08, 0.42}}},
                         {"nodes_per_edge", 48},
                         {"grading", 3.0}};
        j["data_source"] = {{"type", "solver"}};
        j["method"] = "rt";
        j["sweep"] = {{"family", "polygons"},
                      {"template", {{-0.45, -0.28}, {0.48, -0.22}, {0.08, 0.42}}},
                      {"translation_spacing", 0.1},
                      {"translation_extent", 0.1},
                      {"scales", {1.0, 1.15, 1.3}},
                      {"nodes_per_edge", 16}};
    } else if (name == "distance_triangle") {
        j["obstacle"] = {{"kind", "polygon"},
                         {"vertices", {{-0.1, -0.1}, {0.2, -0.1}, {-0.1, 0.2}}},
                         {"nodes_per_edge", 48},
                         {"grading", 3.0}};
        j["data_source"] = {{"type", "solver"}};
        j["method"] = "both";
        j["sweep"] = {{"family", "polygons"},
                      {"template", {{-0.1, -0.1}, {0.2, -0.1}, {-0.1, 0.2}}},
                      {"translation_spacing", 0.1},
                      {"translation_extent", 0.1},
                      {"scales", {1.0, 1.15, 1.3}},
                      {"d0", {{-0.55, -0.55}, {0.55, -0.55}, {0.55, 0.55}, {-0.55, 0.55}}},
                      {"nodes_per_edge", 16}};
    } else {
        throw parameter_error("unknown preset '" + name + "'");
    }
    return j;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"concentric_disks", "offset_disk",
                                                "irrational_triangle", "distance_triangle"};
    return names;
}

// ---- validation ----

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const ScenarioConfig& cfg) {
    ValidationReport rep;
    BoundaryCurve omega, obstacle;
    try {
        omega = cfg.omega.build();
    } catch (const error& e) {
        rep.violations.push_back(std::string("omega: ") + e.what());
        return rep;
    }
    if (!omega.is_unit_circle(1e-10))
        rep.violations.push_back(
            "omega must be the unit circle centered at the origin; rescale the scenario");
    try {
        obstacle = cfg.obstacle.build();
    } catch (const error& e) {
        rep.violations.push_back(std::string("obstacle: ") + e.what());
        return rep;
    }
    if (!strictly_inside(obstacle, omega))
        rep.violations.push_back("obstacle is not strictly inside omega");

    try {
        const VecX f = cfg.excitation.samples(omega);
        if (f.cwiseAbs().maxCoeff() == 0.0)
            rep.violations.push_back("excitation is identically zero");
    } catch (const error& e) {
        rep.violations.push_back(std::string("excitation: ") + e.what());
    }

    if (cfg.data_source == "oracle") {
        if (obstacle.kind != CurveKind::circle || obstacle.center.norm() > 1e-14)
            rep.violations.push_back(
                "oracle data requires a concentric circular obstacle centered at the origin");
    } else if (cfg.data_source != "solver") {
        rep.violations.push_back("data_source must be 'solver' or 'oracle'");
    }

    if (!(cfg.schedule.alpha0 > 0.0) || !(cfg.schedule.q > 0.0 && cfg.schedule.q < 1.0) ||
        cfg.schedule.steps < 10)
        rep.violations.push_back("schedule needs alpha0 > 0, q in (0,1), K >= 10");
    if (!(cfg.truncation > 0.0) || cfg.truncation >= 1.0)
        rep.violations.push_back("truncation must lie in (0, 1)");
    if (!(cfg.grid_resolution > 0.0))
        rep.violations.push_back("grid_resolution must be positive");
    if (cfg.noise_level < 0.0) rep.violations.push_back("noise_level must be >= 0");

    // polygon scenario hypotheses (warnings, not errors)
    if (obstacle.kind == CurveKind::convex_polygon) {
        const bool dist_ok = check_distance_property({obstacle, "obstacle"}, omega);
        bool all_angles_suspect = true;
        for (double a : interior_angles(obstacle))
            if (!possibly_rational_angle(a)) all_angles_suspect = false;
        if (!dist_ok && all_angles_suspect)
            rep.warnings.push_back(
                "polygon obstacle fails the distance property and every corner angle is "
                "possibly rational with small denominator; the reconstruction hypotheses "
                "are not certified");
    }

    if (cfg.sweep.family == "polygons" && cfg.method != Method::rt && !cfg.sweep.d0)
        rep.violations.push_back("polygon sweep with the no-response test requires the a "
                                 "priori polygon d0");

    // inverse-crime guard: solver data grid vs inversion grids
    if (cfg.data_source == "solver") {
        const int n_data = cfg.solver_n > 0 ? cfg.solver_n : cfg.omega.n;
        const int n_inv = cfg.sweep.family == "disks"
                              ? cfg.sweep.domain_nodes
                              : cfg.sweep.polygon_nodes_per_edge *
                                    int(cfg.sweep.template_vertices.size());
        if (n_inv > 0 && n_data % n_inv == 0)
            rep.warnings.push_back("inverse-crime guard: solver node count " +
                                   std::to_string(n_data) + " is a multiple of the test-domain "
                                   "node count " + std::to_string(n_inv));
    }
    return rep;
}

// ---- scenario run ----

struct RunOutputs {
    int exit_code = 0;
    std::vector<SweepResult> results;
    std::optional<ReconstructionMask> mask;
    CauchyData data;
    std::vector<std::string> files;
};

namespace detail {

inline CauchyData manufacture_data(const ScenarioConfig& cfg, const BoundaryCurve& omega,
                                   const BoundaryCurve& obstacle,
                                   std::optional<AnnularSolution>* solution_out) {
    if (cfg.data_source == "oracle") {
        const ConcentricAnnulusOracle oracle(1.0, obstacle.radius,
                                             cfg.excitation.coefficients());
        return oracle.cauchy_data(omega);
    }
    auto solution = solve_annular(omega, obstacle, cfg.excitation.samples(omega));
    CauchyData data = solution.data;
    if (solution_out) *solution_out = std::move(solution);
    return data;
}

inline json duality_report(const ScenarioConfig& cfg, const std::vector<SweepResult>& results,
                           const CauchyData& data, const BoundaryCurve& obstacle,
                           const std::optional<AnnularSolution>& solution) {
    json rep;
    rep["method"] = to_string(cfg.method);
    rep["omega"] = to_json(data.omega);
    rep["obstacle"] = to_json(obstacle);
    rep["generator"] = data.generator;
    json rows = json::array();
    int agree = 0, compared = 0;
    for (const auto& r : results) {
        json row;
        row["domain_id"] = r.domain.id;
        if (r.rt) {
            row["rt_classification"] = to_string(r.rt->classification);
            row["rt_value"] = std::isinf(r.rt->value) ? json("inf") : json(r.rt->value);
            row["rt_slope"] = r.rt->slope;
        }
        if (r.nrt) {
            row["nrt_classification"] = to_string(r.nrt->classification);
            row["nrt_value"] = std::isinf(r.nrt->value) ? json("inf") : json(r.nrt->value);
            row["nrt_slope"] = r.nrt->slope;
        }
        if (!std::isnan(r.duality_gap)) row["duality_gap"] = r.duality_gap;
        if (!r.error.empty()) row["error"] = r.error;
        if (r.rt && r.nrt) {
            ++compared;
            if (r.rt->classification == r.nrt->classification) ++agree;
        }
        rows.push_back(row);
    }
    rep["domains"] = rows;
    rep["classification_agreement"] = {{"compared", compared}, {"equal", agree}};

    // Green-identity check when the ground truth traces are available
    if (obstacle.kind == CurveKind::circle) {
        VecX dnu_w_on_d(obstacle.size()), v_on_d(obstacle.size());
        bool have = false;
        if (cfg.data_source == "oracle") {
            const ConcentricAnnulusOracle oracle(1.0, obstacle.radius,
                                                 cfg.excitation.coefficients());
            for (std::size_t i = 0; i < obstacle.size(); ++i) {
                dnu_w_on_d(i) = oracle.dnu_w_on_obstacle_at(obstacle.params[i]);
                v_on_d(i) = oracle.v_value(obstacle.nodes[i]);
            }
            have = true;
        } else if (solution && solution->dnu_u_on_obstacle.size() > 0) {
            dnu_w_on_d = solution->dnu_u_on_obstacle - solution->dnu_v_on_obstacle;
            v_on_d = solution->v_on_obstacle;
            have = true;
        }
        if (have) {
            std::mt19937_64 gen(cfg.seed);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            double worst = 0.0;
            int count = 0;
            const std::size_t n = data.omega.size();
            std::vector<VecX> densities;
            for (int mode = 1; mode <= 3; ++mode) {
                VecX phi(n);
                for (std::size_t j = 0; j < n; ++j)
                    phi(j) = mode == 2 ? std::sin(data.omega.params[j])
                                       : std::cos(mode == 1 ? data.omega.params[j]
                                                            : 2.0 * data.omega.params[j]);
                densities.push_back(phi);
            }
            for (int trial = 0; trial < 2; ++trial) {
                VecX phi = VecX::Zero(n);
                for (int k = 0; k <= 8; ++k) {
                    const double a = u(gen), b = u(gen);
                    for (std::size_t j = 0; j < n; ++j)
                        phi(j) += a * std::cos(k * data.omega.params[j]) +
                                  b * std::sin(k * data.omega.params[j]);
                }
                densities.push_back(phi);
            }
            for (const VecX& phi : densities) {
                worst = std::max(worst,
                                 green_identity_check(data, obstacle, phi, dnu_w_on_d, v_on_d));
                ++count;
            }
            rep["green_identity"] = {{"densities", count}, {"max_relative_difference", worst}};
        }
    }
    return rep;
}

} // namespace detail

/// Runs a scenario end to end and writes the requested outputs into out_dir.
/// Exit codes: 0 success, 2 validation failure, 3 numerical failure.
inline RunOutputs run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                               int threads = 1, bool verbose = false,
                               std::ostream* log = nullptr) {
    namespace fs = std::filesystem;
    RunOutputs out;
    fs::create_directories(out_dir);
    const auto emit = [&](const std::string& name) { return out_dir + "/" + name; };

    const ValidationReport rep = validate(cfg);
    if (!rep.ok()) {
        json err;
        err["violations"] = rep.violations;
        err["warnings"] = rep.warnings;
        std::ofstream os(emit("validation_errors.json"));
        os << err.dump(2) << '\n';
        out.exit_code = 2;
        return out;
    }
    if (verbose && log)
        for (const auto& w : rep.warnings) *log << "warning: " << w << '\n';

    try {
        const BoundaryCurve omega =
            cfg.data_source == "solver" && cfg.solver_n > 0
                ? make_circle(cfg.omega.center, cfg.omega.radius, cfg.solver_n)
                : cfg.omega.build();
        const BoundaryCurve obstacle = cfg.obstacle.build();

        std::optional<AnnularSolution> solution;
        CauchyData data = detail::manufacture_data(cfg, omega, obstacle, &solution);

        IndicatorConfig icfg = cfg.indicator_config();
        if (cfg.noise_level > 0.0) {
            const VecX clean = data.dnu_w;
            apply_gaussian_noise(data, cfg.noise_level, cfg.seed);
            icfg.morozov_residual =
                morozov_level(make_space(data.omega, -0.5), clean, data.dnu_w);
        }

        if (cfg.outputs.count("cauchy_csv")) {
            write_cauchy_csv(data, emit("cauchy.csv"), to_json(obstacle).dump());
            out.files.push_back(emit("cauchy.csv"));
        }

        const SweepPlan plan = cfg.sweep.plan();
        if (cfg.sweep.family == "polygons") {
            const auto& fam = std::get<PolygonFamily>(plan.family);
            auto poly_out = polygon_mode_sweep(data, fam, cfg.method, plan, icfg,
                                               cfg.grid_resolution, threads);
            out.results = std::move(poly_out.results);
            out.mask = std::move(poly_out.mask);
        } else {
            out.results = sweep(data, plan, cfg.method, icfg, threads);
            out.mask = intersect_positive(out.results, data.omega, cfg.grid_resolution,
                                          cfg.method == Method::nrt ? Method::nrt : Method::rt);
        }

        if (cfg.outputs.count("indicators_csv")) {
            std::ofstream os(emit("indicators.csv"));
            write_indicators_csv(out.results, os);
            out.files.push_back(emit("indicators.csv"));
        }
        if (cfg.outputs.count("mask_pgm")) {
            std::ofstream os(emit("mask.pgm"));
            write_mask_pgm(*out.mask, os);
            out.files.push_back(emit("mask.pgm"));
            std::ofstream ms(emit("mask_meta.json"));
            ms << mask_sidecar(*out.mask).dump(2) << '\n';
            out.files.push_back(emit("mask_meta.json"));
        }
        if (cfg.outputs.count("duality_report_json")) {
            std::ofstream os(emit("duality_report.json"));
            os << detail::duality_report(cfg, out.results, data, obstacle, solution).dump(2)
               << '\n';
            out.files.push_back(emit("duality_report.json"));
        }
        out.data = std::move(data);
    } catch (const error& e) {
        json err;
        err["error"] = e.what();
        std::ofstream os(emit("run_error.json"));
        os << err.dump(2) << '\n';
        out.exit_code = 3;
        return out;
    }
    return out;
}

/// Emits only the oracle Cauchy data for the configured scenario.
inline int run_oracle(const ScenarioConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const ValidationReport rep = validate(cfg);
    if (!rep.ok() || cfg.data_source != "oracle") return 2;
    fs::create_directories(out_dir);
    const BoundaryCurve omega = cfg.omega.build();
    const BoundaryCurve obstacle = cfg.obstacle.build();
    const ConcentricAnnulusOracle oracle(1.0, obstacle.radius, cfg.excitation.coefficients());
    write_cauchy_csv(oracle.cauchy_data(omega), out_dir + "/cauchy.csv",
                     to_json(obstacle).dump());
    return 0;
}

} // namespace rtnrt
