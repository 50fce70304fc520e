#pragma once

#include "rtnrt/common.hpp"
#include "rtnrt/forward_solver.hpp"
#include "rtnrt/geometry.hpp"
#include "rtnrt/indicators.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace rtnrt {

enum class Method { rt, nrt, both };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::rt: return "rt";
        case Method::nrt: return "nrt";
        case Method::both: return "both";
    }
    return "?";
}

struct DiskFamily {
    double center_spacing = 0.1;
    std::vector<double> radii;
    std::vector<Vec2> centers; // overrides the grid when nonempty
};

struct PolygonFamily {
    std::vector<Vec2> template_vertices;
    double translation_spacing = 0.1;
    double translation_extent = 0.4; // grid over [-extent, extent]^2
    std::vector<double> scales{1.0};
    std::optional<std::vector<Vec2>> d0; // a priori convex polygon (NRT)
};

struct SweepPlan {
    std::variant<DiskFamily, PolygonFamily> family;
    double omega_margin = 0.02;      // clearance every test domain keeps to dOmega
    double margin_exclusion = 0.05;  // band excluded from accuracy accounting
    int domain_nodes = 64;           // nodes per generated test-domain curve
    int polygon_nodes_per_edge = 16;
    double polygon_grading = 3.0;
};

/// Deterministic enumeration of the plan's test domains (radius-major /
/// scale-major, then row-major over the center grid).
inline std::vector<TestDomain> generate_domains(const SweepPlan& plan,
                                                const BoundaryCurve& omega) {
    std::vector<TestDomain> out;
    const auto fits = [&](const BoundaryCurve& c) {
        return strictly_inside(c, omega) && distance_between(c, omega) > plan.omega_margin;
    };
    char id[160];
    if (const auto* disks = std::get_if<DiskFamily>(&plan.family)) {
        std::vector<Vec2> centers = disks->centers;
        if (centers.empty()) {
            const double s = disks->center_spacing;
            const int m = int(std::floor(1.0 / s));
            for (int iy = -m; iy <= m; ++iy)
                for (int ix = -m; ix <= m; ++ix) centers.emplace_back(ix * s, iy * s);
        }
        for (double r : disks->radii)
            for (const Vec2& c : centers) {
                if (c.norm() + r + plan.omega_margin >= 1.0) continue; // cheap pre-filter
                auto curve = make_circle(c, r, plan.domain_nodes);
                if (!fits(curve)) continue;
                std::snprintf(id, sizeof id, "d%04zu:disk c=(%.3f %.3f) r=%.3f", out.size(),
                              c.x(), c.y(), r);
                out.push_back({std::move(curve), id});
            }
    } else {
        const auto& poly = std::get<PolygonFamily>(plan.family);
        Vec2 centroid = Vec2::Zero();
        for (const Vec2& v : poly.template_vertices) centroid += v;
        centroid /= double(poly.template_vertices.size());
        const double s = poly.translation_spacing;
        const int m = int(std::floor(poly.translation_extent / s + 1e-12));
        for (double scale : poly.scales)
            for (int iy = -m; iy <= m; ++iy)
                for (int ix = -m; ix <= m; ++ix) {
                    const Vec2 t(ix * s, iy * s);
                    std::vector<Vec2> verts;
                    for (const Vec2& v : poly.template_vertices)
                        verts.push_back(centroid + scale * (v - centroid) + t);
                    BoundaryCurve curve;
                    try {
                        curve = make_convex_polygon(verts, plan.polygon_nodes_per_edge,
                                                    plan.polygon_grading);
                    } catch (const error&) {
                        continue;
                    }
                    if (!fits(curve)) continue;
                    std::snprintf(id, sizeof id, "p%04zu:polygon t=(%.3f %.3f) s=%.3f",
                                  out.size(), t.x(), t.y(), scale);
                    out.push_back({std::move(curve), id});
                }
    }
    return out;
}

struct SweepResult {
    TestDomain domain;
    std::optional<IndicatorResult> rt;
    std::optional<IndicatorResult> nrt;
    double duality_gap = std::numeric_limits<double>::quiet_NaN();
    std::string error; // nonempty when the domain evaluation failed

    bool positive(Method method) const {
        if (!error.empty()) return false;
        if (method == Method::nrt) return nrt && nrt->finite();
        return rt && rt->finite(); // rt and both use the range-test verdict
    }
};

inline SweepResult evaluate_domain(const CauchyData& data, const TestDomain& g, Method method,
                                   const IndicatorConfig& cfg) {
    SweepResult r;
    r.domain = g;
    try {
        require_test_domain(g, data.omega);
        const auto op = assemble_R(g.curve, data.omega);
        const auto sys = singular_system(op);
        if (method != Method::nrt) {
            const auto path = rt_path(op, sys, data.dnu_w, cfg.schedule, cfg.morozov_residual);
            r.rt = classify_path(path, cfg.slope_threshold,
                                 std::min<int>(cfg.window, int(path.norms.size())));
        }
        if (method != Method::rt) r.nrt = classify_nrt_ladder(op, sys, data.dnu_w, cfg);
        r.duality_gap = duality_gap(op, sys, data.dnu_w, cfg.schedule, cfg.truncation);
    } catch (const error& e) {
        r.error = e.what();
    }
    return r;
}

/// Evaluates every domain of the plan; embarrassingly parallel, results are
/// merged by domain index so the output is deterministic.
inline std::vector<SweepResult> sweep(const CauchyData& data, const SweepPlan& plan,
                                      Method method, const IndicatorConfig& cfg,
                                      int threads = 1) {
    const auto domains = generate_domains(plan, data.omega);
    std::vector<SweepResult> results(domains.size());
    if (domains.empty()) return results;
    const int workers = std::max(1, threads);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= domains.size()) return;
            results[i] = evaluate_domain(data, domains[i], method, cfg);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return results;
}

/// Boolean occupancy grid over the bounding box of the data curve; a pixel
/// is occupied when it lies inside Omega and in the closure of every
/// positive test domain.
struct ReconstructionMask {
    int nx = 0, ny = 0;
    Vec2 origin{0, 0}; // lower-left corner of pixel (0,0)
    double h = 0.0;
    std::vector<std::uint8_t> occupancy;
    int positive_count = 0;
    bool empty_intersection_warning = false;

    bool at(int ix, int iy) const { return occupancy[std::size_t(iy) * nx + ix] != 0; }
    Vec2 pixel_center(int ix, int iy) const {
        return origin + Vec2((ix + 0.5) * h, (iy + 0.5) * h);
    }
    std::size_t occupied_pixels() const {
        std::size_t n = 0;
        for (auto v : occupancy) n += v != 0;
        return n;
    }
};

inline ReconstructionMask intersect_positive(const std::vector<SweepResult>& results,
                                             const BoundaryCurve& omega, double h_grid,
                                             Method method = Method::rt) {
    if (!(h_grid > 0.0)) throw parameter_error("intersect_positive: grid resolution must be positive");
    ReconstructionMask mask;
    mask.h = h_grid;
    const double r = omega.kind == CurveKind::circle ? omega.radius : 1.0;
    const Vec2 c = omega.center;
    mask.origin = c - Vec2(r, r);
    mask.nx = int(std::ceil(2.0 * r / h_grid));
    mask.ny = mask.nx;
    mask.occupancy.assign(std::size_t(mask.nx) * mask.ny, 0);

    std::vector<const TestDomain*> positives;
    for (const auto& res : results)
        if (res.positive(method)) positives.push_back(&res.domain);
    mask.positive_count = int(positives.size());
    mask.empty_intersection_warning = positives.empty();

    for (int iy = 0; iy < mask.ny; ++iy)
        for (int ix = 0; ix < mask.nx; ++ix) {
            const Vec2 p = mask.pixel_center(ix, iy);
            if (!contains(omega, p)) continue;
            bool in_all = true;
            for (const TestDomain* g : positives)
                if (!contains(*g, p)) {
                    in_all = false;
                    break;
                }
            mask.occupancy[std::size_t(iy) * mask.nx + ix] = in_all ? 1 : 0;
        }
    return mask;
}

inline ReconstructionMask rasterize(const BoundaryCurve& shape, const ReconstructionMask& like) {
    ReconstructionMask m = like;
    m.positive_count = 0;
    m.empty_intersection_warning = false;
    for (int iy = 0; iy < m.ny; ++iy)
        for (int ix = 0; ix < m.nx; ++ix)
            m.occupancy[std::size_t(iy) * m.nx + ix] =
                contains(shape, m.pixel_center(ix, iy)) ? 1 : 0;
    return m;
}

/// Symmetric Hausdorff distance between the mask and the rasterization of
/// the true obstacle on the same grid, over pixel centers.
inline double hausdorff_distance(const ReconstructionMask& mask, const TestDomain& true_d) {
    const ReconstructionMask truth = rasterize(true_d.curve, mask);
    std::vector<Vec2> a, b;
    for (int iy = 0; iy < mask.ny; ++iy)
        for (int ix = 0; ix < mask.nx; ++ix) {
            if (mask.at(ix, iy)) a.push_back(mask.pixel_center(ix, iy));
            if (truth.at(ix, iy)) b.push_back(truth.pixel_center(ix, iy));
        }
    if (a.empty()) throw metric_error("hausdorff_distance: empty mask");
    if (b.empty()) throw metric_error("hausdorff_distance: true obstacle rasterizes to nothing");
    const auto directed = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
        double worst = 0.0;
        for (const Vec2& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec2& q : to) best = std::min(best, (p - q).squaredNorm());
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

struct PolygonSweepOutput {
    std::vector<SweepResult> results;
    ReconstructionMask mask;
};

/// Convex-polygon sampling mode; when the no-response test participates, an
/// a priori convex polygon D0 is required and every generated domain must
/// stay inside it.
inline PolygonSweepOutput polygon_mode_sweep(const CauchyData& data, const PolygonFamily& family,
                                             Method method, const SweepPlan& base_plan,
                                             const IndicatorConfig& cfg, double h_grid,
                                             int threads = 1) {
    SweepPlan plan = base_plan;
    plan.family = family;
    if (method != Method::rt) {
        if (!family.d0)
            throw plan_error("polygon_mode_sweep: the no-response test needs the a priori polygon D0");
        const auto d0_curve = make_convex_polygon(*family.d0, 4, 1.0);
        for (const auto& g : generate_domains(plan, data.omega))
            for (const Vec2& v : g.curve.vertices)
                if (!contains(d0_curve, v))
                    throw plan_error("polygon_mode_sweep: domain '" + g.id +
                                     "' leaves the a priori polygon D0");
    }
    PolygonSweepOutput out;
    out.results = sweep(data, plan, method, cfg, threads);
    out.mask = intersect_positive(out.results, data.omega, h_grid,
                                  method == Method::nrt ? Method::nrt : Method::rt);
    return out;
}

// ---- output formats ----

inline void write_indicators_csv(const std::vector<SweepResult>& results, std::ostream& os) {
    os << "domain_id,kind,center_x,center_y,size,rt_value,rt_slope,nrt_value,nrt_slope,"
          "classification_rt,classification_nrt,duality_gap,error\n";
    os << std::setprecision(17);
    const auto value_or_inf = [](const std::optional<IndicatorResult>& r) {
        if (!r) return std::string();
        return std::isinf(r->value) ? std::string("inf") : std::to_string(r->value);
    };
    for (const auto& r : results) {
        const auto& c = r.domain.curve;
        const double size = c.kind == CurveKind::circle ? c.radius : diameter(c);
        os << r.domain.id << ',' << to_string(c.kind) << ',' << c.center.x() << ','
           << c.center.y() << ',' << size << ',';
        os << value_or_inf(r.rt) << ',' << (r.rt ? std::to_string(r.rt->slope) : "") << ',';
        os << value_or_inf(r.nrt) << ',' << (r.nrt ? std::to_string(r.nrt->slope) : "") << ',';
        os << (r.rt ? to_string(r.rt->classification) : "") << ','
           << (r.nrt ? to_string(r.nrt->classification) : "") << ',';
        if (std::isnan(r.duality_gap)) os << "";
        else os << r.duality_gap;
        os << ',' << r.error << '\n';
    }
}

inline void write_mask_pgm(const ReconstructionMask& mask, std::ostream& os) {
    os << "P2\n" << mask.nx << ' ' << mask.ny << "\n255\n";
    // top row first
    for (int iy = mask.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < mask.nx; ++ix) {
            os << (mask.at(ix, iy) ? 255 : 0);
            os << (ix + 1 == mask.nx ? '\n' : ' ');
        }
    }
}

inline nlohmann::json mask_sidecar(const ReconstructionMask& mask) {
    return nlohmann::json{{"origin", {mask.origin.x(), mask.origin.y()}},
                          {"spacing", mask.h},
                          {"nx", mask.nx},
                          {"ny", mask.ny},
                          {"row_order", "top_to_bottom"},
                          {"positive_count", mask.positive_count},
                          {"empty_intersection_warning", mask.empty_intersection_warning}};
}

} // namespace rtnrt
