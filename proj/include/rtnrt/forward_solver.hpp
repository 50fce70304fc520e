#pragma once

#include "rtnrt/boundary_operators.hpp"
#include "rtnrt/common.hpp"
#include "rtnrt/geometry.hpp"
#include "rtnrt/green_kernels.hpp"

#include <Eigen/LU>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace rtnrt {

/// Paired Dirichlet/Neumann traces on the data curve, plus the obstacle-free
/// flux and the derived w-data dnu_w = dnu_u - dnu_v.
struct CauchyData {
    BoundaryCurve omega;
    VecX f;
    VecX dnu_u;
    VecX dnu_v;
    VecX dnu_w;
    std::string generator;              // "oracle" or "solver N=..."
    double condition_estimate = 0.0;    // forward system, when solved
    std::vector<std::string> warnings;

    std::size_t size() const { return omega.size(); }

    double flux_dnu_v() const {
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i) s += omega.weights[i] * dnu_v(i);
        return s;
    }
};

inline CauchyData make_cauchy_data(BoundaryCurve omega, VecX f, VecX dnu_u, VecX dnu_v,
                                   std::string generator) {
    const auto n = Eigen::Index(omega.size());
    if (f.size() != n || dnu_u.size() != n || dnu_v.size() != n)
        throw parameter_error("make_cauchy_data: trace lengths must match the node count");
    CauchyData d;
    d.omega = std::move(omega);
    d.f = std::move(f);
    d.dnu_u = std::move(dnu_u);
    d.dnu_v = std::move(dnu_v);
    d.dnu_w = d.dnu_u - d.dnu_v;
    d.generator = std::move(generator);
    const double flux = d.flux_dnu_v();
    if (std::abs(flux) > 1e-8 * std::max(1.0, d.dnu_v.cwiseAbs().maxCoeff()))
        d.warnings.push_back("dnu_v has nonzero net flux " + std::to_string(flux));
    if (d.f.cwiseAbs().maxCoeff() == 0.0)
        d.warnings.push_back("excitation f is identically zero");
    return d;
}

// ---- Fourier machinery on uniform circle grids ----

namespace detail {

struct CircleModes {
    VecX cosc; // k = 0 .. n/2
    VecX sinc; // k = 1 .. n/2-1 stored at same index (index 0 and n/2 unused)
};

inline CircleModes circle_analyze(const BoundaryCurve& circle, const VecX& values) {
    if (circle.kind != CurveKind::circle)
        throw parameter_error("circle_analyze: needs a circle curve");
    const std::size_t n = circle.size();
    CircleModes m;
    m.cosc = VecX::Zero(n / 2 + 1);
    m.sinc = VecX::Zero(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        double c = 0.0, s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            c += values(j) * std::cos(double(k) * circle.params[j]);
            s += values(j) * std::sin(double(k) * circle.params[j]);
        }
        const double scale = (k == 0 || 2 * k == n) ? 1.0 / double(n) : 2.0 / double(n);
        m.cosc(k) = scale * c;
        m.sinc(k) = scale * s;
    }
    return m;
}

inline VecX circle_synthesize(const BoundaryCurve& circle, const CircleModes& m) {
    const std::size_t n = circle.size();
    VecX v = VecX::Zero(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k <= n / 2; ++k)
            s += m.cosc(k) * std::cos(double(k) * circle.params[j]) +
                 m.sinc(k) * std::sin(double(k) * circle.params[j]);
        v(j) = s;
    }
    return v;
}

// Dirichlet-to-Neumann map of the disk bounded by the circle: symbol |k|/a
inline VecX circle_dtn(const BoundaryCurve& circle, const VecX& f) {
    CircleModes m = circle_analyze(circle, f);
    for (Eigen::Index k = 0; k < m.cosc.size(); ++k) {
        m.cosc(k) *= double(k) / circle.radius;
        m.sinc(k) *= double(k) / circle.radius;
    }
    return circle_synthesize(circle, m);
}

// normal derivative of the double-layer potential on its own circle
// (both sides, Lyapunov-Tauber): symbol -|k|/(2a)
inline VecX circle_hypersingular_dl(const BoundaryCurve& circle, const VecX& psi) {
    CircleModes m = circle_analyze(circle, psi);
    for (Eigen::Index k = 0; k < m.cosc.size(); ++k) {
        m.cosc(k) *= -double(k) / (2.0 * circle.radius);
        m.sinc(k) *= -double(k) / (2.0 * circle.radius);
    }
    return circle_synthesize(circle, m);
}

// ---- fundamental-solution layer blocks ----

// single-layer trace matrix on the source curve itself (log-singular)
inline MatX sl_G0_trace(const BoundaryCurve& c) {
    const std::size_t n = c.size();
    MatX a(n, n);
    if (c.kind == CurveKind::convex_polygon) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) = panel_log_integral(c.nodes[i], c.panel_a[j], c.panel_b[j]);
        return a;
    }
    const auto km = km_log_weights(n);
    const double wtrap = 2.0 * pi / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double speed_i = c.weights[i] / wtrap;
        for (std::size_t j = 0; j < n; ++j) {
            const double speed_j = c.weights[j] / wtrap;
            double rs;
            if (i == j) {
                rs = speed_i;
            } else {
                const double dt = c.params[i] - c.params[j];
                rs = (c.nodes[i] - c.nodes[j]).norm() / (2.0 * std::abs(std::sin(0.5 * dt)));
            }
            a(i, j) = -km[(i >= j) ? i - j : j - i] / (4.0 * pi) * speed_j -
                      std::log(rs) / (2.0 * pi) * wtrap * speed_j;
        }
    }
    return a;
}

// double-layer principal-value matrix K on the source curve itself
inline MatX dl_G0_trace(const BoundaryCurve& c) {
    const std::size_t n = c.size();
    MatX a(n, n);
    if (c.kind == CurveKind::convex_polygon) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) = (i == j) ? 0.0
                                   : panel_angle_integral(c.nodes[i], c.panel_a[j], c.panel_b[j]);
        return a;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                a(i, j) = -c.curvatures[i] / (4.0 * pi) * c.weights[i];
            } else {
                const KernelEval k = fundamental_solution(c.nodes[i], c.nodes[j]);
                a(i, j) = c.weights[j] * k.grad_y.dot(c.normals[j]);
            }
        }
    return a;
}

// adjoint double-layer matrix K' (kernel dnu_x G0) on the source curve itself
inline MatX dl_adjoint_G0_trace(const BoundaryCurve& c) {
    const std::size_t n = c.size();
    if (c.kind == CurveKind::convex_polygon)
        throw parameter_error("dl_adjoint_G0_trace: smooth curves only");
    MatX a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                a(i, j) = -c.curvatures[i] / (4.0 * pi) * c.weights[i];
            } else {
                const KernelEval k = fundamental_solution(c.nodes[i], c.nodes[j]);
                a(i, j) = c.weights[j] * k.grad_x.dot(c.normals[i]);
            }
        }
    return a;
}

// evaluation matrices at arbitrary disjoint target points
inline MatX sl_G0_eval(const BoundaryCurve& src, const std::vector<Vec2>& targets) {
    MatX a(targets.size(), src.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (src.kind == CurveKind::convex_polygon)
                a(i, j) = panel_log_integral(targets[i], src.panel_a[j], src.panel_b[j]);
            else
                a(i, j) = src.weights[j] * fundamental_solution(targets[i], src.nodes[j]).value;
        }
    return a;
}

inline MatX dl_G0_eval(const BoundaryCurve& src, const std::vector<Vec2>& targets) {
    MatX a(targets.size(), src.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (src.kind == CurveKind::convex_polygon)
                a(i, j) = panel_angle_integral(targets[i], src.panel_a[j], src.panel_b[j]);
            else
                a(i, j) = src.weights[j] *
                          fundamental_solution(targets[i], src.nodes[j]).grad_y.dot(src.normals[j]);
        }
    return a;
}

// normal-derivative evaluation matrices at disjoint targets with normals
inline MatX sl_G0_dnu_eval(const BoundaryCurve& src, const std::vector<Vec2>& targets,
                           const std::vector<Vec2>& target_normals) {
    MatX a(targets.size(), src.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (src.kind == CurveKind::convex_polygon)
                a(i, j) = target_normals[i].dot(
                    panel_grad_log_integral(targets[i], src.panel_a[j], src.panel_b[j]));
            else
                a(i, j) = src.weights[j] *
                          fundamental_solution(targets[i], src.nodes[j]).grad_x.dot(target_normals[i]);
        }
    return a;
}

inline MatX dl_G0_dnu_eval(const BoundaryCurve& src, const std::vector<Vec2>& targets,
                           const std::vector<Vec2>& target_normals) {
    MatX a(targets.size(), src.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (src.kind == CurveKind::convex_polygon) {
                a(i, j) = target_normals[i].dot(
                    panel_grad_angle_integral(targets[i], src.panel_a[j], src.panel_b[j]));
            } else {
                const Vec2 d = targets[i] - src.nodes[j];
                const double r2 = d.squaredNorm();
                const Vec2& nu = src.normals[j];
                const Vec2 gk = (nu / r2 - 2.0 * d.dot(nu) * d / (r2 * r2)) / (2.0 * pi);
                a(i, j) = src.weights[j] * gk.dot(target_normals[i]);
            }
        }
    return a;
}

} // namespace detail

/// Layer-potential representation of a solved harmonic field: a sum of
/// single/double-layer potentials with the fundamental-solution kernel.
struct HarmonicFieldRep {
    struct Layer {
        BoundaryCurve curve;
        VecX density;
        bool single_layer = false; // else double layer
    };
    std::vector<Layer> layers;

    double evaluate(const Vec2& p) const {
        double s = 0.0;
        for (const auto& l : layers) {
            const std::vector<Vec2> t{p};
            const MatX m = l.single_layer ? detail::sl_G0_eval(l.curve, t)
                                          : detail::dl_G0_eval(l.curve, t);
            s += (m * l.density)(0);
        }
        return s;
    }

    Vec2 gradient(const Vec2& p) const {
        Vec2 g = Vec2::Zero();
        const std::vector<Vec2> t{p};
        const std::vector<Vec2> ex{Vec2(1.0, 0.0)};
        const std::vector<Vec2> ey{Vec2(0.0, 1.0)};
        for (const auto& l : layers) {
            const MatX mx = l.single_layer ? detail::sl_G0_dnu_eval(l.curve, t, ex)
                                           : detail::dl_G0_dnu_eval(l.curve, t, ex);
            const MatX my = l.single_layer ? detail::sl_G0_dnu_eval(l.curve, t, ey)
                                           : detail::dl_G0_dnu_eval(l.curve, t, ey);
            g.x() += (mx * l.density)(0);
            g.y() += (my * l.density)(0);
        }
        return g;
    }
};

/// Interior Dirichlet solution on the disk bounded by a circle: double-layer
/// representation, density from the second-kind jump equation (K - 1/2) psi = f.
struct InteriorSolution {
    HarmonicFieldRep rep;
    VecX dnu; // Neumann trace at the data-curve nodes
};

inline InteriorSolution solve_interior_dirichlet(const BoundaryCurve& omega, const VecX& f) {
    if (omega.kind != CurveKind::circle)
        throw parameter_error("solve_interior_dirichlet: the outer curve must be a circle");
    if (f.size() != Eigen::Index(omega.size()))
        throw parameter_error("solve_interior_dirichlet: f must be given at the curve nodes");
    const std::size_t n = omega.size();
    MatX sys = detail::dl_G0_trace(omega) - 0.5 * MatX::Identity(n, n);
    Eigen::PartialPivLU<MatX> lu(sys);
    const VecX psi = lu.solve(f);
    const double residual = (sys * psi - f).norm();
    if (!(residual <= 1e-8 * std::max(1.0, f.norm())))
        throw solver_error("solve_interior_dirichlet: discrete system solve failed");
    InteriorSolution sol;
    sol.rep.layers.push_back({omega, psi, false});
    sol.dnu = detail::circle_dtn(omega, f);
    return sol;
}

/// Full annular solution: u in Omega \ D with u = f on dOmega, u = 0 on dD,
/// represented as DL on dOmega plus (SL + DL) on dD.
struct AnnularSolution {
    CauchyData data;
    HarmonicFieldRep u_rep;
    HarmonicFieldRep v_rep;
    BoundaryCurve obstacle;
    VecX u_on_obstacle;       // trace at obstacle nodes (should vanish)
    VecX dnu_u_on_obstacle;   // annulus-side flux at obstacle nodes (circle obstacles)
    VecX v_on_obstacle;
    VecX dnu_v_on_obstacle;   // circle obstacles
};

inline AnnularSolution solve_annular(const BoundaryCurve& omega, const BoundaryCurve& obstacle,
                                     const VecX& f) {
    if (omega.kind != CurveKind::circle)
        throw parameter_error("solve_annular: the outer curve must be a circle");
    if (!strictly_inside(obstacle, omega))
        throw geometry_error("solve_annular: obstacle must lie strictly inside the outer curve");
    const std::size_t no = omega.size(), nd = obstacle.size();

    // trace blocks
    const MatX k_oo = detail::dl_G0_trace(omega);
    const MatX s_do = detail::sl_G0_eval(obstacle, omega.nodes);
    const MatX k_do = detail::dl_G0_eval(obstacle, omega.nodes);
    const MatX w_od = detail::dl_G0_eval(omega, obstacle.nodes);
    const MatX s_dd = detail::sl_G0_trace(obstacle);
    const MatX k_dd = detail::dl_G0_trace(obstacle);

    MatX sys(no + nd, no + nd);
    sys.topLeftCorner(no, no) = k_oo - 0.5 * MatX::Identity(no, no);
    sys.topRightCorner(no, nd) = s_do + k_do;
    sys.bottomLeftCorner(nd, no) = w_od;
    sys.bottomRightCorner(nd, nd) = s_dd + k_dd + 0.5 * MatX::Identity(nd, nd);

    VecX rhs = VecX::Zero(no + nd);
    rhs.head(no) = f;

    Eigen::PartialPivLU<MatX> lu(sys);
    const VecX sol = lu.solve(rhs);
    const double residual = (sys * sol - rhs).norm();
    if (!(residual <= 1e-8 * std::max(1.0, rhs.norm())))
        throw solver_error("solve_annular: discrete system solve failed");
    const VecX psi = sol.head(no);
    const VecX phi = sol.tail(nd);

    Eigen::BDCSVD<MatX> svd(sys);
    const double cond = svd.singularValues()(0) /
                        svd.singularValues()(svd.singularValues().size() - 1);

    // Neumann trace of u on the data curve: hypersingular part of the outer
    // double layer via its Fourier symbol, obstacle layers by smooth evaluation
    VecX dnu_u = detail::circle_hypersingular_dl(omega, psi);
    dnu_u += detail::sl_G0_dnu_eval(obstacle, omega.nodes, omega.normals) * phi;
    dnu_u += detail::dl_G0_dnu_eval(obstacle, omega.nodes, omega.normals) * phi;

    const InteriorSolution v = solve_interior_dirichlet(omega, f);

    AnnularSolution a;
    a.data = make_cauchy_data(omega, f, dnu_u, v.dnu,
                              "solver N=" + std::to_string(no));
    a.data.condition_estimate = cond;
    if (cond > 1e12)
        a.data.warnings.push_back("forward system condition number " + std::to_string(cond));
    a.u_rep.layers.push_back({omega, psi, false});
    a.u_rep.layers.push_back({obstacle, phi, true});
    a.u_rep.layers.push_back({obstacle, phi, false});
    a.v_rep = v.rep;
    a.obstacle = obstacle;

    a.u_on_obstacle = w_od * psi + (s_dd + k_dd + 0.5 * MatX::Identity(nd, nd)) * phi;
    a.v_on_obstacle = detail::dl_G0_eval(omega, obstacle.nodes) * v.rep.layers[0].density;
    if (obstacle.kind == CurveKind::circle) {
        VecX dnu = detail::dl_G0_dnu_eval(omega, obstacle.nodes, obstacle.normals) * psi;
        dnu += (detail::dl_adjoint_G0_trace(obstacle) - 0.5 * MatX::Identity(nd, nd)) * phi;
        dnu += detail::circle_hypersingular_dl(obstacle, phi);
        a.dnu_u_on_obstacle = dnu;
        a.dnu_v_on_obstacle =
            detail::dl_G0_dnu_eval(omega, obstacle.nodes, obstacle.normals) * v.rep.layers[0].density;
    }
    return a;
}

inline CauchyData solve_annular_dirichlet(const BoundaryCurve& omega,
                                          const BoundaryCurve& obstacle, const VecX& f) {
    return solve_annular(omega, obstacle, f).data;
}

// ---- concentric-annulus oracle ----

/// Exact separation-of-variables solution of the annulus problem between
/// concentric circles r = R_d and r = R_omega centered at the origin.
/// Fourier data: mode n >= 1 carries (cos, sin) coefficients; mode 0 uses the
/// cos slot.
class ConcentricAnnulusOracle {
public:
    ConcentricAnnulusOracle(double r_omega, double r_d,
                            std::map<int, std::pair<double, double>> coeffs)
        : r_omega_(r_omega), r_d_(r_d), coeffs_(std::move(coeffs)) {
        if (!(0.0 < r_d_ && r_d_ < r_omega_))
            throw parameter_error("ConcentricAnnulusOracle: need 0 < R_d < R_omega");
    }

    double f_at(double theta) const {
        double s = 0.0;
        for (const auto& [n, c] : coeffs_)
            s += c.first * std::cos(n * theta) + c.second * std::sin(n * theta);
        return s;
    }

    // radial part of mode n at radius r, normalized to 1 at R_omega
    double mode_value(int n, double r) const {
        if (n == 0) return std::log(r / r_d_) / std::log(r_omega_ / r_d_);
        const double a = 1.0 / (std::pow(r_omega_, n) -
                                std::pow(r_d_, 2 * n) * std::pow(r_omega_, -n));
        return a * (std::pow(r, n) - std::pow(r_d_, 2 * n) * std::pow(r, -n));
    }

    double mode_derivative(int n, double r) const {
        if (n == 0) return 1.0 / (r * std::log(r_omega_ / r_d_));
        const double a = 1.0 / (std::pow(r_omega_, n) -
                                std::pow(r_d_, 2 * n) * std::pow(r_omega_, -n));
        return a * double(n) *
               (std::pow(r, n - 1) + std::pow(r_d_, 2 * n) * std::pow(r, -n - 1));
    }

    double u_value(const Vec2& p) const {
        const double r = p.norm(), th = std::atan2(p.y(), p.x());
        double s = 0.0;
        for (const auto& [n, c] : coeffs_)
            s += mode_value(n, r) * (c.first * std::cos(n * th) + c.second * std::sin(n * th));
        return s;
    }

    double v_value(const Vec2& p) const {
        const double r = p.norm(), th = std::atan2(p.y(), p.x());
        double s = 0.0;
        for (const auto& [n, c] : coeffs_) {
            const double rad = n == 0 ? 1.0 : std::pow(r / r_omega_, n);
            s += rad * (c.first * std::cos(n * th) + c.second * std::sin(n * th));
        }
        return s;
    }

    double w_value(const Vec2& p) const { return u_value(p) - v_value(p); }

    double dnu_u_at(double theta) const {
        double s = 0.0;
        for (const auto& [n, c] : coeffs_)
            s += mode_derivative(n, r_omega_) *
                 (c.first * std::cos(n * theta) + c.second * std::sin(n * theta));
        return s;
    }

    double dnu_v_at(double theta) const {
        double s = 0.0;
        for (const auto& [n, c] : coeffs_) {
            if (n == 0) continue;
            s += double(n) / r_omega_ *
                 (c.first * std::cos(n * theta) + c.second * std::sin(n * theta));
        }
        return s;
    }

    double dnu_w_at(double theta) const { return dnu_u_at(theta) - dnu_v_at(theta); }

    // annulus-side radial derivative of u on the obstacle circle
    double dnu_u_on_obstacle_at(double theta) const {
        double s = 0.0;
        for (const auto& [n, c] : coeffs_)
            s += mode_derivative(n, r_d_) *
                 (c.first * std::cos(n * theta) + c.second * std::sin(n * theta));
        return s;
    }

    double dnu_v_on_obstacle_at(double theta) const {
        double s = 0.0;
        for (const auto& [n, c] : coeffs_) {
            if (n == 0) continue;
            s += double(n) * std::pow(r_d_ / r_omega_, n) / r_d_ *
                 (c.first * std::cos(n * theta) + c.second * std::sin(n * theta));
        }
        return s;
    }

    double dnu_w_on_obstacle_at(double theta) const {
        return dnu_u_on_obstacle_at(theta) - dnu_v_on_obstacle_at(theta);
    }

    CauchyData cauchy_data(const BoundaryCurve& omega) const {
        if (omega.kind != CurveKind::circle || omega.center.norm() > 1e-14 ||
            std::abs(omega.radius - r_omega_) > 1e-14)
            throw parameter_error("ConcentricAnnulusOracle: data curve must be the oracle's outer circle");
        const std::size_t n = omega.size();
        VecX f(n), du(n), dv(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double th = omega.params[j];
            f(j) = f_at(th);
            du(j) = dnu_u_at(th);
            dv(j) = dnu_v_at(th);
        }
        return make_cauchy_data(omega, f, du, dv, "oracle");
    }

    double obstacle_radius() const { return r_d_; }
    double omega_radius() const { return r_omega_; }

private:
    double r_omega_, r_d_;
    std::map<int, std::pair<double, double>> coeffs_;
};

inline CauchyData concentric_annulus_oracle(double r_omega, double r_d,
                                            const std::map<int, std::pair<double, double>>& coeffs,
                                            int n_nodes = 256) {
    const ConcentricAnnulusOracle oracle(r_omega, r_d, coeffs);
    return oracle.cauchy_data(make_circle(Vec2(0.0, 0.0), r_omega, n_nodes));
}

/// w_ext(z) = int_dOmega dnu_w(y) G(y,z) dsigma(y), the boundary-data pairing
/// against the disk Green function (the w-trace term drops since w = 0 on
/// dOmega). The Green function vanishes for y on dOmega, so this evaluates
/// to zero up to quadrature roundoff; kept as the literal diagnostic.
inline double evaluate_w_extension(const CauchyData& data, const Vec2& z,
                                   bool* near_boundary_warning = nullptr) {
    detail::require_unit_disk(data.omega, "evaluate_w_extension");
    const double dist_to_boundary = 1.0 - z.norm();
    if (!(dist_to_boundary > 0.0))
        throw parameter_error("evaluate_w_extension: z must lie strictly inside the unit disk");
    if (near_boundary_warning)
        *near_boundary_warning = dist_to_boundary < 2.0 * data.omega.node_spacing();
    double s = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j)
        s += data.omega.weights[j] * data.dnu_w(j) *
             dirichlet_green_disk(data.omega.nodes[j], z).value;
    return s;
}

// ---- CSV serialization ----

inline void write_cauchy_csv(const CauchyData& d, std::ostream& os,
                             const std::string& obstacle_record = "") {
    os << "# omega " << to_json(d.omega).dump() << '\n';
    if (!obstacle_record.empty()) os << "# obstacle " << obstacle_record << '\n';
    os << "# generator " << d.generator << '\n';
    os << "theta,f,dnu_u,dnu_v,dnu_w\n";
    os << std::setprecision(17);
    for (std::size_t j = 0; j < d.size(); ++j)
        os << d.omega.params[j] << ',' << d.f(j) << ',' << d.dnu_u(j) << ','
           << d.dnu_v(j) << ',' << d.dnu_w(j) << '\n';
}

inline void write_cauchy_csv(const CauchyData& d, const std::string& path,
                             const std::string& obstacle_record = "") {
    std::ofstream os(path);
    if (!os) throw error("write_cauchy_csv: cannot open " + path);
    write_cauchy_csv(d, os, obstacle_record);
}

/// Reads the trace columns back onto the given data curve (mesh metadata is
/// carried by the caller; node count must match).
inline CauchyData read_cauchy_csv(std::istream& is, const BoundaryCurve& omega) {
    std::string line;
    std::string generator = "csv";
    std::vector<double> f, du, dv;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# generator ", 0) == 0) generator = line.substr(12);
            continue;
        }
        if (line.rfind("theta", 0) == 0) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != 5) throw error("read_cauchy_csv: malformed row");
        f.push_back(row[1]);
        du.push_back(row[2]);
        dv.push_back(row[3]);
    }
    if (f.size() != omega.size())
        throw parameter_error("read_cauchy_csv: row count does not match the data curve");
    VecX vf = Eigen::Map<VecX>(f.data(), f.size());
    VecX vdu = Eigen::Map<VecX>(du.data(), du.size());
    VecX vdv = Eigen::Map<VecX>(dv.data(), dv.size());
    return make_cauchy_data(omega, vf, vdu, vdv, generator);
}

} // namespace rtnrt
