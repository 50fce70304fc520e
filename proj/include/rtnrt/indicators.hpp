#pragma once

#include "rtnrt/boundary_operators.hpp"
#include "rtnrt/common.hpp"
#include "rtnrt/forward_solver.hpp"
#include "rtnrt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rtnrt {

/// Geometric regularization-parameter schedule alpha_k = alpha0 * q^k.
struct Schedule {
    double alpha0 = 1e-2;
    double q = 0.5;
    int steps = 40;

    double alpha_at(int k) const { return alpha0 * std::pow(q, k); }
    double alpha_final() const { return alpha_at(steps); }
};

struct RegularizationPath {
    std::vector<double> alphas;
    std::vector<double> norms;      // ||phi_alpha|| in the domain norm
    std::vector<double> residuals;  // ||R phi_alpha - b|| in the range norm
    std::vector<double> diffs;      // ||phi_{a_k} - phi_{a_{k-1}}||, diffs[0] = 0
};

enum class Classification { finite, infinite };

inline const char* to_string(Classification c) {
    return c == Classification::finite ? "finite" : "infinite";
}

struct IndicatorResult {
    double value = 0.0; // last norm / plateau level; +inf marker when infinite
    Classification classification = Classification::finite;
    double slope = 0.0; // fitted growth exponent over the tail window
    std::optional<RegularizationPath> path;                 // RT forms
    std::vector<std::pair<double, double>> nrt_ladder;      // (tau, J) pairs

    bool finite() const { return classification == Classification::finite; }
};

namespace detail {

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

} // namespace detail

inline RegularizationPath rt_path(const DiscreteOperator& op, const SingularSystem& sys,
                                  const VecX& b, const Schedule& schedule,
                                  double morozov_residual = 0.0) {
    if (!(schedule.alpha0 > 0.0) || !(schedule.q > 0.0 && schedule.q < 1.0) ||
        schedule.steps < 10)
        throw parameter_error("rt_path: need alpha0 > 0, q in (0,1), K >= 10");
    if (b.size() != op.matrix.rows())
        throw parameter_error("rt_path: data vector does not live on the range curve");
    RegularizationPath path;
    VecX prev;
    for (int k = 0; k <= schedule.steps; ++k) {
        const double alpha = schedule.alpha_at(k);
        const VecX phi = tikhonov_solve(op, sys, b, alpha);
        path.alphas.push_back(alpha);
        path.norms.push_back(op.domain_space.norm(phi));
        path.residuals.push_back(op.range_space.norm(op.matrix * phi - b));
        path.diffs.push_back(k == 0 ? 0.0 : op.domain_space.norm(phi - prev));
        prev = phi;
        if (morozov_residual > 0.0 && path.residuals.back() <= morozov_residual) break;
    }
    return path;
}

inline RegularizationPath rt_path(const DiscreteOperator& op, const VecX& b,
                                  const Schedule& schedule) {
    return rt_path(op, singular_system(op), b, schedule);
}

/// Finiteness decision: least-squares slope of log||phi_alpha|| against
/// log(1/alpha) over the tail window; finite iff the slope stays below the
/// threshold.
inline IndicatorResult classify_path(const RegularizationPath& path,
                                     double slope_threshold = 0.05, int window = 10) {
    if (path.norms.size() < std::size_t(window))
        throw parameter_error("classify_path: path shorter than the fit window");
    for (std::size_t k = 1; k < path.norms.size(); ++k)
        if (path.norms[k] < path.norms[k - 1] * (1.0 - 1e-9))
            throw internal_consistency_error("classify_path: Tikhonov norms decreased along the path");

    IndicatorResult res;
    res.path = path;
    const std::size_t n = path.norms.size();
    if (path.norms[n - 1] < 1e-300) { // zero data
        res.value = 0.0;
        res.classification = Classification::finite;
        res.slope = 0.0;
        return res;
    }
    std::vector<double> x, y;
    for (std::size_t k = n - std::size_t(window); k < n; ++k) {
        x.push_back(std::log(1.0 / path.alphas[k]));
        y.push_back(std::log(path.norms[k] + 1e-300));
    }
    res.slope = detail::fit_slope(x, y);
    if (res.slope < slope_threshold) {
        res.classification = Classification::finite;
        res.value = path.norms[n - 1];
    } else {
        res.classification = Classification::infinite;
        res.value = std::numeric_limits<double>::infinity();
    }
    return res;
}

struct IndicatorConfig {
    Schedule schedule;
    double truncation = 1e-12;
    double slope_threshold = 0.05;
    int window = 10;
    int nrt_ladder_decades = 7; // tau = 1e-6 ... 1e-12
    double morozov_residual = 0.0;
};

inline void require_test_domain(const TestDomain& g, const BoundaryCurve& omega) {
    if (!strictly_inside(g.curve, omega))
        throw geometry_error("test domain '" + g.id + "' is not strictly inside the data curve");
}

/// Range-test indicator: Tikhonov path of R[phi] = dnu_w on the test domain.
inline IndicatorResult rt_indicator(const CauchyData& data, const TestDomain& g,
                                    const IndicatorConfig& cfg = {}) {
    require_test_domain(g, data.omega);
    const auto op = assemble_R(g.curve, data.omega);
    const auto sys = singular_system(op);
    const auto path = rt_path(op, sys, data.dnu_w, cfg.schedule, cfg.morozov_residual);
    const int window = std::min<int>(cfg.window, int(path.norms.size()));
    return classify_path(path, cfg.slope_threshold, window);
}

/// Variant indicator of the Cauchy type: the tail supremum of successive
/// path differences must decay to zero for a convergent path.
inline IndicatorResult rt_variant_indicator(const CauchyData& data, const TestDomain& g,
                                            const IndicatorConfig& cfg = {}) {
    require_test_domain(g, data.omega);
    const auto op = assemble_R(g.curve, data.omega);
    const auto sys = singular_system(op);
    const auto path = rt_path(op, sys, data.dnu_w, cfg.schedule, cfg.morozov_residual);

    IndicatorResult res;
    res.path = path;
    const std::size_t n = path.diffs.size();
    std::vector<double> tail_sup(n, 0.0);
    for (std::size_t k = n; k-- > 1;)
        tail_sup[k] = std::max(path.diffs[k], k + 1 < n ? tail_sup[k + 1] : 0.0);
    const double stat = tail_sup.size() > 1 ? tail_sup[std::max<std::size_t>(1, n - cfg.window)] : 0.0;
    const double scale = std::max(path.norms.back(), 1e-300);
    std::vector<double> x, y;
    for (std::size_t k = std::max<std::size_t>(1, n - cfg.window); k < n; ++k) {
        x.push_back(std::log(1.0 / path.alphas[k]));
        y.push_back(std::log(tail_sup[k] + 1e-300));
    }
    res.slope = x.size() >= 2 ? detail::fit_slope(x, y) : 0.0;
    if (stat <= 1e-4 * std::max(scale, 1.0)) {
        res.classification = Classification::finite;
        res.value = stat;
    } else {
        res.classification = Classification::infinite;
        res.value = std::numeric_limits<double>::infinity();
    }
    return res;
}

/// Discrete no-response supremum J = sqrt(sum_{lambda_n > tau lambda_1}
/// b_n^2 / lambda_n); the supremum is attained in finite dimensions.
inline double nrt_pre_indicator(const DiscreteOperator& op, const SingularSystem& sys,
                                const VecX& b, double tau) {
    const std::size_t rank = sys.rank_above(tau);
    if (rank == 0)
        throw degenerate_operator_error("nrt_pre_indicator: truncation removed every mode");
    const VecX bn = sys.left.transpose() * (op.range_space.gram * b);
    double s = 0.0;
    for (std::size_t n = 0; n < rank; ++n) s += bn(n) * bn(n) / sys.lambda(n);
    return std::sqrt(s);
}

inline double nrt_pre_indicator(const DiscreteOperator& op, const VecX& b, double tau) {
    return nrt_pre_indicator(op, singular_system(op), b, tau);
}

/// No-response classification from the truncation ladder tau = 1e-6 ...:
/// infinite when J keeps growing through the ladder instead of reaching a
/// plateau (mirror of the path slope rule).
inline IndicatorResult classify_nrt_ladder(const DiscreteOperator& op,
                                           const SingularSystem& sys, const VecX& b,
                                           const IndicatorConfig& cfg) {
    IndicatorResult res;
    std::vector<double> x, y;
    for (int m = 0; m < cfg.nrt_ladder_decades; ++m) {
        const double tau = 1e-6 * std::pow(10.0, -m);
        const double j = nrt_pre_indicator(op, sys, b, tau);
        res.nrt_ladder.emplace_back(tau, j);
        x.push_back(std::log(1.0 / tau));
        y.push_back(std::log(j + 1e-300));
    }
    const double j_last = res.nrt_ladder.back().second;
    if (j_last < 1e-300) { // zero data
        res.classification = Classification::finite;
        res.value = 0.0;
        return res;
    }
    const std::size_t tail = std::min<std::size_t>(4, x.size());
    res.slope = detail::fit_slope(std::vector<double>(x.end() - tail, x.end()),
                                  std::vector<double>(y.end() - tail, y.end()));
    if (res.slope < cfg.slope_threshold) {
        res.classification = Classification::finite;
        res.value = j_last;
    } else {
        res.classification = Classification::infinite;
        res.value = std::numeric_limits<double>::infinity();
    }
    return res;
}

/// No-response indicator for a test domain.
inline IndicatorResult nrt_indicator(const CauchyData& data, const TestDomain& g,
                                     const IndicatorConfig& cfg = {}) {
    require_test_domain(g, data.omega);
    const auto op = assemble_R(g.curve, data.omega);
    return classify_nrt_ladder(op, singular_system(op), data.dnu_w, cfg);
}

/// Relative gap between the non-squared path limit ||phi_{alpha_K}|| and the
/// no-response supremum J, both restricted to the same truncated spectrum.
inline double duality_gap(const DiscreteOperator& op, const SingularSystem& sys, const VecX& b,
                          const Schedule& schedule, double tau) {
    const std::size_t rank = sys.rank_above(tau);
    if (rank == 0)
        throw degenerate_operator_error("duality_gap: truncation removed every mode");
    const VecX bn = sys.left.transpose() * (op.range_space.gram * b);
    const double alpha = schedule.alpha_final();
    double norm2 = 0.0, j2 = 0.0;
    for (std::size_t n = 0; n < rank; ++n) {
        const double c = sys.mu(n) * bn(n) / (alpha + sys.lambda(n));
        norm2 += c * c;
        j2 += bn(n) * bn(n) / sys.lambda(n);
    }
    const double j = std::sqrt(j2);
    return std::abs(std::sqrt(norm2) - j) / std::max(j, 1e-300);
}

inline double duality_gap(const DiscreteOperator& op, const VecX& b, const Schedule& schedule,
                          double tau) {
    return duality_gap(op, singular_system(op), b, schedule, tau);
}

/// Green-formula identity of the double-layer pairing: the dOmega form
/// int W[phi] dnu_w dsigma equals the dD form
/// int (W[phi] dnu_w + dnu W[phi] v) dsigma. Needs ground truth on dD.
inline double green_identity_check(const CauchyData& data, const BoundaryCurve& true_d,
                                   const VecX& phi, const VecX& dnu_w_on_d,
                                   const VecX& v_on_d) {
    if (phi.size() != Eigen::Index(data.omega.size()))
        throw parameter_error("green_identity_check: phi must live on the data curve");
    const auto w_trace = assemble_W(data.omega);
    const VecX w_on_omega = w_trace.matrix * phi;
    double lhs = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < data.omega.size(); ++i) {
        lhs += data.omega.weights[i] * w_on_omega(i) * data.dnu_w(i);
        scale += data.omega.weights[i] * std::abs(w_on_omega(i) * data.dnu_w(i));
    }

    double rhs = 0.0;
    for (std::size_t i = 0; i < true_d.size(); ++i) {
        const double w_val = eval_W(data.omega, phi, true_d.nodes[i]);
        const double w_dnu = eval_W_gradient(data.omega, phi, true_d.nodes[i]).dot(true_d.normals[i]);
        rhs += true_d.weights[i] * (w_val * dnu_w_on_d(i) + w_dnu * v_on_d(i));
        scale += true_d.weights[i] * (std::abs(w_val * dnu_w_on_d(i)) + std::abs(w_dnu * v_on_d(i)));
    }
    // both forms can vanish together (densities orthogonal to the data), so
    // the difference is measured against the integrand magnitude
    return std::abs(lhs - rhs) / std::max(scale, 1e-300);
}

inline double green_identity_check(const CauchyData& data, const BoundaryCurve& true_d,
                                   const VecX& phi, const VecX& dnu_w_on_d,
                                   const HarmonicFieldRep& v_field) {
    VecX v_on_d(true_d.size());
    for (std::size_t i = 0; i < true_d.size(); ++i) v_on_d(i) = v_field.evaluate(true_d.nodes[i]);
    return green_identity_check(data, true_d, phi, dnu_w_on_d, v_on_d);
}

/// Taylor-coefficient growth diagnostic a_ell(z) = rho^ell sup_h
/// |(h.grad)^ell w_ext(z)| / ell!, via the differentiated representation and
/// the analytic derivatives of the disk Green function. The supremum is
/// taken over 32 equi-angular directions (or a single given direction).
inline std::vector<double> taylor_growth_diagnostic(const CauchyData& data, const Vec2& z,
                                                    double rho, int ell_max,
                                                    std::optional<Vec2> direction = std::nullopt) {
    if (ell_max > green_derivative_order_max)
        throw parameter_error("taylor_growth_diagnostic: ell_max exceeds the derivative cap");
    detail::require_unit_disk(data.omega, "taylor_growth_diagnostic");
    if (!(1.0 - z.norm() > rho))
        throw parameter_error("taylor_growth_diagnostic: need dist(z, dOmega) > rho");
    std::vector<Vec2> dirs;
    if (direction) {
        dirs.push_back(direction->normalized());
    } else {
        for (int m = 0; m < 32; ++m)
            dirs.emplace_back(std::cos(2.0 * pi * m / 32.0), std::sin(2.0 * pi * m / 32.0));
    }
    std::vector<double> a(ell_max + 1, 0.0);
    double factorial = 1.0;
    for (int ell = 0; ell <= ell_max; ++ell) {
        if (ell > 0) factorial *= double(ell);
        double sup = 0.0;
        for (const Vec2& h : dirs) {
            double deriv = 0.0;
            for (std::size_t j = 0; j < data.omega.size(); ++j)
                deriv += data.omega.weights[j] * data.dnu_w(j) *
                         directional_derivative_green(h, ell, data.omega.nodes[j], z);
            sup = std::max(sup, std::abs(deriv));
        }
        a[ell] = std::pow(rho, ell) * sup / factorial;
    }
    return a;
}

/// Additive Gaussian noise on dnu_w; the level is relative to the
/// root-mean-square of dnu_w over the curve measure.
inline void apply_gaussian_noise(CauchyData& data, double level, std::uint64_t seed) {
    if (level <= 0.0) return;
    double l2 = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j)
        l2 += data.omega.weights[j] * data.dnu_w(j) * data.dnu_w(j);
    const double rms = std::sqrt(l2 / data.omega.perimeter());
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, level * rms);
    for (std::size_t j = 0; j < data.size(); ++j) data.dnu_w(j) += nd(gen);
}

/// Absolute range-norm noise level of a perturbed data vector, used for the
/// Morozov-style early stopping of the path.
inline double morozov_level(const InnerProductSpace& range, const VecX& noise_free,
                            const VecX& noisy) {
    return range.norm(noisy - noise_free);
}

} // namespace rtnrt
