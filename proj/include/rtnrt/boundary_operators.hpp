#pragma once

#include "rtnrt/common.hpp"
#include "rtnrt/geometry.hpp"
#include "rtnrt/green_kernels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace rtnrt {

/// Discrete realization of H^s(curve) on node vectors: a symmetric
/// positive-definite Gram matrix. Circles with their uniform arc-length
/// grid get the spectral Fourier surrogate diag((1+k^2)^s); graded and
/// non-uniform curves fall back to the weighted-L2 Gram diag(w).
struct InnerProductSpace {
    BoundaryCurve curve;
    double sobolev_order = 0.0;
    MatX gram;
    Eigen::LLT<MatX> llt;

    std::size_t dim() const { return curve.size(); }

    double inner(const VecX& a, const VecX& b) const { return a.dot(gram * b); }

    double norm(const VecX& a) const {
        const double v = inner(a, a);
        return v > 0.0 ? std::sqrt(v) : 0.0;
    }

    VecX gram_solve(const VecX& v) const { return llt.solve(v); }
};

inline InnerProductSpace make_space(const BoundaryCurve& curve, double s) {
    const bool valid = std::abs(s) < 1e-14 || std::abs(std::abs(s) - 0.5) < 1e-14;
    if (!valid) throw parameter_error("make_space: sobolev order must be -1/2, 0 or +1/2");

    InnerProductSpace sp;
    sp.curve = curve;
    sp.sobolev_order = s;
    const std::size_t n = curve.size();

    if (curve.uniform_circle() && std::abs(s) > 1e-14) {
        // orthonormal real Fourier basis on the uniform grid
        MatX basis(n, n);
        VecX weight(n);
        std::size_t col = 0;
        basis.col(col).setConstant(1.0 / std::sqrt(double(n)));
        weight(col++) = 1.0;
        for (std::size_t k = 1; k < n / 2; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                basis(j, col) = std::sqrt(2.0 / double(n)) * std::cos(double(k) * curve.params[j]);
                basis(j, col + 1) = std::sqrt(2.0 / double(n)) * std::sin(double(k) * curve.params[j]);
            }
            weight(col) = std::pow(1.0 + double(k) * double(k), s);
            weight(col + 1) = weight(col);
            col += 2;
        }
        const double kn = double(n) / 2.0;
        for (std::size_t j = 0; j < n; ++j)
            basis(j, col) = std::cos(kn * curve.params[j]) / std::sqrt(double(n));
        weight(col) = std::pow(1.0 + kn * kn, s);
        sp.gram = (curve.perimeter() / double(n)) *
                  (basis * weight.asDiagonal() * basis.transpose());
        sp.gram = 0.5 * (sp.gram + sp.gram.transpose().eval());
    } else {
        sp.gram = MatX::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) sp.gram(i, i) = curve.weights[i];
    }

    sp.llt.compute(sp.gram);
    if (sp.llt.info() != Eigen::Success)
        throw space_error("make_space: Gram matrix is not positive definite");
    return sp;
}

enum class KernelTag { single_layer_trace, R, R_star, R_dual, W_double_layer };

/// Dense matrix between two inner-product spaces (rows: target nodes,
/// columns: source nodes).
struct DiscreteOperator {
    MatX matrix;
    InnerProductSpace domain_space;
    InnerProductSpace range_space;
    KernelTag kernel_tag = KernelTag::R;

    VecX apply(const VecX& v) const { return matrix * v; }
};

namespace detail {

// Kussmaul-Martensen weights R_k for the 2pi-periodic rule
//   int_0^{2pi} ln(4 sin^2((t-s)/2)) f(s) ds ~ sum_j R_{|i-j|} f(s_j)
// on N = 2n uniform nodes.
inline std::vector<double> km_log_weights(std::size_t n_nodes) {
    if (n_nodes % 2 != 0) throw parameter_error("km_log_weights: need an even node count");
    const std::size_t n = n_nodes / 2;
    std::vector<double> r(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k) {
        double s = 0.0;
        for (std::size_t m = 1; m < n; ++m)
            s += std::cos(double(m) * double(k) * pi / double(n)) / double(m);
        r[k] = -(2.0 * pi / double(n)) * s -
               (pi / (double(n) * double(n))) * std::cos(double(k) * pi);
    }
    return r;
}

// int over the segment [a,b] of -(1/2pi) ln|x-y| ds(y)
inline double panel_log_integral(const Vec2& x, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len = d.norm();
    const Vec2 e = d / len;
    const double ta = (a - x).dot(e);
    const double tb = (b - x).dot(e);
    const Vec2 perp = (a - x) - ta * e;
    const double h = perp.norm();
    auto F = [h](double t) {
        if (t == 0.0) return 0.0;
        const double r2 = t * t + h * h;
        double v = 0.5 * t * std::log(r2) - t;
        if (h > 0.0) v += h * std::atan(t / h);
        return v;
    };
    return -(F(tb) - F(ta)) / (2.0 * pi);
}

// int over the segment [a,b] of dG0/dnu_y ds(y); equals -(1/2pi) times the
// signed angle subtended by the segment at x (a->b along the curve
// orientation, nu the matching outward normal)
inline double panel_angle_integral(const Vec2& x, const Vec2& a, const Vec2& b) {
    const Complex za = to_complex(a) - to_complex(x);
    const Complex zb = to_complex(b) - to_complex(x);
    return -std::arg(zb / za) / (2.0 * pi);
}

// grad_x of panel_log_integral
inline Vec2 panel_grad_log_integral(const Vec2& x, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len = d.norm();
    const Vec2 e = d / len;
    const double ta = (a - x).dot(e);
    const double tb = (b - x).dot(e);
    const Vec2 perp = (a - x) - ta * e;
    const double h = perp.norm();
    // int (x - y)/|x - y|^2 ds(y) in the frame (e, m), m = unit from foot to x
    const double ra2 = ta * ta + h * h;
    const double rb2 = tb * tb + h * h;
    const double along = -0.5 * (std::log(rb2) - std::log(ra2));
    double transv = 0.0;
    Vec2 m(0.0, 0.0);
    if (h > 0.0) {
        transv = std::atan(tb / h) - std::atan(ta / h);
        m = -perp / h; // (a - x) - ta e points from x toward the line
    }
    const Vec2 grad_int = along * e + transv * m;
    return grad_int / (2.0 * pi);
}

// grad_x of panel_angle_integral
inline Vec2 panel_grad_angle_integral(const Vec2& x, const Vec2& a, const Vec2& b) {
    const Complex X = to_complex(x);
    const Complex g = 1.0 / (to_complex(a) - X) - 1.0 / (to_complex(b) - X);
    // theta(x) = Im log((b-x)/(a-x)); grad theta = (Im g, Re g)
    return -Vec2(std::imag(g), std::real(g)) / (2.0 * pi);
}

inline void require_unit_disk(const BoundaryCurve& omega, const char* who) {
    if (!omega.is_unit_circle(1e-10))
        throw parameter_error(std::string(who) +
                              ": the outer curve must be the unit circle (rescale the scenario)");
}

inline bool same_discretization(const BoundaryCurve& a, const BoundaryCurve& b) {
    if (a.kind != b.kind || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a.nodes[i] - b.nodes[i]).norm() > 1e-14) return false;
    return true;
}

} // namespace detail

/// Trace of the single-layer potential with the disk Green kernel on its own
/// source curve. Circles use the Kussmaul-Martensen log rule; polygons use
/// exact flat-panel integration of the log part.
inline DiscreteOperator assemble_single_layer(const BoundaryCurve& g_curve) {
    const std::size_t n = g_curve.size();
    MatX a(n, n);

    if (g_curve.kind == CurveKind::circle) {
        const auto km = detail::km_log_weights(n);
        const double speed = g_curve.radius; // |x'(t)| on the circle
        const double wtrap = 2.0 * pi / double(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double rs; // |x-y| / (2 |sin((t-s)/2)|), smooth through the diagonal
                if (i == j) {
                    rs = speed;
                } else {
                    const double dt = g_curve.params[i] - g_curve.params[j];
                    rs = (g_curve.nodes[i] - g_curve.nodes[j]).norm() /
                         (2.0 * std::abs(std::sin(0.5 * dt)));
                }
                double v = -km[(i >= j) ? i - j : j - i] / (4.0 * pi) * speed;
                v += -std::log(rs) / (2.0 * pi) * wtrap * speed;
                // image part of the disk Green function, smooth on interior curves
                const Vec2& x = g_curve.nodes[i];
                const Vec2& y = g_curve.nodes[j];
                const double b2 = x.squaredNorm() * y.squaredNorm() - 2.0 * x.dot(y) + 1.0;
                v += std::log(b2) / (4.0 * pi) * g_curve.weights[j];
                a(i, j) = v;
            }
        }
    } else if (g_curve.kind == CurveKind::convex_polygon) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double v = detail::panel_log_integral(g_curve.nodes[i], g_curve.panel_a[j],
                                                      g_curve.panel_b[j]);
                const Vec2& x = g_curve.nodes[i];
                const Vec2& y = g_curve.nodes[j];
                const double b2 = x.squaredNorm() * y.squaredNorm() - 2.0 * x.dot(y) + 1.0;
                v += std::log(b2) / (4.0 * pi) * g_curve.weights[j];
                a(i, j) = v;
            }
        }
    } else {
        throw parameter_error("assemble_single_layer: same-curve trace supports circles and polygons");
    }

    DiscreteOperator op;
    op.matrix = std::move(a);
    op.domain_space = make_space(g_curve, -0.5);
    op.range_space = make_space(g_curve, 0.5);
    op.kernel_tag = KernelTag::single_layer_trace;
    return op;
}

/// Single-layer potential from a source curve evaluated on a disjoint target.
inline DiscreteOperator assemble_single_layer(const BoundaryCurve& g_curve,
                                              const BoundaryCurve& target) {
    if (detail::same_discretization(g_curve, target)) return assemble_single_layer(g_curve);
    if (curves_intersect(g_curve, target))
        throw geometry_error("assemble_single_layer: curves intersect");
    const std::size_t nt = target.size(), ns = g_curve.size();
    MatX a(nt, ns);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < ns; ++j)
            a(i, j) = g_curve.weights[j] *
                      dirichlet_green_disk(target.nodes[i], g_curve.nodes[j]).value;
    DiscreteOperator op;
    op.matrix = std::move(a);
    op.domain_space = make_space(g_curve, -0.5);
    op.range_space = make_space(target, 0.5);
    op.kernel_tag = KernelTag::single_layer_trace;
    return op;
}

/// R = dnu S : H^{-1/2}(dG) -> H^{-1/2}(dOmega), kernel dnu_x G(x,y).
inline DiscreteOperator assemble_R(const BoundaryCurve& g_curve, const BoundaryCurve& omega) {
    detail::require_unit_disk(omega, "assemble_R");
    if (!strictly_inside(g_curve, omega))
        throw geometry_error("assemble_R: source curve must lie strictly inside the unit disk");
    const std::size_t no = omega.size(), ng = g_curve.size();
    MatX a(no, ng);
    for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < ng; ++j)
            a(i, j) = g_curve.weights[j] *
                      normal_derivative_green_on_boundary(omega.nodes[i], g_curve.nodes[j]);
    DiscreteOperator op;
    op.matrix = std::move(a);
    op.domain_space = make_space(g_curve, -0.5);
    op.range_space = make_space(omega, -0.5);
    op.kernel_tag = KernelTag::R;
    return op;
}

/// Gram-aware adjoint: matrix = G_dom^{-1} A^T G_ran, spaces swapped.
inline DiscreteOperator assemble_adjoint(const DiscreteOperator& op) {
    DiscreteOperator adj;
    adj.matrix = op.domain_space.llt.solve(op.matrix.transpose() * op.range_space.gram);
    adj.domain_space = op.range_space;
    adj.range_space = op.domain_space;
    adj.kernel_tag = op.kernel_tag == KernelTag::R ? KernelTag::R_star : op.kernel_tag;
    return adj;
}

/// Dual operator R^(*) : H^{1/2}(dOmega) -> H^{1/2}(dG),
/// (R^(*) eta)(y) = int_dOmega dnu_x G(x,y) eta(x) dsigma(x).
inline DiscreteOperator assemble_R_dual(const BoundaryCurve& omega, const BoundaryCurve& g_curve) {
    detail::require_unit_disk(omega, "assemble_R_dual");
    if (!strictly_inside(g_curve, omega))
        throw geometry_error("assemble_R_dual: target curve must lie strictly inside the unit disk");
    const std::size_t no = omega.size(), ng = g_curve.size();
    MatX a(ng, no);
    for (std::size_t j = 0; j < ng; ++j)
        for (std::size_t i = 0; i < no; ++i)
            a(j, i) = omega.weights[i] *
                      normal_derivative_green_on_boundary(omega.nodes[i], g_curve.nodes[j]);
    DiscreteOperator op;
    op.matrix = std::move(a);
    op.domain_space = make_space(omega, 0.5);
    op.range_space = make_space(g_curve, 0.5);
    op.kernel_tag = KernelTag::R_dual;
    return op;
}

/// Field evaluation of (R^(*) eta) at an arbitrary interior point.
inline double eval_R_dual(const BoundaryCurve& omega, const VecX& eta, const Vec2& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i)
        s += omega.weights[i] * eta(i) * normal_derivative_green_on_boundary(omega.nodes[i], y);
    return s;
}

/// Double-layer potential with the fundamental-solution kernel, jump trace on
/// the source curve itself: -1/2 I + K (interior side).
inline DiscreteOperator assemble_W(const BoundaryCurve& omega) {
    const std::size_t n = omega.size();
    MatX a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                a(i, j) = -omega.curvatures[i] / (4.0 * pi) * omega.weights[i] - 0.5;
            } else {
                const KernelEval k = fundamental_solution(omega.nodes[i], omega.nodes[j]);
                a(i, j) = omega.weights[j] * k.grad_y.dot(omega.normals[j]);
            }
        }
    }
    DiscreteOperator op;
    op.matrix = std::move(a);
    op.domain_space = make_space(omega, 0.5);
    op.range_space = make_space(omega, 0.5);
    op.kernel_tag = KernelTag::W_double_layer;
    return op;
}

/// Double-layer potential evaluated on an interior target curve.
inline DiscreteOperator assemble_W(const BoundaryCurve& omega, const BoundaryCurve& target) {
    if (detail::same_discretization(omega, target)) return assemble_W(omega);
    if (!strictly_inside(target, omega))
        throw geometry_error("assemble_W: target must lie strictly inside the source curve");
    const std::size_t nt = target.size(), ns = omega.size();
    MatX a(nt, ns);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < ns; ++j) {
            const KernelEval k = fundamental_solution(target.nodes[i], omega.nodes[j]);
            a(i, j) = omega.weights[j] * k.grad_y.dot(omega.normals[j]);
        }
    DiscreteOperator op;
    op.matrix = std::move(a);
    op.domain_space = make_space(omega, 0.5);
    op.range_space = make_space(target, 0.5);
    op.kernel_tag = KernelTag::W_double_layer;
    return op;
}

inline double eval_W(const BoundaryCurve& omega, const VecX& phi, const Vec2& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < omega.size(); ++j) {
        const KernelEval k = fundamental_solution(x, omega.nodes[j]);
        s += omega.weights[j] * phi(j) * k.grad_y.dot(omega.normals[j]);
    }
    return s;
}

inline Vec2 eval_W_gradient(const BoundaryCurve& omega, const VecX& phi, const Vec2& x) {
    Vec2 g = Vec2::Zero();
    for (std::size_t j = 0; j < omega.size(); ++j) {
        const Vec2 d = x - omega.nodes[j];
        const double r2 = d.squaredNorm();
        const Vec2& nu = omega.normals[j];
        // grad_x of dnu_y G0(x,y)
        const Vec2 gk = (nu / r2 - 2.0 * d.dot(nu) * d / (r2 * r2)) / (2.0 * pi);
        g += omega.weights[j] * phi(j) * gk;
    }
    return g;
}

/// Singular system of a DiscreteOperator with respect to its Gram inner
/// products: factor both Grams, take the ordinary SVD of L_Y^T A L_X^{-T}
/// and transform the vectors back.
struct SingularSystem {
    VecX mu;      // decreasing
    MatX left;    // columns u_n, Gram-orthonormal in the range space
    MatX right;   // columns v_n, Gram-orthonormal in the domain space
    VecX lambda;  // mu^2

    std::size_t rank_above(double tau) const {
        if (mu.size() == 0) return 0;
        const double cut = tau * lambda(0);
        std::size_t r = 0;
        while (r < std::size_t(lambda.size()) && lambda(r) > cut) ++r;
        return r;
    }
};

inline SingularSystem singular_system(const DiscreteOperator& op) {
    const MatX lx = op.domain_space.llt.matrixL();
    const MatX ly = op.range_space.llt.matrixL();
    MatX at = ly.transpose() * op.matrix;
    MatX t = at.transpose();
    lx.triangularView<Eigen::Lower>().solveInPlace(t);
    at = t.transpose();
    Eigen::BDCSVD<MatX> svd(at, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SingularSystem sys;
    sys.mu = svd.singularValues();
    sys.left = ly.transpose().triangularView<Eigen::Upper>().solve(svd.matrixU());
    sys.right = lx.transpose().triangularView<Eigen::Upper>().solve(svd.matrixV());
    sys.lambda = sys.mu.array().square();
    return sys;
}

/// Tikhonov-regularized solve phi_alpha = (alpha I + R*R)^{-1} R* b through
/// the singular system, with an exact normal-equations residual check.
inline VecX tikhonov_solve(const DiscreteOperator& op, const SingularSystem& sys,
                           const VecX& b, double alpha, bool check_residual = true) {
    if (!(alpha > 0.0)) throw parameter_error("tikhonov_solve: alpha must be positive");
    const VecX gb = op.range_space.gram * b;
    const VecX bn = sys.left.transpose() * gb;
    VecX coef(sys.mu.size());
    for (Eigen::Index i = 0; i < sys.mu.size(); ++i)
        coef(i) = sys.mu(i) * bn(i) / (alpha + sys.lambda(i));
    VecX phi = sys.right * coef;
    if (check_residual) {
        const VecX rstar_b = op.domain_space.llt.solve(op.matrix.transpose() * gb);
        const VecX lhs = alpha * phi + op.domain_space.llt.solve(
                             op.matrix.transpose() * (op.range_space.gram * (op.matrix * phi)));
        const double rel = op.domain_space.norm(lhs - rstar_b);
        const double scale = op.domain_space.norm(rstar_b);
        // attainable accuracy floor: both sides are computed through matrix
        // products whose roundoff scales with the top of the spectrum, not
        // with ||R* b||
        const double mu1 = sys.mu.size() > 0 ? sys.mu(0) : 0.0;
        const double floor = 1e-12 * ((alpha + mu1 * mu1) * op.domain_space.norm(phi) +
                                      mu1 * op.range_space.norm(b));
        if (rel > 1e-10 * scale + floor)
            throw solver_error("tikhonov_solve: normal-equations residual check failed");
    }
    return phi;
}

inline VecX tikhonov_solve(const DiscreteOperator& op, const VecX& b, double alpha) {
    return tikhonov_solve(op, singular_system(op), b, alpha);
}

// ---- binary dumps (little-endian float64, 16-byte header) ----

inline void write_matrix_binary(const std::string& path, const MatX& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw error("write_matrix_binary: cannot open " + path);
    const char magic[8] = {'R', 'T', 'N', 'R', 'T', 'M', 'A', 'T'};
    const std::uint32_t rows = std::uint32_t(m.rows());
    const std::uint32_t cols = std::uint32_t(m.cols());
    os.write(magic, 8);
    os.write(reinterpret_cast<const char*>(&rows), 4);
    os.write(reinterpret_cast<const char*>(&cols), 4);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            os.write(reinterpret_cast<const char*>(&v), 8);
        }
}

inline MatX read_matrix_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error("read_matrix_binary: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, "RTNRTMAT", 8) != 0)
        throw error("read_matrix_binary: bad magic in " + path);
    std::uint32_t rows = 0, cols = 0;
    is.read(reinterpret_cast<char*>(&rows), 4);
    is.read(reinterpret_cast<char*>(&cols), 4);
    MatX m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j) {
            double v;
            is.read(reinterpret_cast<char*>(&v), 8);
            m(i, j) = v;
        }
    if (!is) throw error("read_matrix_binary: truncated file " + path);
    return m;
}

} // namespace rtnrt
