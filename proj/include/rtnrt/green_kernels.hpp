#pragma once

#include "rtnrt/common.hpp"

#include <cmath>

namespace rtnrt {

/// Kernel value together with both first gradients.
struct KernelEval {
    double value = 0.0;
    Vec2 grad_x{0.0, 0.0};
    Vec2 grad_y{0.0, 0.0};
};

inline constexpr int green_derivative_order_max = 12;

/// 2D fundamental solution -(1/2pi) log|x-y| of the Laplacian.
inline KernelEval fundamental_solution(const Vec2& x, const Vec2& y) {
    const Vec2 d = x - y;
    const double r2 = d.squaredNorm();
    if (r2 == 0.0) throw singular_evaluation_error("fundamental_solution: x == y");
    KernelEval k;
    k.value = -std::log(r2) / (4.0 * pi);
    k.grad_x = -d / (2.0 * pi * r2);
    k.grad_y = -k.grad_x;
    return k;
}

/// Dirichlet Green function of the unit disk by the method of images:
///   G(x,y) = -(1/2pi) [ log|x-y| - log(|y| |x - y/|y|^2|) ].
/// The image factor is evaluated as B^2 = |x|^2|y|^2 - 2 x.y + 1, which is
/// smooth through y = 0 (limit B = 1).
inline KernelEval dirichlet_green_disk(const Vec2& x, const Vec2& y) {
    if (x.squaredNorm() > 1.0 + 1e-12)
        throw parameter_error("dirichlet_green_disk: |x| must be <= 1");
    if (y.squaredNorm() >= 1.0)
        throw parameter_error("dirichlet_green_disk: |y| must be < 1");
    const Vec2 d = x - y;
    const double a2 = d.squaredNorm();
    if (a2 == 0.0) throw singular_evaluation_error("dirichlet_green_disk: x == y");
    const double b2 = x.squaredNorm() * y.squaredNorm() - 2.0 * x.dot(y) + 1.0;
    KernelEval k;
    k.value = -(std::log(a2) - std::log(b2)) / (4.0 * pi);
    k.grad_x = -(d / a2 - (y.squaredNorm() * x - y) / b2) / (2.0 * pi);
    k.grad_y = -(-d / a2 - (x.squaredNorm() * y - x) / b2) / (2.0 * pi);
    return k;
}

/// Normal derivative of the disk Green function at a boundary point x,
/// |x| = 1: the (negated) Poisson kernel -(1/2pi)(1-|y|^2)/|x-y|^2.
inline double normal_derivative_green_on_boundary(const Vec2& x, const Vec2& y) {
    if (std::abs(x.norm() - 1.0) > 1e-10)
        throw parameter_error("normal_derivative_green_on_boundary: x must lie on the unit circle");
    if (y.squaredNorm() >= 1.0)
        throw parameter_error("normal_derivative_green_on_boundary: |y| must be < 1");
    const double r2 = (x - y).squaredNorm();
    return -(1.0 - y.squaredNorm()) / (2.0 * pi * r2);
}

/// (h.grad_z)^ell G(x,z) for the disk Green function, via the complex-log
/// form: with X, Z complex and H = h1 + i h2,
///   G(x,z) = -(1/2pi) Re[ log(X-Z) - log(1 - conj(X) Z) ],
///   (h.grad_z)^ell Re F(Z) = Re( H^ell F^(ell)(Z) ).
inline double directional_derivative_green(const Vec2& h, int order,
                                           const Vec2& x, const Vec2& z) {
    if (order < 0 || order > green_derivative_order_max)
        throw parameter_error("directional_derivative_green: order must be in [0, 12]");
    if (order == 0) return dirichlet_green_disk(x, z).value;
    if ((x - z).squaredNorm() == 0.0)
        throw singular_evaluation_error("directional_derivative_green: x == z");
    const Complex X = to_complex(x);
    const Complex Z = to_complex(z);
    const Complex H = to_complex(h);
    double fact = 1.0;
    for (int m = 1; m < order; ++m) fact *= double(m); // (ell-1)!
    const Complex Hl = std::pow(H, order);
    const Complex direct = std::pow(X - Z, -order);
    const Complex image = std::pow(std::conj(X), order) * std::pow(1.0 - std::conj(X) * Z, -order);
    return fact / (2.0 * pi) * std::real(Hl * (direct - image));
}

} // namespace rtnrt
