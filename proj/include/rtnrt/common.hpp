#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace rtnrt {

using Vec2 = Eigen::Vector2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// invalid argument values (radii, node counts, schedules, ...)
class parameter_error : public error {
public:
    using error::error;
};

// inconsistent or degenerate geometry (non-convex input, intersecting curves, ...)
class geometry_error : public error {
public:
    using error::error;
};

// evaluation of a kernel at its singular point
class singular_evaluation_error : public error {
public:
    using error::error;
};

// linear-algebra failures (singular systems, failed residual checks)
class solver_error : public error {
public:
    using error::error;
};

// inner-product space construction failures (Gram not SPD)
class space_error : public error {
public:
    using error::error;
};

// all spectral modes removed by truncation
class degenerate_operator_error : public error {
public:
    using error::error;
};

// internal consistency violations (e.g. non-monotone Tikhonov path)
class internal_consistency_error : public error {
public:
    using error::error;
};

// reconstruction metric on an empty mask
class metric_error : public error {
public:
    using error::error;
};

// invalid sweep plan (e.g. NRT polygon domain outside the a priori polygon)
class plan_error : public error {
public:
    using error::error;
};

inline Complex to_complex(const Vec2& p) { return Complex(p.x(), p.y()); }

} // namespace rtnrt
