#pragma once

#include "rtnrt/common.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rtnrt {

enum class CurveKind { circle, ellipse, convex_polygon };

inline std::string to_string(CurveKind k) {
    switch (k) {
        case CurveKind::circle: return "circle";
        case CurveKind::ellipse: return "ellipse";
        case CurveKind::convex_polygon: return "convex_polygon";
    }
    return "unknown";
}

/// Closed positively oriented curve, stored fully discretized: nodes,
/// outward unit normals, arc-length quadrature weights and parameter
/// values in [0, 2pi). Immutable once constructed.
struct BoundaryCurve {
    CurveKind kind = CurveKind::circle;

    std::vector<Vec2> nodes;
    std::vector<Vec2> normals;
    std::vector<double> weights;
    std::vector<double> params;
    std::vector<double> curvatures; // 0 on polygon edges

    // kind-specific parameters
    Vec2 center{0.0, 0.0};
    double radius = 0.0;               // circle
    double semi_a = 0.0, semi_b = 0.0; // ellipse
    double rotation = 0.0;             // ellipse
    std::vector<Vec2> vertices;        // convex_polygon (CCW)
    int nodes_per_edge = 0;
    double grading = 1.0;

    // per-node flat panels (polygon only): exact-kernel integration support
    std::vector<Vec2> panel_a;
    std::vector<Vec2> panel_b;

    std::size_t size() const { return nodes.size(); }

    double perimeter() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }

    bool uniform_circle() const { return kind == CurveKind::circle; }

    bool is_unit_circle(double tol = 1e-12) const {
        return kind == CurveKind::circle && center.norm() <= tol &&
               std::abs(radius - 1.0) <= tol;
    }

    double node_spacing() const { return perimeter() / double(size()); }

    // shoelace area over the discretization nodes
    double signed_area() const {
        double a = 0.0;
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& p = nodes[i];
            const Vec2& q = nodes[(i + 1) % n];
            a += p.x() * q.y() - q.x() * p.y();
        }
        return 0.5 * a;
    }
};

inline BoundaryCurve make_circle(const Vec2& center, double radius, int n) {
    if (!(radius > 0.0)) throw parameter_error("make_circle: radius must be positive");
    if (n < 8 || n % 2 != 0) throw parameter_error("make_circle: need even n >= 8");
    BoundaryCurve c;
    c.kind = CurveKind::circle;
    c.center = center;
    c.radius = radius;
    c.nodes.reserve(n);
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * pi * double(j) / double(n);
        const Vec2 nu(std::cos(t), std::sin(t));
        c.params.push_back(t);
        c.nodes.push_back(center + radius * nu);
        c.normals.push_back(nu);
        c.weights.push_back(2.0 * pi * radius / double(n));
        c.curvatures.push_back(1.0 / radius);
    }
    return c;
}

inline BoundaryCurve make_ellipse(const Vec2& center, double a, double b,
                                  double rotation, int n) {
    if (!(a > 0.0) || !(b > 0.0)) throw parameter_error("make_ellipse: semi-axes must be positive");
    if (n < 8 || n % 2 != 0) throw parameter_error("make_ellipse: need even n >= 8");
    BoundaryCurve c;
    c.kind = CurveKind::ellipse;
    c.center = center;
    c.semi_a = a;
    c.semi_b = b;
    c.rotation = rotation;
    const double cr = std::cos(rotation), sr = std::sin(rotation);
    auto rot = [&](const Vec2& v) { return Vec2(cr * v.x() - sr * v.y(), sr * v.x() + cr * v.y()); };
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * pi * double(j) / double(n);
        const double ct = std::cos(t), st = std::sin(t);
        const double speed = std::hypot(a * st, b * ct);
        c.params.push_back(t);
        c.nodes.push_back(center + rot(Vec2(a * ct, b * st)));
        c.normals.push_back(rot(Vec2(b * ct, a * st)) / speed);
        c.weights.push_back(speed * 2.0 * pi / double(n));
        c.curvatures.push_back(a * b / (speed * speed * speed));
    }
    return c;
}

namespace detail {

// grading map on [0,1]: polynomial of degree p clustering toward both ends;
// p = 1 is the identity
inline double grading_map(double s, double p) {
    if (s <= 0.5) return 0.5 * std::pow(2.0 * s, p);
    return 1.0 - 0.5 * std::pow(2.0 * (1.0 - s), p);
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// +1 for strictly convex CCW, -1 for strictly convex CW, 0 otherwise
inline int convex_orientation(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    int sign = 0;
    double scale = 0.0;
    for (const Vec2& p : v) scale = std::max(scale, p.norm());
    const double tol = 1e-12 * std::max(1.0, scale * scale);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e1 = v[(i + 1) % n] - v[i];
        const Vec2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
        const double c = cross2(e1, e2);
        if (std::abs(c) <= tol) return 0; // collinear triple
        const int s = c > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) return 0;
    }
    return sign;
}

} // namespace detail

inline BoundaryCurve make_convex_polygon(std::vector<Vec2> vertices,
                                         int nodes_per_edge,
                                         double grading_exponent = 3.0) {
    if (vertices.size() < 3) throw geometry_error("make_convex_polygon: need at least 3 vertices");
    if (nodes_per_edge < 4) throw parameter_error("make_convex_polygon: need nodes_per_edge >= 4");
    if (!(grading_exponent >= 1.0)) throw parameter_error("make_convex_polygon: grading_exponent must be >= 1");
    const int orient = detail::convex_orientation(vertices);
    if (orient == 0) throw geometry_error("make_convex_polygon: vertices not in strictly convex position");
    if (orient < 0) std::reverse(vertices.begin(), vertices.end());

    BoundaryCurve c;
    c.kind = CurveKind::convex_polygon;
    c.vertices = vertices;
    c.nodes_per_edge = nodes_per_edge;
    c.grading = grading_exponent;
    const std::size_t ne = vertices.size();
    const int m = nodes_per_edge;
    for (std::size_t e = 0; e < ne; ++e) {
        const Vec2 a = vertices[e];
        const Vec2 b = vertices[(e + 1) % ne];
        const Vec2 d = b - a;
        const double len = d.norm();
        const Vec2 tangent = d / len;
        const Vec2 normal(tangent.y(), -tangent.x()); // outward for CCW
        for (int k = 0; k < m; ++k) {
            const double s0 = detail::grading_map(double(k) / m, grading_exponent);
            const double s1 = detail::grading_map(double(k + 1) / m, grading_exponent);
            const double sn = detail::grading_map((double(k) + 0.5) / m, grading_exponent);
            c.nodes.push_back(a + sn * d);
            c.normals.push_back(normal);
            c.weights.push_back(len * (s1 - s0));
            c.params.push_back(2.0 * pi * (double(e) + sn) / double(ne));
            c.curvatures.push_back(0.0);
            c.panel_a.push_back(a + s0 * d);
            c.panel_b.push_back(a + s1 * d);
        }
    }
    Vec2 centroid = Vec2::Zero();
    for (const Vec2& v : vertices) centroid += v;
    centroid /= double(ne);
    c.center = centroid;
    return c;
}

/// Candidate region sampled by the tests; carries an opaque id used for
/// deterministic result ordering.
struct TestDomain {
    BoundaryCurve curve;
    std::string id;
};

inline bool contains(const BoundaryCurve& c, const Vec2& p) {
    switch (c.kind) {
        case CurveKind::circle:
            return (p - c.center).norm() <= c.radius * (1.0 + 1e-14);
        case CurveKind::ellipse: {
            const double cr = std::cos(c.rotation), sr = std::sin(c.rotation);
            const Vec2 d = p - c.center;
            const Vec2 q(cr * d.x() + sr * d.y(), -sr * d.x() + cr * d.y());
            const double v = (q.x() / c.semi_a) * (q.x() / c.semi_a) +
                             (q.y() / c.semi_b) * (q.y() / c.semi_b);
            return v <= 1.0 + 1e-14;
        }
        case CurveKind::convex_polygon: {
            const std::size_t n = c.vertices.size();
            double scale = 0.0;
            for (const Vec2& v : c.vertices) scale = std::max(scale, v.norm());
            const double tol = 1e-13 * std::max(1.0, scale);
            for (std::size_t i = 0; i < n; ++i) {
                const Vec2 e = c.vertices[(i + 1) % n] - c.vertices[i];
                if (detail::cross2(e, p - c.vertices[i]) < -tol) return false;
            }
            return true;
        }
    }
    return false;
}

inline bool contains(const TestDomain& d, const Vec2& p) { return contains(d.curve, p); }

namespace detail {

// sample points capturing the extent of a curve: discretization nodes plus
// polygon vertices
inline std::vector<Vec2> extent_points(const BoundaryCurve& c) {
    std::vector<Vec2> pts = c.nodes;
    pts.insert(pts.end(), c.vertices.begin(), c.vertices.end());
    return pts;
}

} // namespace detail

inline double diameter(const BoundaryCurve& c) {
    const auto pts = detail::extent_points(c);
    double d2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d2 = std::max(d2, (pts[i] - pts[j]).squaredNorm());
    return std::sqrt(d2);
}

inline double distance_between(const BoundaryCurve& a, const BoundaryCurve& b) {
    const auto pa = detail::extent_points(a);
    const auto pb = detail::extent_points(b);
    double d2 = std::numeric_limits<double>::infinity();
    for (const Vec2& p : pa)
        for (const Vec2& q : pb) d2 = std::min(d2, (p - q).squaredNorm());
    return std::sqrt(d2);
}

inline bool strictly_inside(const BoundaryCurve& inner, const BoundaryCurve& omega) {
    for (const Vec2& p : detail::extent_points(inner))
        if (!contains(omega, p)) return false;
    return distance_between(inner, omega) > 0.0;
}

/// Transversal-intersection test on the discretizations: a closed curve
/// crosses another iff its sample points land on both sides.
inline bool curves_intersect(const BoundaryCurve& a, const BoundaryCurve& b) {
    const auto split = [](const BoundaryCurve& region, const BoundaryCurve& probe) {
        std::size_t in = 0, out = 0;
        for (const Vec2& p : detail::extent_points(probe))
            (contains(region, p) ? in : out)++;
        return in > 0 && out > 0;
    };
    return split(a, b) || split(b, a);
}

/// diam D < dist(D, boundary of Omega), evaluated over discretization nodes
/// plus polygon vertices
inline bool check_distance_property(const TestDomain& d, const BoundaryCurve& omega) {
    return diameter(d.curve) < distance_between(d.curve, omega);
}

/// Interior corner angles of a convex polygon curve, one per vertex.
inline std::vector<double> interior_angles(const BoundaryCurve& c) {
    if (c.kind != CurveKind::convex_polygon)
        throw parameter_error("interior_angles: polygon curves only");
    const std::size_t n = c.vertices.size();
    std::vector<double> angles(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 prev = c.vertices[(i + n - 1) % n] - c.vertices[i];
        const Vec2 next = c.vertices[(i + 1) % n] - c.vertices[i];
        angles[i] = std::acos(std::clamp(prev.dot(next) / (prev.norm() * next.norm()), -1.0, 1.0));
    }
    return angles;
}

/// Rationality of theta/(2pi) is numerically undecidable; this flags angles
/// within tol of a fraction q/p with small denominator p.
inline bool possibly_rational_angle(double theta, int max_denominator = 20,
                                    double tol = 1e-9) {
    const double x = theta / (2.0 * pi);
    for (int p = 1; p <= max_denominator; ++p) {
        const double q = std::round(x * p);
        if (q > 0.0 && std::abs(x - q / p) < tol) return true;
    }
    return false;
}

inline nlohmann::json to_json(const BoundaryCurve& c) {
    nlohmann::json j;
    j["kind"] = to_string(c.kind);
    j["N"] = c.size();
    switch (c.kind) {
        case CurveKind::circle:
            j["parameters"] = {{"center", {c.center.x(), c.center.y()}}, {"radius", c.radius}};
            break;
        case CurveKind::ellipse:
            j["parameters"] = {{"center", {c.center.x(), c.center.y()}},
                               {"semi_axes", {c.semi_a, c.semi_b}},
                               {"rotation", c.rotation}};
            break;
        case CurveKind::convex_polygon: {
            nlohmann::json verts = nlohmann::json::array();
            for (const Vec2& v : c.vertices) verts.push_back({v.x(), v.y()});
            j["parameters"] = {{"vertices", verts}, {"nodes_per_edge", c.nodes_per_edge}};
            j["grading"] = c.grading;
            break;
        }
    }
    return j;
}

inline void dump_nodes_csv(const BoundaryCurve& c, std::ostream& os) {
    os << "x,y,nx,ny,w\n";
    os.precision(17);
    for (std::size_t i = 0; i < c.size(); ++i)
        os << c.nodes[i].x() << ',' << c.nodes[i].y() << ','
           << c.normals[i].x() << ',' << c.normals[i].y() << ','
           << c.weights[i] << '\n';
}

} // namespace rtnrt
