#include "rtnrt/boundary_operators.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <functional>

using namespace rtnrt;

namespace {

InnerProductSpace identity_space(const BoundaryCurve& c) {
    InnerProductSpace sp;
    sp.curve = c;
    sp.sobolev_order = 0.0;
    sp.gram = MatX::Identity(c.size(), c.size());
    sp.llt.compute(sp.gram);
    return sp;
}

VecX sample(const BoundaryCurve& c, const std::function<double(double)>& f) {
    VecX v(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) v(j) = f(c.params[j]);
    return v;
}

} // namespace

TEST(MakeSpace, L2GramIsWeightDiagonal) {
    const auto poly = make_convex_polygon({Vec2(-0.2, -0.2), Vec2(0.25, -0.15), Vec2(0.0, 0.3)},
                                          8, 2.0);
    const auto sp = make_space(poly, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i)
        EXPECT_NEAR(sp.gram(i, i), poly.weights[i], 1e-15);
    EXPECT_NEAR(sp.norm(VecX::Ones(poly.size())), std::sqrt(poly.perimeter()), 1e-12);

    const auto circ = make_circle(Vec2(0, 0), 0.7, 32);
    const auto sp0 = make_space(circ, 0.0);
    EXPECT_NEAR(sp0.norm(VecX::Ones(32)), std::sqrt(2.0 * pi * 0.7), 1e-12);
}

TEST(MakeSpace, FourierNormOfSingleMode) {
    const double r = 0.6;
    const auto c = make_circle(Vec2(0, 0), r, 64);
    const auto sp = make_space(c, -0.5);
    const VecX v = sample(c, [](double t) { return std::cos(8.0 * t); });
    // direct Fourier-sum oracle: ||cos(8t)||^2 = (P/2) (1+64)^{-1/2}
    const double direct = pi * r * std::pow(65.0, -0.5);
    EXPECT_NEAR(sp.inner(v, v), direct, 1e-12);
    EXPECT_LT((sp.gram - sp.gram.transpose()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(MakeSpace, SobolevOrderMonotonicityOnMeanZero) {
    const auto c = make_circle(Vec2(0, 0), 1.0, 64);
    const auto sm = make_space(c, -0.5);
    const auto s0 = make_space(c, 0.0);
    const auto sp = make_space(c, 0.5);
    auto gen = testsup::rng(3);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 20; ++it) {
        VecX v(64);
        for (int j = 0; j < 64; ++j) v(j) = nd(gen);
        v.array() -= v.mean();
        EXPECT_LE(sm.norm(v), s0.norm(v) * (1.0 + 1e-12));
        EXPECT_LE(s0.norm(v), sp.norm(v) * (1.0 + 1e-12));
    }
    EXPECT_THROW(make_space(c, 0.25), parameter_error);
}

TEST(SingleLayer, ConstantDensityAtCenter) {
    const double rho = 0.4;
    const auto g = make_circle(Vec2(0, 0), rho, 64);
    // quadrature of the disk Green kernel at the center against density 1
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        s += g.weights[j] * dirichlet_green_disk(Vec2(0, 0), g.nodes[j]).value;
    // 1D radial oracle: S[1](0) = -rho log rho
    const double oracle = testsup::adaptive_simpson(
        [&](double t) {
            return rho * dirichlet_green_disk(Vec2(0, 0),
                                              Vec2(rho * std::cos(t), rho * std::sin(t))).value;
        },
        0.0, 2.0 * pi, 1e-13);
    EXPECT_NEAR(s, -rho * std::log(rho), 1e-12);
    EXPECT_NEAR(s, oracle, 1e-11);
}

TEST(SingleLayer, TraceSymbolOnCircle) {
    const double rho = 0.5;
    const auto g = make_circle(Vec2(0, 0), rho, 64);
    const auto op = assemble_single_layer(g);
    // S[cos nt] = (rho/2n)(1 - rho^{2n}) cos nt, S[1] = -rho log rho
    for (int n : {1, 2, 5, 11}) {
        const VecX in = sample(g, [n](double t) { return std::cos(n * t); });
        const VecX out = op.matrix * in;
        const double sym = rho / (2.0 * n) * (1.0 - std::pow(rho, 2 * n));
        EXPECT_LT((out - sym * in).cwiseAbs().maxCoeff(), 1e-12) << "mode " << n;
    }
    const VecX ones = VecX::Ones(g.size());
    EXPECT_LT(((op.matrix * ones).array() + rho * std::log(rho)).abs().maxCoeff(), 1e-12);
    // kernel symmetry carries to the matrix on the uniform circle grid
    EXPECT_LT((op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SingleLayer, FieldVanishesTowardBoundary) {
    const auto g = make_circle(Vec2(0.1, 0), 0.3, 64);
    const VecX phi = sample(g, [](double t) { return 1.0 + 0.5 * std::sin(t); });
    double at_09 = 0.0, at_0999 = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        at_09 += g.weights[j] * phi(j) * dirichlet_green_disk(Vec2(0.9, 0), g.nodes[j]).value;
        at_0999 += g.weights[j] * phi(j) *
                   dirichlet_green_disk(Vec2(0.999, 0), g.nodes[j]).value;
    }
    EXPECT_LT(std::abs(at_0999), std::abs(at_09) * 0.05);
}

TEST(SingleLayer, IntersectingCurvesRejected) {
    const auto a = make_circle(Vec2(0, 0), 0.5, 32);
    const auto b = make_circle(Vec2(0.4, 0), 0.3, 32);
    EXPECT_THROW(assemble_single_layer(a, b), geometry_error);
}

TEST(OperatorR, SymbolOnConcentricCircles) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 128);
    const double g = 0.5;
    const auto gc = make_circle(Vec2(0, 0), g, 96);
    const auto op = assemble_R(gc, omega);
    for (int n : {0, 1, 2, 5, 10}) {
        const VecX in = sample(gc, [n](double t) { return std::cos(n * t); });
        const VecX expect = sample(omega, [&](double t) {
            return -std::pow(g, n + 1) * std::cos(n * t);
        });
        EXPECT_LT(((op.matrix * in) - expect).cwiseAbs().maxCoeff(), 1e-12) << "mode " << n;
    }
}

TEST(OperatorR, FluxIdentity) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 96);
    const auto gc = make_circle(Vec2(0.2, -0.1), 0.35, 64);
    const auto op = assemble_R(gc, omega);
    auto gen = testsup::rng(5);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 10; ++it) {
        VecX phi(gc.size());
        for (std::size_t j = 0; j < gc.size(); ++j) phi(j) = nd(gen);
        const VecX rphi = op.matrix * phi;
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < omega.size(); ++i) lhs += omega.weights[i] * rphi(i);
        for (std::size_t j = 0; j < gc.size(); ++j) rhs += gc.weights[j] * phi(j);
        EXPECT_NEAR(lhs, -rhs, 1e-8 * std::max(1.0, std::abs(rhs)));
    }
    EXPECT_LT((op.matrix * VecX::Zero(gc.size())).cwiseAbs().maxCoeff(), 1e-300);
}

TEST(Adjoint, DefiningIdentityAndInvolution) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 64);
    const auto gc = make_circle(Vec2(0.1, 0.15), 0.3, 48);
    const auto r = assemble_R(gc, omega);
    const auto rs = assemble_adjoint(r);
    auto gen = testsup::rng(9);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 50; ++it) {
        VecX phi(gc.size()), psi(omega.size());
        for (std::size_t j = 0; j < gc.size(); ++j) phi(j) = nd(gen);
        for (std::size_t j = 0; j < omega.size(); ++j) psi(j) = nd(gen);
        const double a = r.range_space.inner(r.matrix * phi, psi);
        const double b = r.domain_space.inner(phi, rs.matrix * psi);
        EXPECT_NEAR(a, b, 1e-10 * r.domain_space.norm(phi) * r.range_space.norm(psi));
    }
    const auto rss = assemble_adjoint(rs);
    EXPECT_LT((rss.matrix - r.matrix).cwiseAbs().maxCoeff(),
              1e-12 * r.matrix.cwiseAbs().maxCoeff());
}

TEST(Adjoint, IdentityGramsGiveTranspose) {
    const auto c = make_circle(Vec2(0, 0), 0.5, 16);
    DiscreteOperator op;
    op.matrix = MatX::Random(16, 16);
    op.domain_space = identity_space(c);
    op.range_space = identity_space(c);
    const auto adj = assemble_adjoint(op);
    EXPECT_LT((adj.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(RDual, ConsistencyWithAdjointThroughRieszMaps) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 64);
    const auto gc = make_circle(Vec2(-0.05, 0.2), 0.4, 48);
    const auto r = assemble_R(gc, omega);
    const auto rstar = assemble_adjoint(r);
    const auto rdual = assemble_R_dual(omega, gc);
    // J_X = G0_X^{-1} G_X with G0 the L2 Gram; identity: R* = J_X^{-1} R^(*) J_Y
    const auto g0x = make_space(gc, 0.0);
    const auto g0y = make_space(omega, 0.0);
    const MatX jx = g0x.llt.solve(r.domain_space.gram);
    const MatX jy = g0y.llt.solve(r.range_space.gram);
    const MatX rhs = jx.lu().solve(rdual.matrix * jy);
    EXPECT_LT((rstar.matrix - rhs).cwiseAbs().maxCoeff(),
              1e-10 * rstar.matrix.cwiseAbs().maxCoeff());
    EXPECT_LT((rdual.matrix * VecX::Zero(omega.size())).cwiseAbs().maxCoeff(), 1e-300);
}

TEST(RDual, FieldIsHarmonic) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 96);
    const VecX eta = sample(omega, [](double t) { return std::exp(std::cos(t)); });
    auto gen = testsup::rng(21);
    for (int i = 0; i < 20; ++i) {
        const Vec2 y = testsup::random_point_in_disk(gen, 0.7);
        const double lap = testsup::fd_laplacian(
            [&](const Vec2& p) { return eval_R_dual(omega, eta, p); }, y);
        const double scale = std::abs(eval_R_dual(omega, eta, y)) + 1.0;
        EXPECT_LT(std::abs(lap) / scale, 1e-5);
    }
}

TEST(OperatorW, GaussConstantAndTraceJump) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 64);
    const VecX ones = VecX::Ones(omega.size());
    // interior field of the double layer of 1 is -1
    EXPECT_NEAR(eval_W(omega, ones, Vec2(0.2, 0.1)), -1.0, 1e-12);
    // interior jump trace: (-1/2 I + K)[1] = -1 on the curve
    const auto trace = assemble_W(omega);
    EXPECT_LT(((trace.matrix * ones).array() + 1.0).abs().maxCoeff(), 1e-12);
    // trace symbol: modes n >= 1 map to -1/2 cos(n t)
    for (int n : {1, 3, 7}) {
        const VecX in = sample(omega, [n](double t) { return std::cos(n * t); });
        EXPECT_LT(((trace.matrix * in) + 0.5 * in).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(OperatorW, HarmonicAndLinear) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 96);
    const VecX phi = sample(omega, [](double t) { return std::cos(2.0 * t) + 0.3 * std::sin(t); });
    const VecX psi = sample(omega, [](double t) { return std::sin(3.0 * t); });
    auto gen = testsup::rng(31);
    for (int i = 0; i < 10; ++i) {
        const Vec2 p = testsup::random_point_in_disk(gen, 0.7);
        const double lap =
            testsup::fd_laplacian([&](const Vec2& q) { return eval_W(omega, phi, q); }, p);
        EXPECT_LT(std::abs(lap), 1e-5 * (std::abs(eval_W(omega, phi, p)) + 1.0));
        const double lin = eval_W(omega, 2.0 * phi + 3.0 * psi, p) -
                           (2.0 * eval_W(omega, phi, p) + 3.0 * eval_W(omega, psi, p));
        EXPECT_NEAR(lin, 0.0, 1e-13);
    }
}

TEST(SingularSystemOp, IdentityAndRankOne) {
    const auto c = make_circle(Vec2(0, 0), 0.5, 16);
    DiscreteOperator op;
    op.matrix = MatX::Identity(16, 16);
    op.domain_space = identity_space(c);
    op.range_space = identity_space(c);
    auto sys = singular_system(op);
    for (Eigen::Index i = 0; i < sys.mu.size(); ++i) EXPECT_NEAR(sys.mu(i), 1.0, 1e-13);

    const VecX u = VecX::LinSpaced(16, 1.0, 2.0), v = VecX::LinSpaced(16, -1.0, 0.5);
    op.matrix = u * v.transpose();
    sys = singular_system(op);
    EXPECT_NEAR(sys.mu(0), u.norm() * v.norm(), 1e-12);
    for (Eigen::Index i = 1; i < sys.mu.size(); ++i) EXPECT_LT(sys.mu(i), 1e-13 * sys.mu(0));
}

TEST(SingularSystemOp, ConcentricSymbolValuesAndInvariants) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 96);
    const double g = 0.5;
    const auto gc = make_circle(Vec2(0, 0), g, 64);
    const auto op = assemble_R(gc, omega);
    const auto sys = singular_system(op);
    // closed form: mu = { sqrt(g), g^{3/2} x2, g^{5/2} x2, ... } decreasing
    EXPECT_NEAR(sys.mu(0), std::sqrt(g), 1e-10);
    EXPECT_NEAR(sys.mu(1), std::pow(g, 1.5), 1e-10);
    EXPECT_NEAR(sys.mu(2), std::pow(g, 1.5), 1e-10);
    EXPECT_NEAR(sys.mu(3), std::pow(g, 2.5), 1e-10);
    for (Eigen::Index i = 1; i < sys.mu.size(); ++i) EXPECT_LE(sys.mu(i), sys.mu(i - 1) + 1e-15);

    // log-linear decay over the top 15 modes
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 15; ++i) {
        const double y = std::log(sys.mu(i));
        sx += i; sy += y; sxx += double(i) * i; sxy += i * y;
    }
    const double slope = (15.0 * sxy - sx * sy) / (15.0 * sxx - sx * sx);
    EXPECT_NEAR(slope, 0.5 * std::log(g), 0.2 * std::abs(std::log(g)));

    // Gram-orthonormality of both families
    const MatX gv = sys.right.transpose() * op.domain_space.gram * sys.right;
    const MatX gu = sys.left.transpose() * op.range_space.gram * sys.left;
    EXPECT_LT((gv - MatX::Identity(gv.rows(), gv.cols())).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((gu - MatX::Identity(gu.rows(), gu.cols())).cwiseAbs().maxCoeff(), 1e-10);

    // reconstruction A = sum mu_n u_n (G_X v_n)^T
    MatX rec = MatX::Zero(op.matrix.rows(), op.matrix.cols());
    for (Eigen::Index n = 0; n < sys.mu.size(); ++n)
        rec += sys.mu(n) * sys.left.col(n) *
               (op.domain_space.gram * sys.right.col(n)).transpose();
    EXPECT_LT((rec - op.matrix).cwiseAbs().maxCoeff(), 1e-10 * sys.mu(0));
}

TEST(Tikhonov, SingleModeClosedFormAndLimits) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 64);
    const auto gc = make_circle(Vec2(0, 0), 0.5, 48);
    const auto op = assemble_R(gc, omega);
    const auto sys = singular_system(op);

    const VecX b = op.matrix * sys.right.col(0); // b = R v_1
    for (double alpha : {1e-2, 1e-4, 1e-8}) {
        const VecX phi = tikhonov_solve(op, sys, b, alpha);
        const double factor = sys.lambda(0) / (alpha + sys.lambda(0));
        EXPECT_LT((phi - factor * sys.right.col(0)).cwiseAbs().maxCoeff(), 1e-10);
    }
    // over-regularization limit
    EXPECT_LT(op.domain_space.norm(tikhonov_solve(op, sys, b, 1e12)), 1e-10);
    EXPECT_THROW(tikhonov_solve(op, sys, b, 0.0), parameter_error);
    EXPECT_THROW(tikhonov_solve(op, sys, b, -1.0), parameter_error);
}

TEST(Tikhonov, MatchesDenseNormalEquations) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 64);
    const auto gc = make_circle(Vec2(0.1, -0.2), 0.35, 48);
    const auto op = assemble_R(gc, omega);
    const auto sys = singular_system(op);
    const VecX b = sample(omega, [](double t) { return std::cos(t) + 0.2 * std::sin(3 * t); });
    for (double alpha : {1e-3, 1e-6}) {
        const VecX phi = tikhonov_solve(op, sys, b, alpha);
        // dense oracle: (alpha G_X + R^T G_Y R) phi = R^T G_Y b
        const MatX lhs = alpha * op.domain_space.gram +
                         op.matrix.transpose() * op.range_space.gram * op.matrix;
        const VecX rhs = op.matrix.transpose() * op.range_space.gram * b;
        const VecX dense = lhs.ldlt().solve(rhs);
        // the dense route is conditioning-limited at small alpha
        EXPECT_LT((phi - dense).cwiseAbs().maxCoeff(),
                  1e-6 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
    }
}

TEST(Tikhonov, NormMonotoneInAlpha) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 64);
    const auto gc = make_circle(Vec2(0, 0.1), 0.4, 32);
    const auto op = assemble_R(gc, omega);
    const auto sys = singular_system(op);
    const VecX b =
        sample(omega, [](double t) { return std::exp(std::cos(t)) * std::cos(std::sin(t)); });
    double prev = -1.0;
    for (int k = 0; k < 30; ++k) {
        const double alpha = 1e-2 * std::pow(0.5, k);
        const double n = op.domain_space.norm(tikhonov_solve(op, sys, b, alpha));
        EXPECT_GE(n, prev * (1.0 - 1e-12));
        prev = n;
    }
}

// Appendix surrogates at unit-test scale
TEST(AppendixInvariants, SingleLayerBijectivitySurrogate) {
    for (double r : {0.2, 0.5, 0.8}) {
        const auto g = make_circle(Vec2(0, 0), r, 64);
        const auto sys = singular_system(assemble_single_layer(g));
        const double mu_min = sys.mu(sys.mu.size() - 1);
        EXPECT_GT(mu_min, 0.0);
        EXPECT_LT(sys.mu(0) / mu_min, 1e8);
    }
}

TEST(AppendixInvariants, RInjectivitySurrogate) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 32);
    const auto gc = make_circle(Vec2(0, 0), 0.5, 32);
    const auto sys = singular_system(assemble_R(gc, omega));
    for (Eigen::Index i = 0; i < sys.mu.size(); ++i) EXPECT_GT(sys.mu(i), 0.0);
}

TEST(AppendixInvariants, WRangeDensenessSurrogate) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 128);
    const auto target = make_circle(Vec2(0.1, 0), 0.45, 64);
    const auto w = assemble_W(omega, target);
    auto gen = testsup::rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        VecX tgt = VecX::Zero(target.size());
        for (int k = 0; k <= 3; ++k) {
            const double a = u(gen), b = u(gen);
            for (std::size_t j = 0; j < target.size(); ++j)
                tgt(j) += a * std::cos(k * target.params[j]) + b * std::sin(k * target.params[j]);
        }
        double prev = 1e300;
        for (int m : {8, 16, 32}) {
            MatX basis(omega.size(), 2 * m + 1);
            for (std::size_t j = 0; j < omega.size(); ++j) {
                basis(j, 0) = 1.0;
                for (int k = 1; k <= m; ++k) {
                    basis(j, 2 * k - 1) = std::cos(k * omega.params[j]);
                    basis(j, 2 * k) = std::sin(k * omega.params[j]);
                }
            }
            const MatX a = w.matrix * basis;
            const VecX coef = a.colPivHouseholderQr().solve(tgt);
            const double res = (a * coef - tgt).norm();
            EXPECT_LT(res, prev * (1.0 + 1e-12));
            prev = res;
        }
    }
}

TEST(BinaryDump, MatrixRoundTrip) {
    const MatX m = MatX::Random(7, 5);
    const std::string path = ::testing::TempDir() + "rtnrt_mat.bin";
    write_matrix_binary(path, m);
    const MatX back = read_matrix_binary(path);
    EXPECT_EQ(back.rows(), 7);
    EXPECT_EQ(back.cols(), 5);
    EXPECT_EQ((back - m).cwiseAbs().maxCoeff(), 0.0);
    std::remove(path.c_str());
}
