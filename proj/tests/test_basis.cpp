#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "lpsflow/basis.hpp"
#include "lpsflow/tensor_kernel.hpp"

using namespace lpsflow;

namespace {

double integrate(const std::vector<double>& pts, const std::vector<double>& w, int m) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) s += w[i] * std::pow(pts[i], m);
    return s;
}

double exact_monomial(int m) { return m % 2 ? 0.0 : 2.0 / (m + 1); }

} // namespace

TEST(GllBasis, LinearHasEndpointsOnly) {
    const auto b = gll_basis(1);
    ASSERT_EQ(b.nodes.size(), 2u);
    EXPECT_DOUBLE_EQ(b.nodes[0], -1.0);
    EXPECT_DOUBLE_EQ(b.nodes[1], 1.0);
    EXPECT_NEAR(b.quad_weights[0], 1.0, 1e-15);
    EXPECT_NEAR(b.quad_weights[1], 1.0, 1e-15);
}

TEST(GllBasis, QuadraticClosedForm) {
    const auto b = gll_basis(2);
    EXPECT_NEAR(b.nodes[1], 0.0, 1e-15);
    EXPECT_NEAR(b.quad_weights[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(b.quad_weights[1], 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(b.quad_weights[2], 1.0 / 3.0, 1e-15);
    for (int m = 0; m <= 3; ++m) EXPECT_NEAR(integrate(b.nodes, b.quad_weights, m), exact_monomial(m), 1e-14);
}

TEST(GllBasis, QuarticInnerNodes) {
    const auto b = gll_basis(4);
    ASSERT_EQ(b.nodes.size(), 5u);
    EXPECT_NEAR(b.nodes[1], -std::sqrt(3.0 / 7.0), 1e-14);
    EXPECT_NEAR(b.nodes[3], std::sqrt(3.0 / 7.0), 1e-14);
    EXPECT_NEAR(b.nodes[2], 0.0, 1e-15);
    for (double x : b.nodes) EXPECT_LT(std::abs((1 - x * x) * legendre_derivative(4, x)), 1e-12);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(b.nodes[i], -b.nodes[4 - i], 1e-15);
}

TEST(GllBasis, WeightFormula) {
    for (int p = 1; p <= 12; ++p) {
        const auto b = gll_basis(p);
        for (int i = 0; i <= p; ++i) {
            const double L = legendre_value(p, b.nodes[i]);
            EXPECT_NEAR(b.quad_weights[i], 2.0 / (p * (p + 1) * L * L), 1e-13) << "p=" << p;
        }
    }
}

TEST(GllBasis, InvariantsUpToOrder16) {
    for (int p = 1; p <= 16; ++p) {
        const auto b = gll_basis(p);
        EXPECT_EQ(b.nodes.front(), -1.0);
        EXPECT_EQ(b.nodes.back(), 1.0);
        for (int i = 0; i < p; ++i) EXPECT_LT(b.nodes[i], b.nodes[i + 1]);
        EXPECT_NEAR(std::accumulate(b.quad_weights.begin(), b.quad_weights.end(), 0.0), 2.0, 1e-14);
        for (double w : b.quad_weights) EXPECT_GT(w, 0.0);
        for (int i = 0; i <= p; ++i) {
            double row = 0.0;
            for (int j = 0; j <= p; ++j) row += b.diff(i, j);
            EXPECT_NEAR(row, 0.0, 1e-13 * std::max(1.0, double(p * p))) << "p=" << p;
        }
    }
}

TEST(GllBasis, QuadratureExactness) {
    for (int p = 1; p <= 8; ++p) {
        const auto b = gll_basis(p);
        for (int m = 0; m <= 2 * p - 1; ++m)
            EXPECT_NEAR(integrate(b.nodes, b.quad_weights, m), exact_monomial(m), 1e-12) << "p=" << p << " m=" << m;
    }
}

TEST(GllBasis, RejectsOrderZero) { EXPECT_THROW(gll_basis(0), InvalidArgument); }

TEST(EquispacedBasis, MatchesGllAtLowOrder) {
    const auto e1 = equispaced_basis(1), g1 = gll_basis(1);
    EXPECT_EQ(e1.nodes, g1.nodes);
    const auto e2 = equispaced_basis(2);
    EXPECT_EQ(e2.nodes[0], -1.0);
    EXPECT_EQ(e2.nodes[1], 0.0);
    EXPECT_EQ(e2.nodes[2], 1.0);
}

TEST(EquispacedBasis, CubicNodesDifferFromGll) {
    const auto e = equispaced_basis(3);
    const auto g = gll_basis(3);
    EXPECT_NEAR(e.nodes[1], -1.0 / 3.0, 1e-15);
    EXPECT_NEAR(e.nodes[2], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(g.nodes[1], -1.0 / std::sqrt(5.0), 1e-14);
    EXPECT_GT(std::abs(e.nodes[1] - g.nodes[1]), 0.1);
}

TEST(DiffMatrix, ReproducesPolynomialDerivatives) {
    for (auto spacing : {NodeSpacing::GLL, NodeSpacing::Equispaced}) {
        for (int p = 1; p <= 10; ++p) {
            const auto b = make_basis(spacing, p);
            for (int m = 0; m <= p; ++m) {
                for (int i = 0; i <= p; ++i) {
                    double d = 0.0;
                    for (int j = 0; j <= p; ++j) d += b.diff(i, j) * std::pow(b.nodes[j], m);
                    const double exact = m == 0 ? 0.0 : m * std::pow(b.nodes[i], m - 1);
                    EXPECT_NEAR(d, exact, 1e-12 * std::max(1.0, double(p * p))) << "p=" << p << " m=" << m;
                }
            }
        }
    }
}

TEST(GaussLegendre, Exactness) {
    for (int n = 1; n <= 12; ++n) {
        const auto r = gauss_legendre_rule(n);
        for (int m = 0; m <= 2 * n - 1; ++m)
            EXPECT_NEAR(integrate(r.points, r.weights, m), exact_monomial(m), 1e-13) << "n=" << n << " m=" << m;
    }
}

TEST(QuadratureModes, OverIntegratedExactToDeclaredDegree) {
    const auto b = gll_basis(3);
    for (int degree : {3, 6, 9, 12}) {
        const auto r = make_element_rule(b, QuadratureMode::over_integrated(degree));
        for (int m = 0; m <= degree; ++m)
            EXPECT_NEAR(integrate(r.points, r.weights, m), exact_monomial(m), 1e-13) << degree << " " << m;
    }
}

TEST(QuadratureModes, CollocatedMassIsDiagonal) {
    for (int p = 1; p <= 6; ++p) {
        const auto r = make_element_rule(gll_basis(p), QuadratureMode::collocated());
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j <= p; ++j) {
                double m = 0.0;
                for (int q = 0; q < r.q; ++q) m += r.weights[q] * r.interp[q * r.n + i] * r.interp[q * r.n + j];
                if (i != j) EXPECT_EQ(m, 0.0);
                else EXPECT_GT(m, 0.0);
            }
    }
}

TEST(QuadratureModes, CollocatedNeedsGllNodes) {
    EXPECT_THROW(make_element_rule(equispaced_basis(3), QuadratureMode::collocated()), InvalidArgument);
}

TEST(TensorGradient, ConstantFieldHasZeroGradient) {
    const auto r = make_element_rule(gll_basis(3), QuadratureMode::collocated());
    const std::vector<double> f(16, 2.5);
    const auto g = eval_tensor_gradient(r, 2, f);
    for (const auto& comp : g)
        for (double v : comp) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(TensorGradient, LinearFieldHasUnitGradient) {
    for (int p = 1; p <= 5; ++p) {
        const auto b = gll_basis(p);
        const auto r = make_element_rule(b, QuadratureMode::gauss());
        const int n = p + 1;
        std::vector<double> f(static_cast<std::size_t>(n * n * n));
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) f[i + n * (j + n * k)] = b.nodes[i];
        const auto g = eval_tensor_gradient(r, 3, f);
        for (double v : g[0]) EXPECT_NEAR(v, 1.0, 1e-12);
        for (double v : g[1]) EXPECT_NEAR(v, 0.0, 1e-12);
        for (double v : g[2]) EXPECT_NEAR(v, 0.0, 1e-12);
    }
}

TEST(TensorGradient, QuadraticOnGllNodes) {
    const auto b = gll_basis(2);
    const auto r = make_element_rule(b, QuadratureMode::collocated());
    std::vector<double> f;
    for (double x : b.nodes) f.push_back(x * x);
    const auto g = eval_tensor_gradient(r, 1, f);
    EXPECT_NEAR(g[0][0], -2.0, 1e-14);
    EXPECT_NEAR(g[0][1], 0.0, 1e-14);
    EXPECT_NEAR(g[0][2], 2.0, 1e-14);
}

TEST(TensorGradient, ShapeMismatchThrows) {
    const auto r = make_element_rule(gll_basis(2), QuadratureMode::collocated());
    const std::vector<double> f(8, 0.0);
    EXPECT_THROW(eval_tensor_gradient(r, 2, f), MeshMismatch);
}
