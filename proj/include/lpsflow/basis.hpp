#pragma once

// One-dimensional nodal Lagrange bases (GLL or equispaced nodes), Gauss and
// Gauss-Lobatto-Legendre quadrature and the 1D matrices that the tensor-product
// element kernels are built from.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lpsflow/errors.hpp"

namespace lpsflow {

enum class NodeSpacing { GLL, Equispaced };

inline const char* to_string(NodeSpacing s) { return s == NodeSpacing::GLL ? "gll" : "equispaced"; }

struct QuadratureRule {
    std::vector<double> points;  ///< in [-1, 1]
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

/// Nodal basis of degree p on the reference interval [-1, 1].
struct Basis1D {
    int order = 0;
    NodeSpacing spacing = NodeSpacing::GLL;
    std::vector<double> nodes;         ///< p+1 increasing nodes, nodes[0] = -1, nodes[p] = 1
    std::vector<double> quad_weights;  ///< GLL weights of the same order
    std::vector<double> diff_matrix;   ///< row-major, D[i*(p+1)+j] = l_j'(nodes[i])

    int size() const { return order + 1; }
    double diff(int i, int j) const { return diff_matrix[static_cast<std::size_t>(i * size() + j)]; }
};

namespace detail {

struct LegendreValues {
    double value;       // P_n(x)
    double previous;    // P_{n-1}(x)
    double derivative;  // P_n'(x)
};

// Three-term recurrence. The derivative formula is singular at x = +-1, where
// the closed form P_n'(+-1) = (+-1)^{n-1} n(n+1)/2 is used instead.
inline LegendreValues legendre(int n, double x) {
    if (n == 0) return {1.0, 0.0, 0.0};
    double pm1 = 1.0, p = x;
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
        pm1 = p;
        p = pk;
    }
    double dp;
    if (std::abs(1.0 - x * x) < 1e-300) {
        dp = 0.5 * n * (n + 1.0) * ((x > 0 || n % 2 == 1) ? 1.0 : -1.0);
    } else {
        dp = n * (pm1 - x * p) / (1.0 - x * x);
    }
    return {p, pm1, dp};
}

} // namespace detail

inline double legendre_value(int n, double x) { return detail::legendre(n, x).value; }

inline double legendre_derivative(int n, double x) { return detail::legendre(n, x).derivative; }

/// Gauss-Lobatto-Legendre points and weights with p+1 points.
/// Newton iteration seeded with Chebyshev-Gauss-Lobatto points.
inline QuadratureRule gll_rule(int p, double tol = 1e-15, int max_iters = 100) {
    LPSFLOW_REQUIRE(p >= 1, InvalidArgument, "gll_rule: order must be >= 1");
    const int n = p + 1;
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = -std::cos(std::numbers::pi * i / p);
        if (i != 0 && i != p) {
            // roots of (1-x^2) P_p'(x): Newton on P_p' with its derivative from
            // the Legendre ODE, (1-x^2) P'' = 2x P' - p(p+1) P.
            int it = 0;
            double step = 1.0;
            for (; it < max_iters && std::abs(step) > tol; ++it) {
                const auto lv = detail::legendre(p, x);
                const double d2 = (2.0 * x * lv.derivative - p * (p + 1.0) * lv.value) / (1.0 - x * x);
                step = lv.derivative / d2;
                x -= step;
            }
            if (std::abs(step) > tol) {
                throw ConvergenceError("gll_rule: Newton iteration for node " + std::to_string(i) +
                                           " of order " + std::to_string(p) + " did not converge",
                                       it, std::abs(step));
            }
        }
        rule.points[i] = x;
    }
    // symmetrize to remove round-off asymmetry
    for (int i = 0; i < n / 2; ++i) {
        const double a = 0.5 * (rule.points[n - 1 - i] - rule.points[i]);
        rule.points[i] = -a;
        rule.points[n - 1 - i] = a;
    }
    if (n % 2 == 1) rule.points[n / 2] = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lp = legendre_value(p, rule.points[i]);
        rule.weights[i] = 2.0 / (p * (p + 1.0) * lp * lp);
    }
    return rule;
}

/// Gauss-Legendre rule with n points, exact for polynomials of degree 2n-1.
inline QuadratureRule gauss_legendre_rule(int n, double tol = 1e-15, int max_iters = 100) {
    LPSFLOW_REQUIRE(n >= 1, InvalidArgument, "gauss_legendre_rule: need at least one point");
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        int it = 0;
        double step = 1.0;
        for (; it < max_iters && std::abs(step) > tol; ++it) {
            const auto lv = detail::legendre(n, x);
            step = lv.value / lv.derivative;
            x -= step;
        }
        if (std::abs(step) > tol) {
            throw ConvergenceError("gauss_legendre_rule: Newton iteration did not converge", it, std::abs(step));
        }
        const double dp = detail::legendre(n, x).derivative;
        rule.points[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

/// Values of all Lagrange polynomials on `nodes` at x.
inline std::vector<double> lagrange_values(const std::vector<double>& nodes, double x) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> out(n, 1.0);
    for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
            if (m != j) out[j] *= (x - nodes[m]) / (nodes[j] - nodes[m]);
        }
    }
    return out;
}

/// Derivatives of all Lagrange polynomials on `nodes` at x (valid at nodes too).
inline std::vector<double> lagrange_derivatives(const std::vector<double>& nodes, double x) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int m = 0; m < n; ++m) {
            if (m == j) continue;
            double prod = 1.0 / (nodes[j] - nodes[m]);
            for (int l = 0; l < n; ++l) {
                if (l != j && l != m) prod *= (x - nodes[l]) / (nodes[j] - nodes[l]);
            }
            sum += prod;
        }
        out[j] = sum;
    }
    return out;
}

namespace detail {

// Barycentric differentiation matrix; the diagonal is the negative row sum so
// that constants are annihilated to round-off.
inline std::vector<double> differentiation_matrix(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> lambda(n, 1.0);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
            if (m != j) lambda[j] /= (x[j] - x[m]);
    std::vector<double> d(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = (lambda[j] / lambda[i]) / (x[i] - x[j]);
            d[i * n + j] = v;
            row += v;
        }
        d[i * n + i] = -row;
    }
    return d;
}

} // namespace detail

/// Spectral-element basis: nodes at the GLL points.
inline Basis1D gll_basis(int p) {
    LPSFLOW_REQUIRE(p >= 1, InvalidArgument, "gll_basis: order must be >= 1");
    LPSFLOW_REQUIRE(p <= 16, InvalidArgument, "gll_basis: order above 16 is not supported");
    auto rule = gll_rule(p);
    Basis1D b;
    b.order = p;
    b.spacing = NodeSpacing::GLL;
    b.nodes = rule.points;
    b.quad_weights = rule.weights;
    b.diff_matrix = detail::differentiation_matrix(b.nodes);
    return b;
}

/// Standard Lagrange basis: uniformly spaced nodes. Quadrature weights are
/// still the GLL weights of the same order (they are not collocated with the
/// nodes for p >= 3).
inline Basis1D equispaced_basis(int p) {
    LPSFLOW_REQUIRE(p >= 1, InvalidArgument, "equispaced_basis: order must be >= 1");
    LPSFLOW_REQUIRE(p <= 16, InvalidArgument, "equispaced_basis: order above 16 is not supported");
    Basis1D b;
    b.order = p;
    b.spacing = NodeSpacing::Equispaced;
    b.nodes.resize(p + 1);
    for (int i = 0; i <= p; ++i) b.nodes[i] = -1.0 + 2.0 * i / p;
    if (p % 2 == 0) b.nodes[p / 2] = 0.0;
    b.quad_weights = gll_rule(p).weights;
    b.diff_matrix = detail::differentiation_matrix(b.nodes);
    return b;
}

inline Basis1D make_basis(NodeSpacing spacing, int p) {
    return spacing == NodeSpacing::GLL ? gll_basis(p) : equispaced_basis(p);
}

} // namespace lpsflow
