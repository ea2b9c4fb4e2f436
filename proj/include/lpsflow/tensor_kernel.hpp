#pragma once

// Sum-factorised tensor-product kernels: interpolation and differentiation from
// element nodes to quadrature points and their transposes.

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lpsflow/basis.hpp"
#include "lpsflow/errors.hpp"

namespace lpsflow {

/// Which quadrature the element integrals use.
///   Collocated:     GLL points of the basis order (requires a GLL basis, B = I)
///   Gauss:          p+1 Gauss-Legendre points
///   OverIntegrated: Gauss-Legendre exact up to `degree`
struct QuadratureMode {
    enum class Kind { Collocated, Gauss, OverIntegrated };
    Kind kind = Kind::Collocated;
    int degree = 0;

    static QuadratureMode collocated() { return {Kind::Collocated, 0}; }
    static QuadratureMode gauss() { return {Kind::Gauss, 0}; }
    static QuadratureMode over_integrated(int degree) { return {Kind::OverIntegrated, degree}; }
    /// Default for a basis: collocated for GLL nodes, Gauss otherwise.
    static QuadratureMode natural(NodeSpacing s) { return s == NodeSpacing::GLL ? collocated() : gauss(); }
};

/// 1D matrices from the p+1 basis nodes to the quadrature points.
struct ElementRule {
    int n = 0;                    // nodes per axis
    int q = 0;                    // quadrature points per axis
    bool collocated = false;      // interp is the identity
    std::vector<double> points;   // q reference points
    std::vector<double> weights;  // q reference weights
    std::vector<double> interp;   // q x n, row-major
    std::vector<double> deriv;    // q x n, reference derivative
    std::vector<double> interp_t; // n x q
    std::vector<double> deriv_t;  // n x q
};

inline ElementRule make_element_rule(const Basis1D& basis, QuadratureMode mode) {
    QuadratureRule rule;
    bool collocated = false;
    switch (mode.kind) {
    case QuadratureMode::Kind::Collocated:
        LPSFLOW_REQUIRE(basis.spacing == NodeSpacing::GLL, InvalidArgument,
                        "collocated quadrature requires GLL nodes");
        rule.points = basis.nodes;
        rule.weights = basis.quad_weights;
        collocated = true;
        break;
    case QuadratureMode::Kind::Gauss:
        rule = gauss_legendre_rule(basis.order + 1);
        break;
    case QuadratureMode::Kind::OverIntegrated: {
        LPSFLOW_REQUIRE(mode.degree >= 1, InvalidArgument, "over-integration degree must be >= 1");
        rule = gauss_legendre_rule((mode.degree + 2) / 2);
        break;
    }
    }
    ElementRule r;
    r.n = basis.size();
    r.q = rule.size();
    r.collocated = collocated;
    r.points = rule.points;
    r.weights = rule.weights;
    r.interp.assign(static_cast<std::size_t>(r.q * r.n), 0.0);
    r.deriv.assign(static_cast<std::size_t>(r.q * r.n), 0.0);
    for (int k = 0; k < r.q; ++k) {
        const auto v = lagrange_values(basis.nodes, rule.points[k]);
        const auto d = lagrange_derivatives(basis.nodes, rule.points[k]);
        for (int j = 0; j < r.n; ++j) {
            r.interp[k * r.n + j] = collocated ? (k == j ? 1.0 : 0.0) : v[j];
            r.deriv[k * r.n + j] = collocated ? basis.diff(k, j) : d[j];
        }
    }
    r.interp_t.resize(r.interp.size());
    r.deriv_t.resize(r.deriv.size());
    for (int k = 0; k < r.q; ++k)
        for (int j = 0; j < r.n; ++j) {
            r.interp_t[j * r.q + k] = r.interp[k * r.n + j];
            r.deriv_t[j * r.q + k] = r.deriv[k * r.n + j];
        }
    return r;
}

namespace detail {

// out[i][r][k] = sum_c A[r*cols + c] * in[i][c][k]
inline void contract(const double* A, int rows, int cols, std::size_t pre, std::size_t post, const double* in,
                     double* out) {
    if (post == 1) {
        for (std::size_t i = 0; i < pre; ++i) {
            const double* s = in + i * cols;
            double* o = out + i * rows;
            for (int r = 0; r < rows; ++r) {
                const double* a = A + r * cols;
                double acc = 0.0;
                for (int c = 0; c < cols; ++c) acc += a[c] * s[c];
                o[r] = acc;
            }
        }
        return;
    }
    for (std::size_t i = 0; i < pre; ++i) {
        for (int r = 0; r < rows; ++r) {
            double* o = out + (i * rows + r) * post;
            std::fill(o, o + post, 0.0);
            for (int c = 0; c < cols; ++c) {
                const double a = A[r * cols + c];
                const double* s = in + (i * cols + c) * post;
                for (std::size_t k = 0; k < post; ++k) o[k] += a * s[k];
            }
        }
    }
}

} // namespace detail

/// Tensor-product kernel on the reference element [-1,1]^Dim. Holds scratch
/// space, so one instance per thread.
template <int Dim>
class ElementKernel {
public:
    explicit ElementKernel(const ElementRule& rule) : rule_(&rule) {
        np_ = 1;
        nq_ = 1;
        for (int a = 0; a < Dim; ++a) {
            np_ *= rule.n;
            nq_ *= rule.q;
        }
        const std::size_t big = static_cast<std::size_t>(std::max(np_, nq_)) * std::max(rule.n, rule.q);
        buf_a_.resize(big);
        buf_b_.resize(big);
        weights_.resize(static_cast<std::size_t>(nq_));
        for (int k = 0; k < nq_; ++k) {
            int rem = k;
            double w = 1.0;
            for (int a = 0; a < Dim; ++a) {
                w *= rule.weights[rem % rule.q];
                rem /= rule.q;
            }
            weights_[k] = w;
        }
    }

    const ElementRule& rule() const { return *rule_; }
    int nodes() const { return np_; }
    int points() const { return nq_; }
    bool collocated() const { return rule_->collocated; }
    /// Tensor reference weights at every quadrature point.
    const std::vector<double>& reference_weights() const { return weights_; }

    /// Values of the interpolant at the quadrature points.
    void values(const double* nodal, double* at_points) {
        if (collocated()) {
            std::copy(nodal, nodal + np_, at_points);
            return;
        }
        std::array<const double*, Dim> m;
        m.fill(rule_->interp.data());
        apply(m, rule_->q, rule_->n, nodal, at_points);
    }

    /// Reference derivative d/dxi_axis of the interpolant at the quadrature points.
    void derivative(int axis, const double* nodal, double* at_points) {
        std::array<const double*, Dim> m;
        for (int a = 0; a < Dim; ++a) m[a] = (a == axis) ? rule_->deriv.data() : interp_or_identity();
        apply(m, rule_->q, rule_->n, nodal, at_points);
    }

    /// nodal_out = B^T at_points (transpose of values()).
    void values_transpose(const double* at_points, double* nodal_out) {
        if (collocated()) {
            std::copy(at_points, at_points + nq_, nodal_out);
            return;
        }
        std::array<const double*, Dim> m;
        m.fill(rule_->interp_t.data());
        apply(m, rule_->n, rule_->q, at_points, nodal_out);
    }

    /// nodal_out = (transpose of derivative(axis)) at_points.
    void derivative_transpose(int axis, const double* at_points, double* nodal_out) {
        std::array<const double*, Dim> m;
        for (int a = 0; a < Dim; ++a) m[a] = (a == axis) ? rule_->deriv_t.data() : interp_t_or_identity();
        apply(m, rule_->n, rule_->q, at_points, nodal_out);
    }

private:
    const double* interp_or_identity() const { return collocated() ? nullptr : rule_->interp.data(); }
    const double* interp_t_or_identity() const { return collocated() ? nullptr : rule_->interp_t.data(); }

    // Apply a (rows x cols) matrix along every axis; nullptr means identity
    // (only valid when rows == cols).
    void apply(const std::array<const double*, Dim>& mats, int rows, int cols, const double* in, double* out) {
        std::array<int, Dim> shape;
        shape.fill(cols);
        int last = -1;
        for (int a = 0; a < Dim; ++a)
            if (mats[a] != nullptr) last = a;
        if (last < 0) {
            std::size_t n = 1;
            for (int a = 0; a < Dim; ++a) n *= static_cast<std::size_t>(cols);
            std::copy(in, in + n, out);
            return;
        }
        const double* src = in;
        double* bufs[2] = {buf_a_.data(), buf_b_.data()};
        int which = 0;
        for (int a = 0; a < Dim; ++a) {
            if (mats[a] == nullptr) continue;
            std::size_t post = 1, pre = 1;
            for (int b = 0; b < a; ++b) post *= static_cast<std::size_t>(shape[b]);
            for (int b = a + 1; b < Dim; ++b) pre *= static_cast<std::size_t>(shape[b]);
            double* dst = (a == last) ? out : bufs[which];
            detail::contract(mats[a], rows, cols, pre, post, src, dst);
            shape[a] = rows;
            src = dst;
            which ^= 1;
        }
    }

    const ElementRule* rule_;
    int np_ = 1;
    int nq_ = 1;
    std::vector<double> buf_a_, buf_b_;
    std::vector<double> weights_;
};

/// Reference gradient of the degree-p interpolant of `elem_nodal_values` at the
/// quadrature points of `rule`; result[a] holds d/dxi_a at every point.
inline std::vector<std::vector<double>> eval_tensor_gradient(const ElementRule& rule, int dim,
                                                             std::span<const double> elem_nodal_values) {
    std::size_t np = 1, nq = 1;
    for (int a = 0; a < dim; ++a) {
        np *= static_cast<std::size_t>(rule.n);
        nq *= static_cast<std::size_t>(rule.q);
    }
    LPSFLOW_REQUIRE(dim >= 1 && dim <= 3, InvalidArgument, "eval_tensor_gradient: dim must be 1..3");
    LPSFLOW_REQUIRE(elem_nodal_values.size() == np, MeshMismatch,
                    "eval_tensor_gradient: expected (p+1)^dim nodal values");
    std::vector<std::vector<double>> out(static_cast<std::size_t>(dim), std::vector<double>(nq));
    auto run = [&](auto kernel) {
        for (int a = 0; a < dim; ++a) kernel.derivative(a, elem_nodal_values.data(), out[a].data());
    };
    if (dim == 1) run(ElementKernel<1>(rule));
    if (dim == 2) run(ElementKernel<2>(rule));
    if (dim == 3) run(ElementKernel<3>(rule));
    return out;
}

} // namespace lpsflow
