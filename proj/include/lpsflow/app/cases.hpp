#pragma once

// Initial conditions of the benchmark cases and the manufactured Poisson problem.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/linear_solver.hpp"
#include "lpsflow/mesh.hpp"
#include "lpsflow/operators.hpp"

namespace lpsflow::app {

namespace detail {

inline void require_periodic_box(const Mesh& mesh, int dim, const char* what) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    LPSFLOW_REQUIRE(mesh.dim() == dim, InvalidArgument,
                    std::string(what) + ": needs a " + std::to_string(dim) + "D mesh");
    for (int a = 0; a < dim; ++a) {
        const auto& s = mesh.spec();
        LPSFLOW_REQUIRE(std::abs(s.lower[a]) < 1e-12 && std::abs(s.upper[a] - two_pi) < 1e-12, InvalidArgument,
                        std::string(what) + ": domain must be [0, 2pi]^" + std::to_string(dim));
        LPSFLOW_REQUIRE(mesh.periodic(a), InvalidArgument, std::string(what) + ": all axes must be periodic");
    }
}

inline VectorField sample(const Mesh& mesh, int ncomp, const std::function<Point(const Point&)>& f) {
    VectorField u(ncomp, mesh.num_dofs());
    for (std::size_t i = 0; i < mesh.num_dofs(); ++i) {
        const Point v = f(mesh.node_coord(i));
        for (int c = 0; c < ncomp; ++c) u[c][i] = v[c];
    }
    return u;
}

} // namespace detail

struct ShearLayerParams {
    double delta = std::numbers::pi / 15.0;
    double epsilon = 0.05;
};

inline Point shear_layer_velocity(const Point& x, const ShearLayerParams& prm = {}) {
    constexpr double pi = std::numbers::pi;
    const double y = x[1];
    const double u = y <= pi ? std::tanh((y - 0.5 * pi) / prm.delta) : std::tanh((1.5 * pi - y) / prm.delta);
    return {u, prm.epsilon * std::sin(x[0]), 0.0};
}

/// Doubly periodic shear layer on [0, 2pi]^2.
inline VectorField init_shear_layer(const Mesh& mesh, const ShearLayerParams& prm = {}) {
    detail::require_periodic_box(mesh, 2, "init_shear_layer");
    return detail::sample(mesh, 2, [&](const Point& x) { return shear_layer_velocity(x, prm); });
}

inline Point tgv3d_velocity(const Point& x, double V0) {
    return {V0 * std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]),
            -V0 * std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]), 0.0};
}

/// 3D Taylor-Green vortex on [0, 2pi]^3.
inline VectorField init_tgv3d(const Mesh& mesh, double V0 = 1.0) {
    detail::require_periodic_box(mesh, 3, "init_tgv3d");
    return detail::sample(mesh, 3, [&](const Point& x) { return tgv3d_velocity(x, V0); });
}

/// Exact decaying 2D Taylor-Green solution.
struct Tgv2dExact {
    double V0 = 1.0;
    double nu = 0.0;

    Point velocity(const Point& x, double t) const {
        const double f = V0 * std::exp(-2.0 * nu * t);
        return {f * std::sin(x[0]) * std::cos(x[1]), -f * std::cos(x[0]) * std::sin(x[1]), 0.0};
    }
    double pressure(const Point& x, double t) const {
        const double f = V0 * std::exp(-2.0 * nu * t);
        return 0.25 * f * f * (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1]));
    }
    double kinetic_energy(double t) const { return 0.25 * V0 * V0 * std::exp(-4.0 * nu * t); }
};

inline std::pair<VectorField, Tgv2dExact> init_tgv2d(const Mesh& mesh, double V0, double nu) {
    detail::require_periodic_box(mesh, 2, "init_tgv2d");
    Tgv2dExact ex{V0, nu};
    return {detail::sample(mesh, 2, [&](const Point& x) { return ex.velocity(x, 0.0); }), ex};
}

/// L2 error of a velocity field against a pointwise exact solution, with the
/// quadrature of `ops`.
inline double velocity_l2_error(const Operators& ops, const VectorField& u,
                                const std::function<Point(const Point&)>& exact) {
    double e2 = 0.0;
    for (int c = 0; c < u.ncomp(); ++c)
        e2 += ops.integrate_squared_error(u[c], [&](const Point& x) { return exact(x)[c]; });
    return std::sqrt(e2);
}

struct PoissonResult {
    ScalarField solution;
    double l2_error = 0.0;
    int iterations = 0;
};

/// Periodic Poisson problem -lap(p) = d * prod sin(x_k) with exact solution
/// p = prod sin(x_k), solved with the solver's stiffness and mean removal. The
/// error is measured with an over-integrated rule.
inline PoissonResult solve_manufactured_poisson(const Mesh& mesh, double tol = 1e-12) {
    detail::require_periodic_box(mesh, mesh.dim(), "manufactured_poisson");
    const int d = mesh.dim();
    auto exact = [d](const Point& x) {
        double v = 1.0;
        for (int a = 0; a < d; ++a) v *= std::sin(x[a]);
        return v;
    };
    const Operators ops(mesh);
    const Operators exact_ops(mesh, QuadratureMode::over_integrated(2 * mesh.order() + 6));
    // the source is integrated exactly enough that only the discretization error remains
    const ScalarField rhs = exact_ops.weak_source([&](const Point& x) { return d * exact(x); });

    ScalarField p = ops.zero_scalar();
    const auto diag = ops.laplacian_diagonal();
    std::vector<double> inv(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) inv[i] = 1.0 / diag[i];
    CgOptions opt;
    opt.tol = tol;
    opt.max_iters = 20000;
    opt.project_constants = true;
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        const ScalarField r = ops.weak_laplacian(ScalarField(x));
        y.assign(r.begin(), r.end());
    };
    const auto res = conjugate_gradient(apply, rhs.span(), p.span(), inv, {}, opt);
    const double mean = dot(p, ops.lumped_mass()) / ops.volume();
    for (auto& x : p) x -= mean;
    return {p, std::sqrt(exact_ops.integrate_squared_error(p, exact)), res.iterations};
}

} // namespace lpsflow::app
