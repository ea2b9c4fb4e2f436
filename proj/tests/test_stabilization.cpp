#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lpsflow/stabilization.hpp"

using namespace lpsflow;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField random_field(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ScalarField f(n);
    for (auto& x : f) x = d(gen);
    return f;
}

VectorField uniform_velocity(const Operators& ops, Point v) {
    VectorField u = ops.zero_vector();
    for (int c = 0; c < ops.dim(); ++c) u[c].fill(v[c]);
    return u;
}

double dual_norm(const Operators& ops, const ScalarField& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * r[i] / ops.lumped_mass()[i];
    return std::sqrt(s);
}

double sin_product(const Point& x) { return std::sin(x[0]) * std::sin(2.0 * x[1]); }

} // namespace

TEST(UpwindViscosity, HatExample) {
    MeshSpec s = MeshSpec::periodic_box(1, 0.0, 1.0, 2, 1);
    s.faces.fill(BoundaryKind::DirichletWall);
    const Mesh m(s);
    const Operators ops(m);
    const auto nu = upwind_viscosity(m, uniform_velocity(ops, {1.0, 0.0, 0.0}));
    for (double v : nu.values) EXPECT_NEAR(v, 0.25, 1e-15);
    ScalarField phi(3);
    phi[1] = 1.0;
    const auto r = low_order_term(ops, phi, nu);
    EXPECT_NEAR(r[0], -0.5, 1e-14);
    EXPECT_NEAR(r[1], 1.0, 1e-14);
    EXPECT_NEAR(r[2], -0.5, 1e-14);
}

TEST(UpwindViscosity, UsesMaximumNodalSpeed) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 1.0, 2, 2));
    const Operators ops(m);
    VectorField u = ops.zero_vector();
    u[0][m.element_dofs(0)[4]] = 3.0;
    u[1][m.element_dofs(0)[4]] = 4.0;
    const auto nu = upwind_viscosity(m, u);
    EXPECT_NEAR(nu.values[0], 0.5 * (0.5 / 2.0) * 5.0, 1e-15);
    EXPECT_EQ(nu.values[3], 0.0);
}

TEST(LowOrderTerm, ZeroForConstantsAndZeroVelocity) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 1.0, 3, 2));
    const Operators ops(m);
    const auto nu = upwind_viscosity(m, uniform_velocity(ops, {1.0, 2.0, 0.0}));
    EXPECT_LT(max_abs(low_order_term(ops, ScalarField(m.num_dofs(), 3.0), nu)), 1e-13);
    const auto nu0 = upwind_viscosity(m, ops.zero_vector());
    EXPECT_EQ(max_abs(low_order_term(ops, random_field(m.num_dofs(), 1), nu0)), 0.0);
}

TEST(LowOrderTerm, DissipativeAndConservative) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 1.0, 4, 3));
    const Operators ops(m);
    VectorField u = ops.zero_vector();
    u[0] = random_field(m.num_dofs(), 7);
    u[1] = random_field(m.num_dofs(), 8);
    const auto nu = upwind_viscosity(m, u);
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto phi = random_field(m.num_dofs(), 100 + seed);
        const auto r = low_order_term(ops, phi, nu);
        EXPECT_GE(dot(phi, r), 0.0);
        double sum = 0.0;
        for (double x : r) sum += x;
        EXPECT_LT(std::abs(sum), 1e-12 * std::sqrt(dot(phi, phi)));
    }
}

TEST(LpsTerm, ZeroWhenCoefficientIsZero) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 1.0, 3, 2));
    const Operators ops(m);
    const auto nu = upwind_viscosity(m, uniform_velocity(ops, {1.0, 1.0, 0.0}));
    EXPECT_EQ(max_abs(lps_term(ops, random_field(m.num_dofs(), 3), nu, 0.0)), 0.0);
}

TEST(LpsTerm, VanishesAtSingleElementInteriorForResolvedField) {
    for (int p = 2; p <= 5; ++p) {
        MeshSpec s = MeshSpec::periodic_box(2, -1.0, 1.0, 1, p);
        s.faces.fill(BoundaryKind::DirichletWall);
        const Mesh m(s);
        const Operators ops(m);
        std::mt19937 gen(p);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        const double a = d(gen), b = d(gen), c = d(gen);
        const auto phi = ops.interpolate(
            [&](const Point& x) { return a * std::pow(x[0], p) + b * x[0] * std::pow(x[1], p - 1) + c * x[1]; });
        const auto nu = upwind_viscosity(m, uniform_velocity(ops, {1.0, 0.0, 0.0}));
        const auto r = lps_term(ops, phi, nu, 1.0);
        for (std::size_t i = 0; i < m.num_dofs(); ++i) {
            const auto idx = m.dof_index(i);
            if (idx[0] == 0 || idx[0] == p || idx[1] == 0 || idx[1] == p) continue;
            EXPECT_NEAR(r[i], 0.0, 1e-13) << "p=" << p;
        }
    }
}

TEST(LpsTerm, DecreasesWithOrderAtFixedDofs) {
    double prev = 0.0;
    for (int p = 1; p <= 4; ++p) {
        const Mesh m(MeshSpec::periodic_box(2, 0.0, 2.0 * kPi, 24 / p, p));
        const Operators ops(m);
        const auto phi = ops.interpolate(sin_product);
        const auto nu = upwind_viscosity(m, uniform_velocity(ops, {1.0, 0.0, 0.0}));
        // energy seminorm of the stabilization, sqrt(-phi . s)
        const double norm = std::sqrt(-dot(phi, lps_term(ops, phi, nu, 1.0)));
        if (p > 1) EXPECT_LT(norm, prev) << "p=" << p;
        prev = norm;
    }
}

TEST(LpsTerm, ConservativeAndDissipativeForRandomFields) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 1.0, 4, 3));
    const Operators ops(m);
    VectorField u = ops.zero_vector();
    u[0] = random_field(m.num_dofs(), 17);
    u[1] = random_field(m.num_dofs(), 18);
    const auto nu = upwind_viscosity(m, u);
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto phi = random_field(m.num_dofs(), 200 + seed);
        const auto r = lps_term(ops, phi, nu, 1.0);
        double sum = 0.0;
        for (double x : r) sum += x;
        EXPECT_LT(std::abs(sum), 1e-12 * std::sqrt(dot(phi, phi)));
    }
    // with a uniform viscosity the term is -nu (K - B^T M^-1 B), negative semi-definite
    const auto nu_uniform = upwind_viscosity(m, uniform_velocity(ops, {0.3, 0.4, 0.0}));
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto phi = random_field(m.num_dofs(), 300 + seed);
        EXPECT_LE(dot(phi, lps_term(ops, phi, nu_uniform, 1.0)), 1e-14);
    }
}

TEST(LpsTerm, LinearInCoefficientAndHomogeneousInSpeed) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 2.0 * kPi, 6, 3));
    const Operators ops(m);
    const auto phi = ops.interpolate(sin_product);
    VectorField u = ops.zero_vector();
    u[0] = ops.interpolate([](const Point& x) { return 1.0 + 0.5 * std::cos(x[1]); });
    const auto nu = upwind_viscosity(m, u);
    const auto r1 = lps_term(ops, phi, nu, 1.0);
    const auto r_half = lps_term(ops, phi, nu, 0.5);
    VectorField u3 = u;
    u3 *= 3.0;
    const auto r3 = lps_term(ops, phi, upwind_viscosity(m, u3), 1.0);
    for (std::size_t i = 0; i < m.num_dofs(); ++i) {
        EXPECT_NEAR(r_half[i], 0.5 * r1[i], 1e-15 + 1e-13 * std::abs(r1[i]));
        EXPECT_NEAR(r3[i], 3.0 * r1[i], 1e-15 + 1e-13 * std::abs(r1[i]));
    }
}

// Measured rate of ||g_h(phi_h) - grad(phi_h)||: p+1 for even p, but only p for
// odd p, where the interface jumps of grad(phi_h) carry an O(h^p) term that a
// continuous g_h cannot remove.
TEST(LpsTerm, ProjectionErrorOrder) {
    for (int p = 1; p <= 4; ++p) {
        std::vector<double> err, h;
        for (int n : {8, 16, 32}) {
            const Mesh m(MeshSpec::periodic_box(2, 0.0, 2.0 * kPi, n, p));
            const Operators ops(m);
            const Operators exact(m, QuadratureMode::over_integrated(2 * p + 4));
            const auto phi = ops.interpolate(sin_product);
            err.push_back(std::sqrt(exact.integrate_gradient_mismatch(phi, ops.project_gradient(phi))));
            h.push_back(m.element_size(0));
        }
        const double slope = std::log(err[1] / err[2]) / std::log(h[1] / h[2]);
        EXPECT_NEAR(slope, p % 2 == 0 ? p + 1 : p, 0.3) << "p=" << p;
    }
}

TEST(MomentumStabilization, UniformVelocityGivesZero) {
    const Mesh m(MeshSpec::periodic_box(3, 0.0, 1.0, 2, 2));
    const Operators ops(m);
    const auto u = uniform_velocity(ops, {1.0, -1.0, 2.0});
    for (auto mode : {StabilizationMode::None, StabilizationMode::LowOrderUpwind, StabilizationMode::LPS})
        EXPECT_LT(max_abs(momentum_stabilization(ops, u, {mode, 1.0})), 1e-12);
}

TEST(MomentumStabilization, ShearLayerSupport) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 2.0 * kPi, 30, 2));
    const Operators ops(m);
    const double delta = kPi / 15.0;
    VectorField u = ops.zero_vector();
    u[0] = ops.interpolate([&](const Point& x) {
        return x[1] <= kPi ? std::tanh((x[1] - 0.5 * kPi) / delta) : std::tanh((1.5 * kPi - x[1]) / delta);
    });
    u[1] = ops.interpolate([](const Point& x) { return 0.05 * std::sin(x[0]); });
    const auto s = momentum_stabilization(ops, u, {StabilizationMode::LPS, 1.0});
    const double peak = max_abs(s[0]);
    EXPECT_GT(peak, 0.0);
    // far from both layers the streamwise velocity is flat and its stabilization negligible
    for (std::size_t i = 0; i < m.num_dofs(); ++i) {
        const double y = m.node_coord(i)[1];
        const double dist = std::min(std::abs(y - 0.5 * kPi), std::abs(y - 1.5 * kPi));
        if (dist > 6.0 * delta) EXPECT_LT(std::abs(s[0][i]), 1e-3 * peak);
    }
    EXPECT_GT(max_abs(s[1]), 0.0);
}

TEST(MomentumStabilization, LpsSmallerThanLowOrderForSmoothFields) {
    for (int p = 2; p <= 4; ++p) {
        const Mesh m(MeshSpec::periodic_box(2, 0.0, 2.0 * kPi, 24 / p, p));
        const Operators ops(m);
        VectorField u = ops.zero_vector();
        u[0] = ops.interpolate(sin_product);
        u[1] = ops.interpolate([](const Point& x) { return std::cos(2.0 * x[0]) * std::sin(x[1]); });
        const auto lps = momentum_stabilization(ops, u, {StabilizationMode::LPS, 1.0});
        const auto low = momentum_stabilization(ops, u, {StabilizationMode::LowOrderUpwind, 1.0});
        double nl = 0.0, no = 0.0;
        for (int c = 0; c < 2; ++c) {
            nl += std::pow(dual_norm(ops, lps[c]), 2);
            no += std::pow(dual_norm(ops, low[c]), 2);
        }
        EXPECT_LE(nl, no) << "p=" << p;
    }
}

TEST(StabilizationConfig, RejectsOutOfRangeCoefficient) {
    EXPECT_THROW((StabilizationConfig{StabilizationMode::LPS, -0.1}.validate()), InvalidArgument);
    EXPECT_THROW((StabilizationConfig{StabilizationMode::LPS, 1.5}.validate()), InvalidArgument);
    EXPECT_NO_THROW((StabilizationConfig{StabilizationMode::LPS, 0.0}.validate()));
}

TEST(Stabilization, MeshMismatch) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, 1.0, 2, 2));
    const Operators ops(m);
    ElementViscosity bad{std::vector<double>(3, 1.0)};
    EXPECT_THROW(low_order_term(ops, ops.zero_scalar(), bad), MeshMismatch);
    EXPECT_THROW(lps_term(ops, ops.zero_scalar(), bad, 1.0), MeshMismatch);
    EXPECT_THROW(upwind_viscosity(m, VectorField(2, 5)), MeshMismatch);
}
