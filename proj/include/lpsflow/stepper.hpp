#pragma once

// Non-incremental velocity-correction fractional step:
//   predict   u*  = u^n + dt M^-1 (-C(u^n) + s(u^n))
//   pressure  K p = -(1/dt) D(u*) + (wall Neumann datum), outflow p Dirichlet
//   correct   u** = u* - dt g_h(p)
//   diffuse   (M + theta dt A) u^{n+1} = (M - (1-theta) dt A) u**,  A = viscous stress operator
// The first three steps form one stage of an explicit Runge-Kutta scheme (one
// Poisson solve per stage); diffusion is applied once per step.

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lpsflow/boundary.hpp"
#include "lpsflow/diagnostics.hpp"
#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/linear_solver.hpp"
#include "lpsflow/operators.hpp"
#include "lpsflow/stabilization.hpp"

namespace lpsflow {

enum class RkScheme { Euler1, Heun2, SSPRK3 };

inline const char* to_string(RkScheme r) {
    switch (r) {
    case RkScheme::Euler1: return "euler1";
    case RkScheme::Heun2: return "heun2";
    case RkScheme::SSPRK3: return "ssprk3";
    }
    return "?";
}

struct TimeScheme {
    double dt = 1e-3;
    RkScheme rk = RkScheme::Heun2;
    double t_end = 1.0;
    double cg_tol = 1e-8;
    int cg_max_iters = 5000;
    double cfl_limit = 1.0;
    /// 1 = backward Euler, 0.5 = Crank-Nicolson
    double diffusion_theta = 0.5;

    void validate() const {
        LPSFLOW_REQUIRE(dt > 0.0 && std::isfinite(dt), InvalidArgument, "scheme: dt must be > 0");
        LPSFLOW_REQUIRE(cg_tol > 0.0 && cg_tol < 1.0, InvalidArgument, "scheme: cg_tol must lie in (0, 1)");
        LPSFLOW_REQUIRE(cg_max_iters >= 1, InvalidArgument, "scheme: cg_max_iters must be >= 1");
        LPSFLOW_REQUIRE(diffusion_theta >= 0.5 && diffusion_theta <= 1.0, InvalidArgument,
                        "scheme: diffusion_theta must lie in [0.5, 1]");
    }
};

struct PhysicalParams {
    double nu = 0.0;

    void validate() const { LPSFLOW_REQUIRE(nu >= 0.0, InvalidArgument, "physics: nu must be >= 0"); }
};

struct FlowConfig {
    ConvectiveForm form = ConvectiveForm::SkewSymmetric;
    StabilizationConfig stab{};
    PhysicalParams physics{};
    TimeScheme scheme{};
};

struct StepReport {
    long step = 0;
    double t = 0.0;
    int poisson_iterations = 0;
    int diffusion_iterations = 0;
    double div_norm = 0.0;
    double wall_seconds = 0.0;
};

struct FlowState {
    VectorField u;
    ScalarField p;
    double t = 0.0;
    long step = 0;
};

class FractionalStepSolver {
public:
    FractionalStepSolver(const Operators& ops, BoundaryData bd, FlowConfig cfg)
        : ops_(&ops), bd_(std::move(bd)), cfg_(cfg) {
        cfg_.scheme.validate();
        cfg_.physics.validate();
        cfg_.stab.validate();
        const auto diag = ops.laplacian_diagonal();
        poisson_inv_diag_.resize(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) poisson_inv_diag_[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;
        stiffness_parts_ = ops.stiffness_diagonal_parts();
    }

    const Operators& operators() const { return *ops_; }
    const BoundaryData& boundary() const { return bd_; }
    const FlowConfig& config() const { return cfg_; }
    double dt() const { return cfg_.scheme.dt; }

    /// dt * max|u| * p / h
    double cfl_number(const VectorField& u) const {
        double vmax2 = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            double s = 0.0;
            for (int c = 0; c < u.ncomp(); ++c) s += u[c][i] * u[c][i];
            vmax2 = std::max(vmax2, s);
        }
        return dt() * std::sqrt(vmax2) * ops_->mesh().order() / ops_->mesh().element_size(0);
    }

    void check_cfl(const VectorField& u) const {
        const double c = cfl_number(u);
        LPSFLOW_REQUIRE(c <= cfg_.scheme.cfl_limit, InvalidArgument,
                        "CFL number " + std::to_string(c) + " exceeds cfl_limit " +
                            std::to_string(cfg_.scheme.cfl_limit));
    }

    /// Right-hand-side stabilization s(u) for the configured mode.
    VectorField stabilization(const VectorField& u) const { return momentum_stabilization(*ops_, u, cfg_.stab); }

    /// u* = u^n + dt M^-1 (-C(u^n) + s(u^n)).
    VectorField predict(const VectorField& un) const {
        VectorField rhs = ops_->convective_term(un, cfg_.form);
        rhs *= -1.0;
        if (cfg_.stab.mode != StabilizationMode::None) rhs += stabilization(un);
        VectorField us = un;
        for (int c = 0; c < us.ncomp(); ++c) {
            const auto& m = ops_->lumped_mass();
            for (std::size_t i = 0; i < us.size(); ++i) us[c][i] += dt() * rhs[c][i] / m[i];
        }
        return us;
    }

    /// Pressure Poisson solve. `u_lag` is the latest end-of-stage velocity, used
    /// for the wall Neumann datum and the outflow Dirichlet value.
    ScalarField solve_pressure(const VectorField& u_star, const VectorField& u_lag, const ScalarField& guess,
                               CgResult* report = nullptr) const {
        const Operators& ops = *ops_;
        const double nu = cfg_.physics.nu;
        ScalarField rhs = ops.weak_rhs_divergence(u_star);
        rhs *= -1.0 / dt();
        if (!bd_.wall_faces().empty() && ops.dim() >= 2) {
            rhs += poisson_boundary_term(ops, wall_pressure_neumann(ops, u_lag, nu, bd_));
        }
        ScalarField p = guess.size() == ops.num_dofs() ? guess : ops.zero_scalar();
        if (!bd_.outflow_dofs().empty()) {
            const auto values = outflow_pressure_dirichlet(ops, u_lag, nu, bd_);
            ScalarField pd = ops.zero_scalar();
            for (std::size_t k = 0; k < values.size(); ++k) {
                pd[bd_.outflow_dofs()[k]] = values[k];
                p[bd_.outflow_dofs()[k]] = values[k];
            }
            rhs -= ops.weak_laplacian(pd);
        }
        CgOptions opt;
        opt.tol = cfg_.scheme.cg_tol;
        opt.max_iters = cfg_.scheme.cg_max_iters;
        opt.project_constants = bd_.pressure_has_nullspace();
        auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
            const ScalarField r = ops.weak_laplacian(ScalarField(x));
            y.assign(r.begin(), r.end());
        };
        const std::vector<char> none;
        const auto res = conjugate_gradient(apply, rhs.span(), p.span(), poisson_inv_diag_,
                                            bd_.outflow_dofs().empty() ? std::span<const char>(none)
                                                                       : std::span<const char>(bd_.pressure_mask()),
                                            opt);
        if (report) *report = res;
        if (bd_.pressure_has_nullspace()) remove_weighted_mean(p);
        return p;
    }

    /// u** = u* - dt g_h(p).
    VectorField correct(const VectorField& u_star, const ScalarField& p) const {
        VectorField u = u_star;
        u.axpy(-dt(), ops_->project_gradient(p));
        return u;
    }

    /// Implicit viscous step with the symmetric stress tensor; identity for nu = 0.
    VectorField diffuse(const VectorField& u_dstar, double t_new, CgResult* report = nullptr) const {
        const Operators& ops = *ops_;
        const double nu = cfg_.physics.nu;
        VectorField u = u_dstar;
        apply_velocity_dirichlet(u, bd_, ops.mesh(), t_new);
        if (nu == 0.0) {
            if (report) *report = CgResult{0, 0.0, true};
            return u;
        }
        const int dim = u.ncomp();
        const std::size_t n = ops.num_dofs();
        const double theta = cfg_.scheme.diffusion_theta;
        const auto& m = ops.lumped_mass();

        // rhs = M u** - (1 - theta) dt A u**
        std::vector<double> rhs(dim * n), x(dim * n), inv_diag(dim * n);
        const VectorField au = (theta < 1.0) ? ops.symmetric_stiffness(u_dstar, nu) : VectorField();
        for (int c = 0; c < dim; ++c)
            for (std::size_t i = 0; i < n; ++i) {
                rhs[c * n + i] = m[i] * u_dstar[c][i] - (theta < 1.0 ? (1.0 - theta) * dt() * au[c][i] : 0.0);
                x[c * n + i] = u[c][i];
                double d = 0.0;
                for (int a = 0; a < dim; ++a) d += stiffness_parts_[a][i];
                d += stiffness_parts_[c][i];
                inv_diag[c * n + i] = 1.0 / (m[i] + theta * dt() * nu * d);
            }
        auto apply = [&](const std::vector<double>& v, std::vector<double>& y) {
            VectorField vf(dim, n);
            for (int c = 0; c < dim; ++c) std::copy(v.begin() + c * n, v.begin() + (c + 1) * n, vf[c].begin());
            const VectorField kv = ops.symmetric_stiffness(vf, nu);
            y.resize(v.size());
            for (int c = 0; c < dim; ++c)
                for (std::size_t i = 0; i < n; ++i) y[c * n + i] = m[i] * vf[c][i] + theta * dt() * kv[c][i];
        };
        std::vector<char> mask;
        if (!bd_.velocity_dofs().empty()) {
            mask.assign(dim * n, 0);
            std::vector<double> xd(dim * n, 0.0), axd;
            for (int c = 0; c < dim; ++c)
                for (auto dof : bd_.velocity_dofs()) {
                    mask[c * n + dof] = 1;
                    xd[c * n + dof] = u[c][dof];
                }
            apply(xd, axd);
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= axd[i];
        }
        CgOptions opt;
        opt.tol = cfg_.scheme.cg_tol;
        opt.max_iters = cfg_.scheme.cg_max_iters;
        const auto res = conjugate_gradient(apply, rhs, x, inv_diag, mask, opt);
        if (report) *report = res;
        for (int c = 0; c < dim; ++c) std::copy(x.begin() + c * n, x.begin() + (c + 1) * n, u[c].begin());
        return u;
    }

    /// One explicit stage: predict, pressure solve and correction.
    VectorField stage(const VectorField& v, double t_stage, ScalarField& p, int& poisson_iters) const {
        VectorField us = predict(v);
        if (!us.all_finite()) throw SolverAbort("non-finite velocity in predictor", t_stage);
        apply_velocity_dirichlet(us, bd_, ops_->mesh(), t_stage + dt());
        CgResult res;
        p = solve_pressure(us, v, p, &res);
        poisson_iters += res.iterations;
        VectorField out = correct(us, p);
        apply_velocity_dirichlet(out, bd_, ops_->mesh(), t_stage + dt());
        return out;
    }

    StepReport step(FlowState& s) const {
        const auto t0 = std::chrono::steady_clock::now();
        StepReport rep;
        if (s.p.size() != ops_->num_dofs()) s.p = ops_->zero_scalar();
        const VectorField& un = s.u;
        VectorField u;
        switch (cfg_.scheme.rk) {
        case RkScheme::Euler1:
            u = stage(un, s.t, s.p, rep.poisson_iterations);
            break;
        case RkScheme::Heun2: {
            const VectorField u1 = stage(un, s.t, s.p, rep.poisson_iterations);
            u = stage(u1, s.t + dt(), s.p, rep.poisson_iterations);
            u *= 0.5;
            u.axpy(0.5, un);
            break;
        }
        case RkScheme::SSPRK3: {
            const VectorField u1 = stage(un, s.t, s.p, rep.poisson_iterations);
            VectorField u2 = stage(u1, s.t + dt(), s.p, rep.poisson_iterations);
            u2 *= 0.25;
            u2.axpy(0.75, un);
            u = stage(u2, s.t + 0.5 * dt(), s.p, rep.poisson_iterations);
            u *= 2.0 / 3.0;
            u.axpy(1.0 / 3.0, un);
            break;
        }
        }
        CgResult dres;
        u = diffuse(u, s.t + dt(), &dres);
        if (!u.all_finite()) throw SolverAbort("non-finite velocity after step " + std::to_string(s.step + 1), s.t);
        s.u = std::move(u);
        s.t += dt();
        s.step += 1;
        rep.step = s.step;
        rep.t = s.t;
        rep.diffusion_iterations = dres.iterations;
        rep.div_norm = divergence_norm(*ops_, s.u);
        rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

private:
    void remove_weighted_mean(ScalarField& p) const {
        const auto& m = ops_->lumped_mass();
        const double mean = dot(p, m) / ops_->volume();
        for (auto& x : p) x -= mean;
    }

    const Operators* ops_;
    BoundaryData bd_;
    FlowConfig cfg_;
    std::vector<double> poisson_inv_diag_;
    VectorField stiffness_parts_;
};

} // namespace lpsflow
