#pragma once

// Run orchestration: build the case, advance to t_end, and write
// diagnostics.csv, snapshots and the run.json manifest.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpsflow/app/cases.hpp"
#include "lpsflow/app/config.hpp"
#include "lpsflow/app/snapshot.hpp"
#include "lpsflow/boundary.hpp"
#include "lpsflow/diagnostics.hpp"
#include "lpsflow/stepper.hpp"

#ifndef LPSFLOW_GIT_ID
#define LPSFLOW_GIT_ID "unknown"
#endif

namespace lpsflow::app {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitAbort = 3 };

struct RunOptions {
    bool write_files = true;
    std::ostream* log = nullptr;
    /// Initial velocity for the custom case (library API only).
    std::optional<VectorField> initial_velocity;
    BoundaryConditions boundary{};
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    std::vector<DiagnosticsRecord> records;
    double last_good_time = 0.0;
    long steps = 0;
    double dt = 0.0;
    std::string output_dir;
    std::optional<PoissonResult> poisson;
    FlowState final_state;
};

inline DiagnosticsRecord measure(const FractionalStepSolver& solver, const FlowState& s) {
    const Operators& ops = solver.operators();
    DiagnosticsRecord r;
    r.t = s.t;
    r.E_k = kinetic_energy(ops, s.u);
    if (ops.dim() >= 2) {
        const auto [zeta, eps] = enstrophy_dissipation(ops, s.u, solver.config().physics.nu);
        r.zeta = zeta;
        r.eps = eps;
    }
    r.div_norm = divergence_norm(ops, s.u);
    if (solver.config().stab.mode != StabilizationMode::None)
        r.stab_power = stabilization_power(ops, s.u, solver.stabilization(s.u));
    return r;
}

inline std::string resolve_output_dir(const RunConfig& rc) {
    if (const char* env = std::getenv("LPSFLOW_OUTPUT_DIR"); env && *env) return env;
    return rc.output.dir;
}

namespace detail {

inline void write_manifest(const std::string& path, const RunConfig& rc, const RunOutcome& out) {
    nlohmann::ordered_json j;
    j["program"] = "lpsflow";
    j["git"] = LPSFLOW_GIT_ID;
#ifdef NDEBUG
    j["build"] = "release";
#else
    j["build"] = "debug";
#endif
    j["compiler"] = __VERSION__;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : resolved(rc)) cfg[k] = v;
    j["config"] = cfg;
    j["dt"] = out.dt;
    j["steps"] = out.steps;
    j["status"] = out.exit_code == kExitOk ? "ok" : "aborted";
    j["message"] = out.message;
    j["last_good_time"] = out.last_good_time;
    j["records"] = out.records.size();
    if (out.poisson) {
        j["poisson_l2_error"] = out.poisson->l2_error;
        j["poisson_iterations"] = out.poisson->iterations;
    }
    std::ofstream os(path);
    if (!os) throw IoError("cannot write '" + path + "'");
    os << j.dump(2) << '\n';
}

} // namespace detail

/// Runs one configuration. Configuration problems raise ConfigError; solver
/// blow-ups are reported through the outcome with kExitAbort.
inline RunOutcome run_simulation(const RunConfig& rc, RunOptions opt = {}) {
    RunOutcome out;
    out.output_dir = resolve_output_dir(rc);
    const Mesh mesh(rc.mesh);
    Operators ops(mesh, rc.quadrature.value_or(QuadratureMode::natural(mesh.spacing())));
    ops.set_workers(rc.output.workers);
    std::ofstream csv;
    if (opt.write_files) std::filesystem::create_directories(out.output_dir);
    auto path = [&](const std::string& name) { return (std::filesystem::path(out.output_dir) / name).string(); };
    auto log = [&](const std::string& msg) {
        if (opt.log) *opt.log << msg << '\n';
    };

    if (rc.case_kind == CaseKind::ManufacturedPoisson) {
        out.poisson = solve_manufactured_poisson(mesh, rc.flow.scheme.cg_tol);
        log("manufactured poisson: L2 error " + format_double(out.poisson->l2_error));
        if (opt.write_files) {
            std::ofstream os(path("manufactured.csv"));
            os << "dim,n,p,dofs,l2_error,iterations\n"
               << mesh.dim() << ',' << mesh.elems_per_axis()[0] << ',' << mesh.order() << ',' << mesh.num_dofs()
               << ',' << format_double(out.poisson->l2_error) << ',' << out.poisson->iterations << '\n';
            detail::write_manifest(path("run.json"), rc, out);
        }
        return out;
    }

    FlowState state;
    switch (rc.case_kind) {
    case CaseKind::ShearLayer2D: state.u = init_shear_layer(mesh); break;
    case CaseKind::TGV3D: state.u = init_tgv3d(mesh, rc.V0); break;
    case CaseKind::TGV2D: state.u = init_tgv2d(mesh, rc.V0, rc.flow.physics.nu).first; break;
    case CaseKind::Custom:
        if (!opt.initial_velocity)
            throw ConfigError("config: the custom case needs an initial velocity supplied through the library API");
        state.u = *opt.initial_velocity;
        LPSFLOW_REQUIRE(state.u.ncomp() == mesh.dim() && state.u.size() == mesh.num_dofs(), MeshMismatch,
                        "custom initial velocity does not match the mesh");
        break;
    case CaseKind::ManufacturedPoisson: break;
    }
    state.p = ops.zero_scalar();

    BoundaryConditions bc = opt.boundary;
    bc.outflow = rc.outflow;
    const BoundaryData bd(mesh, bc);
    apply_velocity_dirichlet(state.u, bd, mesh, 0.0);

    FlowConfig flow = rc.flow;
    flow.scheme.dt = rc.dt_from_cfl ? dt_from_cfl(rc) : rc.flow.scheme.dt;
    out.dt = flow.scheme.dt;
    const double t_end = flow.scheme.t_end;
    FractionalStepSolver solver(ops, bd, flow);
    try {
        solver.check_cfl(state.u);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    const long nsteps = std::max(1L, static_cast<long>(std::ceil(t_end / flow.scheme.dt - 1e-9)));
    const double t_last = t_end - (nsteps - 1) * flow.scheme.dt;
    std::optional<FractionalStepSolver> last_solver;
    if (std::abs(t_last - flow.scheme.dt) > 1e-12 * flow.scheme.dt) {
        FlowConfig f2 = flow;
        f2.scheme.dt = t_last;
        last_solver.emplace(ops, bd, f2);
    }

    if (opt.write_files) {
        csv.open(path("diagnostics.csv"));
        if (!csv) throw IoError("cannot write '" + path("diagnostics.csv") + "'");
        write_diagnostics_header(csv);
    }
    auto record = [&]() {
        out.records.push_back(measure(solver, state));
        if (csv.is_open()) {
            write_diagnostics_row(csv, out.records.back());
            csv.flush();
        }
    };
    int snapshot_index = 0;
    auto snapshot = [&]() {
        if (!opt.write_files || rc.output.snapshot == SnapshotFormat::None) return;
        char name[64];
        if (rc.output.snapshot == SnapshotFormat::Vtk) {
            std::snprintf(name, sizeof name, "snapshot_%04d.vtk", snapshot_index);
            write_vtk_snapshot(path(name), mesh, state.u, state.p, state.t);
        } else {
            std::snprintf(name, sizeof name, "snapshot_%04d.csv", snapshot_index);
            write_csv_snapshot(path(name), mesh, state.u, state.p);
        }
        ++snapshot_index;
    };

    record();
    snapshot();
    const double interval = rc.output.snapshot_interval;
    const int max_snapshots = static_cast<int>(std::floor(t_end / interval + 1e-9)) + 1;
    try {
        for (long n = 1; n <= nsteps; ++n) {
            const bool last = n == nsteps;
            const auto rep = (last && last_solver) ? last_solver->step(state) : solver.step(state);
            if (last) state.t = t_end;
            out.steps = n;
            out.last_good_time = state.t;
            if (n % rc.output.cadence == 0 || last) record();
            if (snapshot_index < max_snapshots && state.t >= snapshot_index * interval - 1e-9 * interval) snapshot();
            if (opt.log && (n % (10 * rc.output.cadence) == 0 || last))
                *opt.log << "step " << n << "/" << nsteps << " t=" << state.t << " E_k=" << out.records.back().E_k
                         << " poisson_its=" << rep.poisson_iterations << '\n';
        }
    } catch (const SolverAbort& e) {
        out.exit_code = kExitAbort;
        out.message = e.what();
        log("solver abort: " + out.message);
    } catch (const ConvergenceError& e) {
        out.exit_code = kExitAbort;
        out.message = std::string(e.what()) + " (last good time " + format_double(out.last_good_time) + ")";
        log("solver abort: " + out.message);
    }
    if (opt.write_files) detail::write_manifest(path("run.json"), rc, out);
    out.final_state = std::move(state);
    return out;
}

} // namespace lpsflow::app
