#pragma once

// Boundary conditions of the fractional-step solver:
//  * Dirichlet velocity on walls, with the rotational-form Neumann datum
//    dp/dn = -nu n.curl(curl u) for the pressure Poisson problem;
//  * Dong's outflow condition, turned into a Dirichlet value for the pressure
//    with a tanh-smoothed backflow compensation.
// Corner precedence: on a DoF shared by a wall and an outflow face the wall
// fixes the velocity and the outflow fixes the pressure.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/mesh.hpp"
#include "lpsflow/operators.hpp"

namespace lpsflow {

struct OutflowConfig {
    double U0 = 1.0;    ///< characteristic velocity
    double beta = 0.1;  ///< smoothing of the backflow switch

    void validate() const {
        LPSFLOW_REQUIRE(U0 > 0.0, InvalidArgument, "outflow: U0 must be > 0");
        LPSFLOW_REQUIRE(beta > 0.0, InvalidArgument, "outflow: beta must be > 0");
    }
};

using VelocityFunction = std::function<Point(const Point& x, double t)>;

/// User-facing description; face kinds come from the mesh tags.
struct BoundaryConditions {
    std::array<VelocityFunction, 6> wall_velocity{};  ///< empty means no-slip (u = 0)
    OutflowConfig outflow{};
};

struct BoundaryDof {
    std::size_t dof = 0;
    BoundaryKind tag = BoundaryKind::DirichletWall;  ///< Outflow if any outflow face touches the DoF
    Point normal{0.0, 0.0, 0.0};                     ///< unit outward normal
    bool velocity_constrained = false;
    bool pressure_constrained = false;
};

class BoundaryData {
public:
    BoundaryData() = default;

    BoundaryData(const Mesh& mesh, BoundaryConditions bc) : bc_(std::move(bc)) {
        bc_.outflow.validate();
        const std::size_t n = mesh.num_dofs();
        velocity_mask_.assign(n, 0);
        pressure_mask_.assign(n, 0);
        std::vector<Point> wall_normal(n, Point{0, 0, 0}), out_normal(n, Point{0, 0, 0});
        std::vector<char> on_boundary(n, 0);
        for (int f = 0; f < 2 * mesh.dim(); ++f) {
            const FaceId face = FaceId::from_index(f);
            const auto kind = mesh.face_kind(face);
            if (kind == BoundaryKind::Periodic) continue;
            (kind == BoundaryKind::DirichletWall ? wall_faces_ : outflow_faces_).push_back(face);
            for (auto dof : mesh.face_dofs(face)) {
                on_boundary[dof] = 1;
                auto& nn = kind == BoundaryKind::DirichletWall ? wall_normal[dof] : out_normal[dof];
                nn[face.axis] += face.normal_sign();
                if (kind == BoundaryKind::DirichletWall) velocity_mask_[dof] = 1;
                if (kind == BoundaryKind::Outflow) pressure_mask_[dof] = 1;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!on_boundary[i]) continue;
            BoundaryDof b;
            b.dof = i;
            b.velocity_constrained = velocity_mask_[i] != 0;
            b.pressure_constrained = pressure_mask_[i] != 0;
            b.tag = b.pressure_constrained ? BoundaryKind::Outflow : BoundaryKind::DirichletWall;
            Point nn = b.pressure_constrained ? out_normal[i] : wall_normal[i];
            const double len = std::sqrt(nn[0] * nn[0] + nn[1] * nn[1] + nn[2] * nn[2]);
            for (auto& x : nn) x /= len;
            b.normal = nn;
            dofs_.push_back(b);
            if (b.velocity_constrained) {
                velocity_dofs_.push_back(i);
                velocity_pos_.push_back(mesh.node_coord(i));
            }
            if (b.pressure_constrained) {
                outflow_dofs_.push_back(i);
                outflow_normals_.push_back(nn);
            }
        }
    }

    const std::vector<BoundaryDof>& dofs() const { return dofs_; }
    const std::vector<FaceId>& wall_faces() const { return wall_faces_; }
    const std::vector<FaceId>& outflow_faces() const { return outflow_faces_; }
    const std::vector<std::size_t>& velocity_dofs() const { return velocity_dofs_; }
    const std::vector<std::size_t>& outflow_dofs() const { return outflow_dofs_; }
    const std::vector<Point>& outflow_normals() const { return outflow_normals_; }
    const std::vector<char>& velocity_mask() const { return velocity_mask_; }
    const std::vector<char>& pressure_mask() const { return pressure_mask_; }
    const OutflowConfig& outflow() const { return bc_.outflow; }
    const BoundaryConditions& conditions() const { return bc_; }

    /// Pressure is determined only up to a constant when nothing fixes it.
    bool pressure_has_nullspace() const { return outflow_dofs_.empty(); }

    /// Prescribed velocity at the k-th constrained DoF.
    Point prescribed_velocity(std::size_t k, double t, const Mesh& mesh) const {
        const std::size_t dof = velocity_dofs_[k];
        const Point& x = velocity_pos_[k];
        // the last wall face in face order owns the value at corners
        for (int f = 2 * mesh.dim() - 1; f >= 0; --f) {
            const FaceId face = FaceId::from_index(f);
            if (mesh.face_kind(face) != BoundaryKind::DirichletWall) continue;
            const int idx = mesh.dof_index(dof)[face.axis];
            const bool on_face = face.side == 0 ? idx == 0 : idx == mesh.dofs_per_axis()[face.axis] - 1;
            if (!on_face) continue;
            const auto& fn = bc_.wall_velocity[static_cast<std::size_t>(f)];
            return fn ? fn(x, t) : Point{0.0, 0.0, 0.0};
        }
        return Point{0.0, 0.0, 0.0};
    }

private:
    BoundaryConditions bc_;
    std::vector<BoundaryDof> dofs_;
    std::vector<FaceId> wall_faces_, outflow_faces_;
    std::vector<std::size_t> velocity_dofs_, outflow_dofs_;
    std::vector<Point> velocity_pos_, outflow_normals_;
    std::vector<char> velocity_mask_, pressure_mask_;
};

/// Overwrite constrained velocity DoFs with their prescribed values at time t.
inline void apply_velocity_dirichlet(VectorField& u, const BoundaryData& bd, const Mesh& mesh, double t = 0.0) {
    const auto& dofs = bd.velocity_dofs();
    for (std::size_t k = 0; k < dofs.size(); ++k) {
        const Point v = bd.prescribed_velocity(k, t, mesh);
        for (int c = 0; c < u.ncomp(); ++c) u[c][dofs[k]] = v[static_cast<std::size_t>(c)];
    }
}

// ---------------------------------------------------------------- wall pressure

/// Neumann datum of the pressure on one wall face, stored as a full-length
/// field that is nonzero only on the face DoFs.
struct FaceFlux {
    FaceId face;
    ScalarField values;
};

using WallFlux = std::vector<FaceFlux>;

/// curl(curl(u)) by two lumped projections.
inline VectorField double_curl(const Operators& ops, const VectorField& u) {
    LPSFLOW_REQUIRE(ops.dim() >= 2, InvalidArgument, "double curl requires dim 2 or 3");
    const VectorField omega = ops.curl(u);
    if (ops.dim() == 2) return ops.curl_of_scalar(omega[0]);
    return ops.curl(omega);
}

/// Rotational-form datum dp/dn = -nu n.curl(curl u) on every wall face.
inline WallFlux wall_pressure_neumann(const Operators& ops, const VectorField& u, double nu, const BoundaryData& bd) {
    LPSFLOW_REQUIRE(ops.dim() >= 2, InvalidArgument, "wall_pressure_neumann: requires dim 2 or 3");
    WallFlux out;
    if (bd.wall_faces().empty()) return out;
    VectorField ccu;
    const bool zero = nu == 0.0;
    if (!zero) ccu = double_curl(ops, u);
    for (const auto& face : bd.wall_faces()) {
        FaceFlux ff{face, ops.zero_scalar()};
        if (!zero) {
            for (auto dof : ops.mesh().face_dofs(face)) {
                ff.values[dof] = -nu * face.normal_sign() * ccu[face.axis][dof];
            }
        }
        out.push_back(std::move(ff));
    }
    return out;
}

/// Surface integral int_face w g for a nodal field g living on one box face.
inline ScalarField face_integral(const Operators& ops, FaceId face, const ScalarField& g) {
    const Mesh& mesh = ops.mesh();
    ScalarField out = ops.zero_scalar();
    const int dim = mesh.dim();
    const int npe = mesh.order() + 1;
    const auto& h = mesh.element_lengths();
    double face_jac = 1.0;
    for (int a = 0; a < dim; ++a)
        if (a != face.axis) face_jac *= 0.5 * h[a];
    const int fixed = face.side == 0 ? 0 : mesh.order();

    std::vector<std::size_t> local;  // element-local indices of the face nodes
    for (int lz = 0; lz < (dim > 2 ? npe : 1); ++lz)
        for (int ly = 0; ly < (dim > 1 ? npe : 1); ++ly)
            for (int lx = 0; lx < npe; ++lx) {
                const std::array<int, 3> l{lx, ly, lz};
                if (l[face.axis] != fixed) continue;
                local.push_back(static_cast<std::size_t>(lx + npe * (ly + npe * lz)));
            }

    auto integrate = [&](auto kernel_tag) {
        constexpr int FDim = decltype(kernel_tag)::value;
        ElementKernel<FDim> k(ops.rule());
        const auto& W = k.reference_weights();
        std::vector<double> nodal(local.size()), at(static_cast<std::size_t>(k.points())), back(local.size());
        for (auto e : mesh.face_elements(face)) {
            const auto dofs = mesh.element_dofs(e);
            for (std::size_t i = 0; i < local.size(); ++i) nodal[i] = g[dofs[local[i]]];
            k.values(nodal.data(), at.data());
            for (int q = 0; q < k.points(); ++q) at[static_cast<std::size_t>(q)] *= W[q] * face_jac;
            k.values_transpose(at.data(), back.data());
            for (std::size_t i = 0; i < local.size(); ++i) out[dofs[local[i]]] += back[i];
        }
    };
    if (dim == 1) {
        for (auto e : mesh.face_elements(face)) {
            const auto dofs = mesh.element_dofs(e);
            out[dofs[local[0]]] += g[dofs[local[0]]];
        }
    } else if (dim == 2) {
        integrate(std::integral_constant<int, 1>{});
    } else {
        integrate(std::integral_constant<int, 2>{});
    }
    return out;
}

/// Boundary term +int_{dOmega} w (grad p . n) of the weak Poisson problem.
inline ScalarField poisson_boundary_term(const Operators& ops, const WallFlux& flux) {
    ScalarField out = ops.zero_scalar();
    for (const auto& ff : flux) out += face_integral(ops, ff.face, ff.values);
    return out;
}

// ---------------------------------------------------------------------- outflow

/// S0 = (1 - tanh(u_n / (U0 beta))) / 2: close to 1 for backflow, 0 for outflow.
inline double dong_smoothing(double u_n, const OutflowConfig& cfg) {
    return 0.5 * (1.0 - std::tanh(u_n / (cfg.U0 * cfg.beta)));
}

using Tensor3 = std::array<std::array<double, 3>, 3>;  ///< grad[i][j] = d u_i / d x_j

/// Pointwise outflow pressure p = nu n.((grad u + grad u^T) n) - |u|^2 S0 / 2.
inline double outflow_pressure_value(const Tensor3& grad, const Point& u, const Point& n, double nu, double s0) {
    double strain = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) strain += n[i] * (grad[i][j] + grad[j][i]) * n[j];
    const double u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    return nu * strain - 0.5 * u2 * s0;
}

/// Normal component of the zero-traction condition [-p I + nu (grad u + grad u^T)] n = 0,
/// evaluated through the traction vector.
inline double zero_traction_normal_pressure(const Tensor3& grad, const Point& n, double nu) {
    Point traction{0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) traction[i] += nu * (grad[i][j] + grad[j][i]) * n[j];
    return traction[0] * n[0] + traction[1] * n[1] + traction[2] * n[2];
}

/// Dirichlet pressure values on the outflow DoFs (aligned with bd.outflow_dofs()).
inline std::vector<double> outflow_pressure_dirichlet(const Operators& ops, const VectorField& u, double nu,
                                                      const BoundaryData& bd) {
    const auto& dofs = bd.outflow_dofs();
    std::vector<double> out(dofs.size(), 0.0);
    if (dofs.empty()) return out;
    std::vector<VectorField> grads;
    if (nu != 0.0) {
        for (int c = 0; c < u.ncomp(); ++c) grads.push_back(ops.project_gradient(u[c]));
    }
    for (std::size_t k = 0; k < dofs.size(); ++k) {
        const auto dof = dofs[k];
        const Point& n = bd.outflow_normals()[k];
        Point uu{0.0, 0.0, 0.0};
        Tensor3 g{};
        for (int c = 0; c < u.ncomp(); ++c) {
            uu[c] = u[c][dof];
            if (!grads.empty())
                for (int a = 0; a < ops.dim(); ++a) g[c][a] = grads[c][a][dof];
        }
        const double un = uu[0] * n[0] + uu[1] * n[1] + uu[2] * n[2];
        out[k] = outflow_pressure_value(g, uu, n, nu, dong_smoothing(un, bd.outflow()));
    }
    return out;
}

} // namespace lpsflow
