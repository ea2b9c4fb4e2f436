#pragma once

// First-order upwind element viscosity, the low-order diffusion term and the
// local projection stabilization (LPS) term for scalars and velocity components.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/operators.hpp"

namespace lpsflow {

enum class StabilizationMode { None, LowOrderUpwind, LPS };

inline const char* to_string(StabilizationMode m) {
    switch (m) {
    case StabilizationMode::None: return "none";
    case StabilizationMode::LowOrderUpwind: return "upwind";
    case StabilizationMode::LPS: return "lps";
    }
    return "?";
}

struct StabilizationConfig {
    StabilizationMode mode = StabilizationMode::LPS;
    double c_s = 1.0;

    void validate() const {
        LPSFLOW_REQUIRE(c_s >= 0.0 && c_s <= 1.0, InvalidArgument,
                        "stabilization: c_s must lie in [0, 1], got " + std::to_string(c_s));
    }
};

/// nu_e = (h_e / p) * max_{nodes of e} |u| / 2, one value per element.
struct ElementViscosity {
    std::vector<double> values;
};

inline ElementViscosity upwind_viscosity(const Mesh& mesh, const VectorField& u) {
    LPSFLOW_REQUIRE(u.size() == mesh.num_dofs(), MeshMismatch, "upwind_viscosity: velocity/mesh mismatch");
    ElementViscosity nu;
    nu.values.resize(mesh.num_elements());
    const double p = mesh.order();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        double vmax2 = 0.0;
        for (auto dof : mesh.element_dofs(e)) {
            double s = 0.0;
            for (int c = 0; c < u.ncomp(); ++c) s += u[c][dof] * u[c][dof];
            vmax2 = std::max(vmax2, s);
        }
        nu.values[e] = 0.5 * (mesh.element_size(e) / p) * std::sqrt(vmax2);
    }
    return nu;
}

/// Low-order term nu_e int grad(w).grad(phi). Positive semi-definite: it belongs
/// on the left-hand side of the transport equation.
inline ScalarField low_order_term(const Operators& ops, const ScalarField& phi, const ElementViscosity& nu) {
    LPSFLOW_REQUIRE(nu.values.size() == ops.mesh().num_elements(), MeshMismatch,
                    "low_order_term: viscosity/mesh mismatch");
    return ops.weighted_laplacian(phi, &nu.values);
}

/// LPS term c_s nu_e int grad(w).(g_h(phi) - grad(phi)). With this orientation
/// it is added to the right-hand side, where it removes energy.
inline ScalarField lps_term(const Operators& ops, const ScalarField& phi, const ElementViscosity& nu, double c_s) {
    LPSFLOW_REQUIRE(nu.values.size() == ops.mesh().num_elements(), MeshMismatch,
                    "lps_term: viscosity/mesh mismatch");
    if (c_s == 0.0) return ops.zero_scalar();
    const VectorField g = ops.project_gradient(phi);
    std::vector<double> coef(nu.values);
    for (auto& c : coef) c *= c_s;
    return ops.projection_fluctuation(phi, g, coef);
}

/// Right-hand-side stabilization s of the momentum predictor, one shared
/// viscosity from the velocity magnitude for all components.
inline VectorField momentum_stabilization(const Operators& ops, const VectorField& u,
                                          const StabilizationConfig& cfg) {
    VectorField s = ops.zero_vector(u.ncomp());
    if (cfg.mode == StabilizationMode::None) return s;
    const auto nu = upwind_viscosity(ops.mesh(), u);
    for (int c = 0; c < u.ncomp(); ++c) {
        if (cfg.mode == StabilizationMode::LowOrderUpwind) {
            s[c] = low_order_term(ops, u[c], nu);
            s[c] *= -1.0;
        } else {
            s[c] = lps_term(ops, u[c], nu, cfg.c_s);
        }
    }
    return s;
}

} // namespace lpsflow
