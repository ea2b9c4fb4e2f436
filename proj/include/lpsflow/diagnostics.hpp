#pragma once

// Volume-averaged observables and solver-health metrics.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/operators.hpp"

namespace lpsflow {

struct DiagnosticsRecord {
    double t = 0.0;
    double E_k = 0.0;
    double zeta = 0.0;
    double eps = 0.0;
    double div_norm = 0.0;
    double stab_power = 0.0;
};

/// E_k = (1/|Omega|) int u.u/2 with the solver's quadrature.
inline double kinetic_energy(const Operators& ops, const VectorField& u) {
    return 0.5 * ops.integrate_squares(u) / ops.volume();
}

/// zeta = (1/|Omega|) int omega.omega/2 and eps = 2 nu zeta.
inline std::pair<double, double> enstrophy_dissipation(const Operators& ops, const VectorField& u, double nu) {
    LPSFLOW_REQUIRE(ops.dim() >= 2, InvalidArgument, "enstrophy: requires dim 2 or 3");
    const VectorField omega = ops.curl(u);
    const double zeta = 0.5 * ops.integrate_squares(omega) / ops.volume();
    return {zeta, 2.0 * nu * zeta};
}

/// L2 norm of the lumped-mass projection of div(u).
inline double divergence_norm(const Operators& ops, const VectorField& u) {
    ScalarField d = ops.weak_rhs_divergence(u);
    const auto& m = ops.lumped_mass();
    return std::sqrt(blocked_sum(d.size(), [&](std::size_t i) { return d[i] * d[i] / m[i]; }));
}

/// Volume-averaged power of an assembled right-hand-side stabilization s:
/// (1/|Omega|) sum_c u_c . s_c. Negative values remove kinetic energy.
inline double stabilization_power(const Operators& ops, const VectorField& u, const VectorField& s) {
    return dot(u, s) / ops.volume();
}

inline void write_diagnostics_header(std::ostream& os) { os << "t,E_k,zeta,eps,div_norm,stab_power\n"; }

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
    os << format_double(r.t) << ',' << format_double(r.E_k) << ',' << format_double(r.zeta) << ','
       << format_double(r.eps) << ',' << format_double(r.div_norm) << ',' << format_double(r.stab_power) << '\n';
}

} // namespace lpsflow
