#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"

namespace lpsflow {

struct CgOptions {
    double tol = 1e-8;  ///< relative residual ||b - Ax|| / ||b||
    int max_iters = 1000;
    /// Remove the constant component from the residual every iteration
    /// (operators whose null space is the constants, e.g. pure-Neumann Poisson).
    bool project_constants = false;
    bool throw_on_failure = true;
};

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

namespace detail {

inline void remove_mean(std::span<double> r, std::span<const char> constrained) {
    std::size_t n = 0;
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!constrained.empty() && constrained[i]) continue;
        s += r[i];
        ++n;
    }
    if (n == 0) return;
    const double mean = s / static_cast<double>(n);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!constrained.empty() && constrained[i]) continue;
        r[i] -= mean;
    }
}

} // namespace detail

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// (semi-)definite operator. Rows flagged in `constrained` are excluded: their
/// entries of x are left untouched and they do not take part in the residual.
/// `apply(x, y)` must compute y = A x for the full vector; the caller is
/// responsible for passing a right-hand side that already accounts for the
/// constrained values.
template <class Apply>
CgResult conjugate_gradient(Apply&& apply, std::span<const double> b, std::span<double> x,
                            std::span<const double> inv_diag, std::span<const char> constrained,
                            const CgOptions& opt) {
    const std::size_t n = b.size();
    LPSFLOW_REQUIRE(x.size() == n, MeshMismatch, "cg: solution length mismatch");
    LPSFLOW_REQUIRE(inv_diag.empty() || inv_diag.size() == n, MeshMismatch, "cg: preconditioner length mismatch");
    auto free_dof = [&](std::size_t i) { return constrained.empty() || !constrained[i]; };

    std::vector<double> r(n), z(n), p(n), ap(n), xfree(n);
    std::vector<double> rhs(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i)
        if (!free_dof(i)) rhs[i] = 0.0;
    if (opt.project_constants) detail::remove_mean(rhs, constrained);

    const double bnorm = std::sqrt(dot(rhs, rhs));
    CgResult res;
    if (bnorm == 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            if (free_dof(i)) x[i] = 0.0;
        res.converged = true;
        return res;
    }

    // constrained entries of x are fixed; the operator acts on the free part only
    auto apply_free = [&](const std::vector<double>& v, std::vector<double>& out) {
        apply(v, out);
        for (std::size_t i = 0; i < n; ++i)
            if (!free_dof(i)) out[i] = 0.0;
    };

    for (std::size_t i = 0; i < n; ++i) xfree[i] = free_dof(i) ? x[i] : 0.0;
    apply_free(xfree, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
    if (opt.project_constants) detail::remove_mean(r, constrained);

    auto precondition = [&]() {
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag.empty() ? r[i] : inv_diag[i] * r[i];
        for (std::size_t i = 0; i < n; ++i)
            if (!free_dof(i)) z[i] = 0.0;
    };

    double rnorm = std::sqrt(dot(r, r));
    precondition();
    p = z;
    double rz = dot(r, z);
    int it = 0;
    while (rnorm > opt.tol * bnorm && it < opt.max_iters) {
        apply_free(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            xfree[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if (opt.project_constants) detail::remove_mean(r, constrained);
        ++it;
        rnorm = std::sqrt(dot(r, r));
        precondition();
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (free_dof(i)) x[i] = xfree[i];
    res.iterations = it;
    res.relative_residual = rnorm / bnorm;
    res.converged = rnorm <= opt.tol * bnorm;
    if (!res.converged && opt.throw_on_failure) {
        throw ConvergenceError("conjugate gradient did not reach tolerance " + std::to_string(opt.tol), it,
                               res.relative_residual);
    }
    return res;
}

} // namespace lpsflow
