#pragma once

// Matrix-free global operators on a structured mesh: lumped mass, weak
// gradient/divergence, stiffness, convective term in three forms, curl and the
// lumped-mass L2 projection of the gradient. Only the lumped mass is stored.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/mesh.hpp"
#include "lpsflow/tensor_kernel.hpp"

namespace lpsflow {

enum class ConvectiveForm { Conservative, NonConservative, SkewSymmetric };

inline const char* to_string(ConvectiveForm f) {
    switch (f) {
    case ConvectiveForm::Conservative: return "conservative";
    case ConvectiveForm::NonConservative: return "nonconservative";
    case ConvectiveForm::SkewSymmetric: return "skew";
    }
    return "?";
}

template <class F>
decltype(auto) dispatch_dim(int dim, F&& f) {
    switch (dim) {
    case 1: return f(std::integral_constant<int, 1>{});
    case 2: return f(std::integral_constant<int, 2>{});
    case 3: return f(std::integral_constant<int, 3>{});
    default: throw InvalidArgument("unsupported dimension " + std::to_string(dim));
    }
}

namespace detail {

inline ElementRule squared_rule(const ElementRule& r) {
    ElementRule s = r;
    for (auto* v : {&s.interp, &s.deriv, &s.interp_t, &s.deriv_t})
        for (auto& x : *v) x *= x;
    return s;
}

} // namespace detail

class Operators {
public:
    /// Per-thread scratch buffers handed to element bodies.
    struct Workspace {
        explicit Workspace(std::size_t n) {
            for (auto& b : buf) b.assign(n, 0.0);
        }
        double* operator[](int i) { return buf[static_cast<std::size_t>(i)].data(); }
        std::array<std::vector<double>, 24> buf;
    };

    explicit Operators(const Mesh& mesh) : Operators(mesh, QuadratureMode::natural(mesh.spacing())) {}

    Operators(const Mesh& mesh, QuadratureMode mode)
        : mesh_(&mesh), mode_(mode), rule_(make_element_rule(mesh.basis(), mode)),
          squared_(detail::squared_rule(rule_)) {
        const auto& h = mesh.element_lengths();
        jac_det_ = 1.0;
        for (int a = 0; a < mesh.dim(); ++a) {
            jac_det_ *= 0.5 * h[a];
            inv_scale_[a] = 2.0 / h[a];
        }
        assemble_lumped_mass();
    }

    const Mesh& mesh() const { return *mesh_; }
    int dim() const { return mesh_->dim(); }
    std::size_t num_dofs() const { return mesh_->num_dofs(); }
    QuadratureMode quadrature_mode() const { return mode_; }
    const ElementRule& rule() const { return rule_; }
    bool collocated() const { return rule_.collocated; }
    const ScalarField& lumped_mass() const { return lumped_mass_; }
    double volume() const { return mesh_->volume(); }
    double jacobian_determinant() const { return jac_det_; }
    /// d(xi_a)/d(x_a) = 2/h_a.
    double inverse_scale(int axis) const { return inv_scale_[axis]; }

    /// Worker threads for element loops (only meaningful with OpenMP).
    void set_workers(int n) { workers_ = n < 1 ? 1 : n; }
    int workers() const { return workers_; }

    ScalarField zero_scalar() const { return ScalarField(num_dofs()); }
    VectorField zero_vector(int ncomp = -1) const { return VectorField(ncomp < 0 ? dim() : ncomp, num_dofs()); }

    /// Element loop over colours: elements of one colour share no DoF, so
    /// scattering from a colour is race free and the accumulation order per DoF
    /// is fixed.
    template <int Dim, class Body>
    void element_loop(const ElementRule& rule, Body&& body) const {
        const auto& colors = mesh_->colors();
        std::size_t ws = 1;
        for (int a = 0; a < Dim; ++a) ws *= static_cast<std::size_t>(std::max(rule.n, rule.q));
#ifdef _OPENMP
#pragma omp parallel num_threads(workers_) if (workers_ > 1)
#endif
        {
            ElementKernel<Dim> kernel(rule);
            Workspace w(ws);
            for (const auto& color : colors) {
                const auto n = static_cast<std::ptrdiff_t>(color.size());
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
                for (std::ptrdiff_t i = 0; i < n; ++i) body(kernel, w, color[static_cast<std::size_t>(i)]);
            }
        }
    }

    template <int Dim, class Body>
    void element_loop(Body&& body) const {
        element_loop<Dim>(rule_, std::forward<Body>(body));
    }

    void gather(std::size_t e, const ScalarField& f, double* local) const {
        const auto dofs = mesh_->element_dofs(e);
        for (std::size_t i = 0; i < dofs.size(); ++i) local[i] = f[dofs[i]];
    }

    void scatter_add(std::size_t e, const double* local, ScalarField& f) const {
        const auto dofs = mesh_->element_dofs(e);
        for (std::size_t i = 0; i < dofs.size(); ++i) f[dofs[i]] += local[i];
    }

    /// Physical coordinates of every quadrature point of element e.
    std::vector<Point> quadrature_points(std::size_t e) const {
        const int q = rule_.q;
        const auto origin = mesh_->element_origin(e);
        const auto& h = mesh_->element_lengths();
        std::size_t nq = 1;
        for (int a = 0; a < dim(); ++a) nq *= static_cast<std::size_t>(q);
        std::vector<Point> pts(nq, Point{0.0, 0.0, 0.0});
        for (std::size_t k = 0; k < nq; ++k) {
            std::size_t rem = k;
            for (int a = 0; a < dim(); ++a) {
                pts[k][a] = origin[a] + 0.5 * (rule_.points[rem % q] + 1.0) * h[a];
                rem /= q;
            }
        }
        return pts;
    }

    // ---------------------------------------------------------------- gradient

    /// Assembled int w dp/dx_k for every component k.
    VectorField weak_rhs_gradient(const ScalarField& p) const {
        check(p);
        VectorField out = zero_vector();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                gather(e, p, w[0]);
                for (int a = 0; a < Dim; ++a) {
                    k.derivative(a, w[0], w[1]);
                    const double s = jac_det_ * inv_scale_[a];
                    for (int q = 0; q < k.points(); ++q) w[1][q] *= W[q] * s;
                    k.values_transpose(w[1], w[2]);
                    scatter_add(e, w[2], out[a]);
                }
            });
        });
        return out;
    }

    /// Assembled int w div(u).
    ScalarField weak_rhs_divergence(const VectorField& u) const {
        check(u);
        ScalarField out = zero_scalar();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                const int nq = k.points();
                std::fill(w[3], w[3] + nq, 0.0);
                for (int a = 0; a < Dim; ++a) {
                    gather(e, u[a], w[0]);
                    k.derivative(a, w[0], w[1]);
                    for (int q = 0; q < nq; ++q) w[3][q] += inv_scale_[a] * w[1][q];
                }
                for (int q = 0; q < nq; ++q) w[3][q] *= W[q] * jac_det_;
                k.values_transpose(w[3], w[2]);
                scatter_add(e, w[2], out);
            });
        });
        return out;
    }

    /// g_h(phi): lumped-mass L2 projection of grad(phi) onto the continuous space.
    VectorField project_gradient(const ScalarField& phi) const {
        VectorField g = weak_rhs_gradient(phi);
        for (int a = 0; a < dim(); ++a) divide_by_mass(g[a]);
        return g;
    }

    void divide_by_mass(ScalarField& f) const {
        for (std::size_t i = 0; i < f.size(); ++i) f[i] /= lumped_mass_[i];
    }

    // --------------------------------------------------------------- stiffness

    /// Assembled int grad(w).grad(phi) (symmetric positive semi-definite).
    ScalarField weak_laplacian(const ScalarField& phi) const { return weighted_laplacian(phi, nullptr); }

    /// Assembled sum_e c_e int_{K_e} grad(w).grad(phi); nullptr means c_e = 1.
    ScalarField weighted_laplacian(const ScalarField& phi, const std::vector<double>* coef) const {
        check(phi);
        ScalarField out = zero_scalar();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const double c = coef ? (*coef)[e] : 1.0;
                if (c == 0.0) return;
                const auto& W = k.reference_weights();
                const int nq = k.points();
                const int np = k.nodes();
                gather(e, phi, w[0]);
                std::fill(w[2], w[2] + np, 0.0);
                for (int a = 0; a < Dim; ++a) {
                    k.derivative(a, w[0], w[1]);
                    const double s = c * jac_det_ * inv_scale_[a] * inv_scale_[a];
                    for (int q = 0; q < nq; ++q) w[1][q] *= W[q] * s;
                    k.derivative_transpose(a, w[1], w[3]);
                    for (int i = 0; i < np; ++i) w[2][i] += w[3][i];
                }
                scatter_add(e, w[2], out);
            });
        });
        return out;
    }

    /// Assembled int (d phi_i/dx_a)^2 for every axis a: the diagonal pieces of
    /// the stiffness matrix.
    VectorField stiffness_diagonal_parts() const {
        VectorField out = zero_vector();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>(squared_, [&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                for (int a = 0; a < Dim; ++a) {
                    const double s = jac_det_ * inv_scale_[a] * inv_scale_[a];
                    for (int q = 0; q < k.points(); ++q) w[1][q] = W[q] * s;
                    k.derivative_transpose(a, w[1], w[2]);
                    scatter_add(e, w[2], out[a]);
                }
            });
        });
        return out;
    }

    ScalarField laplacian_diagonal() const {
        const auto parts = stiffness_diagonal_parts();
        ScalarField diag = zero_scalar();
        for (int a = 0; a < dim(); ++a) diag += parts[a];
        return diag;
    }

    /// Assembled int grad(w) : nu (grad u + grad u^T), the viscous stress operator.
    VectorField symmetric_stiffness(const VectorField& u, double nu) const {
        check(u);
        VectorField out = zero_vector();
        if (nu == 0.0) return out;
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                const int nq = k.points();
                const int np = k.nodes();
                // w[1 + c*Dim + a] = d u_c / d x_a at the quadrature points
                for (int c = 0; c < Dim; ++c) {
                    gather(e, u[c], w[0]);
                    for (int a = 0; a < Dim; ++a) {
                        double* g = w[1 + c * Dim + a];
                        k.derivative(a, w[0], g);
                        for (int q = 0; q < nq; ++q) g[q] *= inv_scale_[a];
                    }
                }
                double* tau = w[1 + Dim * Dim];
                double* acc = w[2 + Dim * Dim];
                double* tmp = w[3 + Dim * Dim];
                for (int c = 0; c < Dim; ++c) {
                    std::fill(acc, acc + np, 0.0);
                    for (int a = 0; a < Dim; ++a) {
                        const double* gca = w[1 + c * Dim + a];
                        const double* gac = w[1 + a * Dim + c];
                        const double s = nu * jac_det_ * inv_scale_[a];
                        for (int q = 0; q < nq; ++q) tau[q] = (gca[q] + gac[q]) * W[q] * s;
                        k.derivative_transpose(a, tau, tmp);
                        for (int i = 0; i < np; ++i) acc[i] += tmp[i];
                    }
                    scatter_add(e, acc, out[c]);
                }
            });
        });
        return out;
    }

    // ---------------------------------------------------------------- convection

    /// Assembled weak residual int w . L_N(u) of the nonlinear convective term.
    ///   NonConservative: (u.grad)u at the quadrature points
    ///   SkewSymmetric:   (u.grad)u + 1/2 (div u) u
    ///   Conservative:    div(I_h(u (x) u)), the divergence of the nodal flux interpolant
    VectorField convective_term(const VectorField& u, ConvectiveForm form) const {
        check(u);
        VectorField out = zero_vector();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                const int nq = k.points();
                const int np = k.nodes();
                // nodal velocity in w[0..Dim), values at points in w[Dim..2Dim)
                for (int c = 0; c < Dim; ++c) {
                    gather(e, u[c], w[c]);
                    k.values(w[c], w[Dim + c]);
                }
                double* res = w[2 * Dim];
                double* tmp = w[2 * Dim + 1];
                double* out_local = w[2 * Dim + 2];
                double* divu = w[2 * Dim + 3];
                double* flux = w[2 * Dim + 4];
                if (form != ConvectiveForm::Conservative) {
                    std::fill(divu, divu + nq, 0.0);
                    if (form == ConvectiveForm::SkewSymmetric) {
                        for (int a = 0; a < Dim; ++a) {
                            k.derivative(a, w[a], tmp);
                            for (int q = 0; q < nq; ++q) divu[q] += inv_scale_[a] * tmp[q];
                        }
                    }
                }
                for (int c = 0; c < Dim; ++c) {
                    std::fill(res, res + nq, 0.0);
                    if (form == ConvectiveForm::Conservative) {
                        for (int a = 0; a < Dim; ++a) {
                            for (int i = 0; i < np; ++i) flux[i] = w[a][i] * w[c][i];
                            k.derivative(a, flux, tmp);
                            for (int q = 0; q < nq; ++q) res[q] += inv_scale_[a] * tmp[q];
                        }
                    } else {
                        for (int a = 0; a < Dim; ++a) {
                            k.derivative(a, w[c], tmp);
                            const double* ua = w[Dim + a];
                            for (int q = 0; q < nq; ++q) res[q] += ua[q] * inv_scale_[a] * tmp[q];
                        }
                        if (form == ConvectiveForm::SkewSymmetric) {
                            const double* uc = w[Dim + c];
                            for (int q = 0; q < nq; ++q) res[q] += 0.5 * divu[q] * uc[q];
                        }
                    }
                    for (int q = 0; q < nq; ++q) res[q] *= W[q] * jac_det_;
                    k.values_transpose(res, out_local);
                    scatter_add(e, out_local, out[c]);
                }
            });
        });
        return out;
    }

    // -------------------------------------------------------------------- curl

    /// Nodal vorticity: lumped-mass projection of curl(u). In 2D the result has
    /// one component (omega_z).
    VectorField curl(const VectorField& u) const {
        check(u);
        LPSFLOW_REQUIRE(dim() >= 2, InvalidArgument, "curl: requires dim 2 or 3");
        const int ncomp = dim() == 2 ? 1 : 3;
        VectorField out = zero_vector(ncomp);
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            if constexpr (Dim >= 2) {
                element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                    const auto& W = k.reference_weights();
                    const int nq = k.points();
                    // du_c/dx_a in w[1 + c*Dim + a]
                    for (int c = 0; c < Dim; ++c) {
                        gather(e, u[c], w[0]);
                        for (int a = 0; a < Dim; ++a) {
                            double* g = w[1 + c * Dim + a];
                            k.derivative(a, w[0], g);
                            for (int q = 0; q < nq; ++q) g[q] *= inv_scale_[a];
                        }
                    }
                    auto grad = [&](int c, int a) { return w[1 + c * Dim + a]; };
                    double* val = w[1 + Dim * Dim];
                    double* loc = w[2 + Dim * Dim];
                    auto emit = [&](int comp, int c1, int a1, int c2, int a2) {
                        // omega = du_c1/dx_a1 - du_c2/dx_a2
                        const double* g1 = grad(c1, a1);
                        const double* g2 = grad(c2, a2);
                        for (int q = 0; q < nq; ++q) val[q] = (g1[q] - g2[q]) * W[q] * jac_det_;
                        k.values_transpose(val, loc);
                        scatter_add(e, loc, out[comp]);
                    };
                    if constexpr (Dim == 2) {
                        emit(0, 1, 0, 0, 1);
                    } else {
                        emit(0, 2, 1, 1, 2);
                        emit(1, 0, 2, 2, 0);
                        emit(2, 1, 0, 0, 1);
                    }
                });
            }
        });
        for (int c = 0; c < ncomp; ++c) divide_by_mass(out[c]);
        return out;
    }

    /// Curl of a scalar stream-like field psi e_z in 2D: (d psi/dy, -d psi/dx),
    /// by lumped projection. Used for the double curl of planar flows.
    VectorField curl_of_scalar(const ScalarField& psi) const {
        LPSFLOW_REQUIRE(dim() == 2, InvalidArgument, "curl_of_scalar: requires dim 2");
        VectorField g = project_gradient(psi);
        VectorField out = zero_vector();
        out[0] = g[1];
        out[1] = g[0];
        out[1] *= -1.0;
        return out;
    }

    // ----------------------------------------------------------------- LPS term

    /// Assembled sum_e c_e int grad(w) . (g - grad(phi)) with g a nodal vector field.
    ScalarField projection_fluctuation(const ScalarField& phi, const VectorField& g,
                                       const std::vector<double>& coef) const {
        check(phi);
        check(g);
        ScalarField out = zero_scalar();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const double c = coef[e];
                if (c == 0.0) return;
                const auto& W = k.reference_weights();
                const int nq = k.points();
                const int np = k.nodes();
                gather(e, phi, w[0]);
                std::fill(w[2], w[2] + np, 0.0);
                for (int a = 0; a < Dim; ++a) {
                    k.derivative(a, w[0], w[1]);
                    gather(e, g[a], w[4]);
                    k.values(w[4], w[5]);
                    const double s = c * jac_det_ * inv_scale_[a];
                    for (int q = 0; q < nq; ++q) w[1][q] = (w[5][q] - inv_scale_[a] * w[1][q]) * W[q] * s;
                    k.derivative_transpose(a, w[1], w[3]);
                    for (int i = 0; i < np; ++i) w[2][i] += w[3][i];
                }
                scatter_add(e, w[2], out);
            });
        });
        return out;
    }

    // ---------------------------------------------------------------- integrals

    /// Assembled int w f for a function given pointwise in space.
    ScalarField weak_source(const std::function<double(const Point&)>& f) const {
        ScalarField out = zero_scalar();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                const auto pts = quadrature_points(e);
                for (int q = 0; q < k.points(); ++q) w[1][q] = f(pts[q]) * W[q] * jac_det_;
                k.values_transpose(w[1], w[2]);
                scatter_add(e, w[2], out);
            });
        });
        return out;
    }

    /// Quadrature of sum_c u_c^2 over the domain.
    double integrate_squares(const VectorField& u) const {
        check(u);
        std::vector<double> per_elem(mesh_->num_elements(), 0.0);
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                double s = 0.0;
                for (int c = 0; c < u.ncomp(); ++c) {
                    gather(e, u[c], w[0]);
                    k.values(w[0], w[1]);
                    for (int q = 0; q < k.points(); ++q) s += W[q] * w[1][q] * w[1][q];
                }
                per_elem[e] = s * jac_det_;
            });
        });
        return blocked_sum(per_elem.size(), [&](std::size_t e) { return per_elem[e]; });
    }

    /// Quadrature of (phi_h - exact)^2 over the domain.
    double integrate_squared_error(const ScalarField& phi, const std::function<double(const Point&)>& exact) const {
        check(phi);
        std::vector<double> per_elem(mesh_->num_elements(), 0.0);
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                const auto pts = quadrature_points(e);
                gather(e, phi, w[0]);
                k.values(w[0], w[1]);
                double s = 0.0;
                for (int q = 0; q < k.points(); ++q) {
                    const double diff = w[1][q] - exact(pts[q]);
                    s += W[q] * diff * diff;
                }
                per_elem[e] = s * jac_det_;
            });
        });
        return blocked_sum(per_elem.size(), [&](std::size_t e) { return per_elem[e]; });
    }

    /// Quadrature of |g - grad(phi_h)|^2 for a nodal vector field g.
    double integrate_gradient_mismatch(const ScalarField& phi, const VectorField& g) const {
        check(phi);
        check(g);
        std::vector<double> per_elem(mesh_->num_elements(), 0.0);
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                gather(e, phi, w[0]);
                double s = 0.0;
                for (int a = 0; a < Dim; ++a) {
                    k.derivative(a, w[0], w[1]);
                    gather(e, g[a], w[2]);
                    k.values(w[2], w[3]);
                    for (int q = 0; q < k.points(); ++q) {
                        const double diff = w[3][q] - inv_scale_[a] * w[1][q];
                        s += W[q] * diff * diff;
                    }
                }
                per_elem[e] = s * jac_det_;
            });
        });
        return blocked_sum(per_elem.size(), [&](std::size_t e) { return per_elem[e]; });
    }

    /// Nodal interpolant of a pointwise function.
    ScalarField interpolate(const std::function<double(const Point&)>& f) const {
        ScalarField out = zero_scalar();
        for (std::size_t i = 0; i < num_dofs(); ++i) out[i] = f(mesh_->node_coord(i));
        return out;
    }

    void check(const ScalarField& f) const {
        LPSFLOW_REQUIRE(f.size() == num_dofs(), MeshMismatch,
                        "field has " + std::to_string(f.size()) + " entries, mesh has " +
                            std::to_string(num_dofs()) + " DoFs");
    }
    void check(const VectorField& u) const {
        LPSFLOW_REQUIRE(u.ncomp() >= 1, MeshMismatch, "vector field has no components");
        for (int c = 0; c < u.ncomp(); ++c) check(u[c]);
    }

private:
    void assemble_lumped_mass() {
        lumped_mass_ = zero_scalar();
        dispatch_dim(dim(), [&](auto d) {
            constexpr int Dim = decltype(d)::value;
            element_loop<Dim>([&](ElementKernel<Dim>& k, Workspace& w, std::size_t e) {
                const auto& W = k.reference_weights();
                for (int q = 0; q < k.points(); ++q) w[1][q] = W[q] * jac_det_;
                k.values_transpose(w[1], w[2]);
                scatter_add(e, w[2], lumped_mass_);
            });
        });
        for (std::size_t i = 0; i < lumped_mass_.size(); ++i) {
            if (!(lumped_mass_[i] > 0.0)) {
                throw InvalidArgument("lumped mass entry " + std::to_string(i) +
                                      " is not positive (degenerate element or unsuitable quadrature)");
            }
        }
    }

    const Mesh* mesh_;
    QuadratureMode mode_;
    ElementRule rule_;
    ElementRule squared_;
    ScalarField lumped_mass_;
    double jac_det_ = 1.0;
    std::array<double, 3> inv_scale_{1.0, 1.0, 1.0};
    int workers_ = 1;
};

// Free-function spellings of the operator set.

inline ScalarField assemble_lumped_mass(const Operators& ops) { return ops.lumped_mass(); }

inline ScalarField apply_weak_rhs_divergence(const Operators& ops, const VectorField& u) {
    return ops.weak_rhs_divergence(u);
}

inline VectorField apply_weak_rhs_gradient(const Operators& ops, const ScalarField& p) {
    return ops.weak_rhs_gradient(p);
}

inline VectorField project_gradient(const Operators& ops, const ScalarField& phi) { return ops.project_gradient(phi); }

inline ScalarField apply_weak_laplacian(const Operators& ops, const ScalarField& phi) {
    return ops.weak_laplacian(phi);
}

inline VectorField convective_term(const Operators& ops, const VectorField& u, ConvectiveForm form) {
    return ops.convective_term(u, form);
}

inline VectorField curl(const Operators& ops, const VectorField& u) { return ops.curl(u); }

} // namespace lpsflow
