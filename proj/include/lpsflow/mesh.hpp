#pragma once

// Structured tensor-product meshes of axis-aligned boxes with periodic
// wrap-around. Global DoFs are numbered lexicographically with x fastest,
// i.e. id = ix + Nx*(iy + Ny*iz).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lpsflow/basis.hpp"
#include "lpsflow/errors.hpp"

namespace lpsflow {

enum class BoundaryKind { Periodic, DirichletWall, Outflow };

inline const char* to_string(BoundaryKind k) {
    switch (k) {
    case BoundaryKind::Periodic: return "periodic";
    case BoundaryKind::DirichletWall: return "wall";
    case BoundaryKind::Outflow: return "outflow";
    }
    return "?";
}

using Point = std::array<double, 3>;

/// Face id 2*axis + side, side 0 at the lower extent and 1 at the upper one.
struct FaceId {
    int axis = 0;
    int side = 0;

    int index() const { return 2 * axis + side; }
    static FaceId from_index(int f) { return {f / 2, f % 2}; }
    double normal_sign() const { return side == 0 ? -1.0 : 1.0; }
};

struct MeshSpec {
    int dim = 2;
    Point lower{0.0, 0.0, 0.0};
    Point upper{1.0, 1.0, 1.0};
    std::array<int, 3> elems{1, 1, 1};
    int order = 1;
    NodeSpacing spacing = NodeSpacing::GLL;
    std::array<BoundaryKind, 6> faces{BoundaryKind::Periodic, BoundaryKind::Periodic, BoundaryKind::Periodic,
                                      BoundaryKind::Periodic, BoundaryKind::Periodic, BoundaryKind::Periodic};

    static MeshSpec periodic_box(int dim, double lo, double hi, int n, int p,
                                 NodeSpacing spacing = NodeSpacing::GLL) {
        MeshSpec s;
        s.dim = dim;
        s.lower = {lo, lo, lo};
        s.upper = {hi, hi, hi};
        s.elems = {n, dim > 1 ? n : 1, dim > 2 ? n : 1};
        s.order = p;
        s.spacing = spacing;
        return s;
    }
};

class Mesh {
public:
    explicit Mesh(const MeshSpec& spec) : spec_(spec), basis_(validate_and_make_basis(spec)) {
        const int p = spec_.order;
        const int npe = p + 1;
        nodes_per_element_ = 1;
        num_elements_ = 1;
        num_dofs_ = 1;
        volume_ = 1.0;
        for (int a = 0; a < 3; ++a) {
            if (a >= dim()) {
                dofs_per_axis_[a] = 1;
                elems_[a] = 1;
                h_[a] = 0.0;
                continue;
            }
            const int n = spec_.elems[a];
            elems_[a] = n;
            dofs_per_axis_[a] = periodic(a) ? n * p : n * p + 1;
            h_[a] = (spec_.upper[a] - spec_.lower[a]) / n;
            nodes_per_element_ *= npe;
            num_elements_ *= static_cast<std::size_t>(n);
            num_dofs_ *= static_cast<std::size_t>(dofs_per_axis_[a]);
            volume_ *= spec_.upper[a] - spec_.lower[a];

            auto& c = axis_coords_[a];
            c.resize(static_cast<std::size_t>(dofs_per_axis_[a]));
            for (int j = 0; j < dofs_per_axis_[a]; ++j) {
                const int e = std::min(j / p, n - 1);
                const int i = j - e * p;
                c[j] = spec_.lower[a] + e * h_[a] + 0.5 * (basis_.nodes[i] + 1.0) * h_[a];
            }
            if (!periodic(a)) c.back() = spec_.upper[a];
        }

        elem_dofs_.resize(num_elements_ * nodes_per_element_);
        for (std::size_t e = 0; e < num_elements_; ++e) {
            const auto ei = element_index(e);
            std::size_t k = 0;
            const int nz = dim() > 2 ? npe : 1;
            const int ny = dim() > 1 ? npe : 1;
            for (int lz = 0; lz < nz; ++lz)
                for (int ly = 0; ly < ny; ++ly)
                    for (int lx = 0; lx < npe; ++lx) {
                        const std::array<int, 3> l{lx, ly, lz};
                        std::array<int, 3> g{0, 0, 0};
                        for (int a = 0; a < dim(); ++a) g[a] = (ei[a] * p + l[a]) % dofs_per_axis_[a];
                        elem_dofs_[e * nodes_per_element_ + k++] = dof_id(g);
                    }
        }
        build_colors();
    }

    const MeshSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }
    int order() const { return spec_.order; }
    NodeSpacing spacing() const { return spec_.spacing; }
    const Basis1D& basis() const { return basis_; }

    std::size_t num_dofs() const { return num_dofs_; }
    std::size_t num_elements() const { return num_elements_; }
    int nodes_per_element() const { return nodes_per_element_; }
    const std::array<int, 3>& dofs_per_axis() const { return dofs_per_axis_; }
    const std::array<int, 3>& elems_per_axis() const { return elems_; }
    double volume() const { return volume_; }

    bool periodic(int axis) const { return spec_.faces[2 * axis] == BoundaryKind::Periodic; }
    bool fully_periodic() const {
        for (int a = 0; a < dim(); ++a)
            if (!periodic(a)) return false;
        return true;
    }
    BoundaryKind face_kind(FaceId f) const { return spec_.faces[f.index()]; }

    std::span<const std::size_t> element_dofs(std::size_t e) const {
        return {elem_dofs_.data() + e * nodes_per_element_, static_cast<std::size_t>(nodes_per_element_)};
    }

    /// Element multi-index (ex, ey, ez).
    std::array<int, 3> element_index(std::size_t e) const {
        std::array<int, 3> ei{0, 0, 0};
        ei[0] = static_cast<int>(e % elems_[0]);
        ei[1] = static_cast<int>((e / elems_[0]) % elems_[1]);
        ei[2] = static_cast<int>(e / (static_cast<std::size_t>(elems_[0]) * elems_[1]));
        return ei;
    }

    std::size_t element_id(const std::array<int, 3>& ei) const {
        return static_cast<std::size_t>(ei[0]) +
               static_cast<std::size_t>(elems_[0]) *
                   (static_cast<std::size_t>(ei[1]) + static_cast<std::size_t>(elems_[1]) * ei[2]);
    }

    std::size_t dof_id(const std::array<int, 3>& g) const {
        return static_cast<std::size_t>(g[0]) +
               static_cast<std::size_t>(dofs_per_axis_[0]) *
                   (static_cast<std::size_t>(g[1]) + static_cast<std::size_t>(dofs_per_axis_[1]) * g[2]);
    }

    std::array<int, 3> dof_index(std::size_t id) const {
        std::array<int, 3> g{0, 0, 0};
        g[0] = static_cast<int>(id % dofs_per_axis_[0]);
        g[1] = static_cast<int>((id / dofs_per_axis_[0]) % dofs_per_axis_[1]);
        g[2] = static_cast<int>(id / (static_cast<std::size_t>(dofs_per_axis_[0]) * dofs_per_axis_[1]));
        return g;
    }

    const std::vector<double>& axis_coords(int axis) const { return axis_coords_[axis]; }

    Point node_coord(std::size_t id) const {
        const auto g = dof_index(id);
        Point x{0.0, 0.0, 0.0};
        for (int a = 0; a < dim(); ++a) x[a] = axis_coords_[a][g[a]];
        return x;
    }

    /// Lower corner of element e.
    Point element_origin(std::size_t e) const {
        const auto ei = element_index(e);
        Point x{0.0, 0.0, 0.0};
        for (int a = 0; a < dim(); ++a) x[a] = spec_.lower[a] + ei[a] * h_[a];
        return x;
    }

    /// Edge lengths of an element (all elements of the structured grid are equal).
    const Point& element_lengths(std::size_t = 0) const { return h_; }

    /// Element size used by the upwind viscosity: the minimum edge length.
    double element_size(std::size_t e) const {
        LPSFLOW_REQUIRE(e < num_elements_, InvalidArgument, "element_size: invalid element id");
        double h = h_[0];
        for (int a = 1; a < dim(); ++a) h = std::min(h, h_[a]);
        return h;
    }

    double element_volume(std::size_t) const {
        double v = 1.0;
        for (int a = 0; a < dim(); ++a) v *= h_[a];
        return v;
    }

    /// Global DoFs on a box face in lexicographic order. Empty for periodic faces.
    std::vector<std::size_t> face_dofs(FaceId f) const {
        std::vector<std::size_t> out;
        if (f.axis >= dim() || periodic(f.axis)) return out;
        const int fixed = f.side == 0 ? 0 : dofs_per_axis_[f.axis] - 1;
        for (int iz = 0; iz < dofs_per_axis_[2]; ++iz)
            for (int iy = 0; iy < dofs_per_axis_[1]; ++iy)
                for (int ix = 0; ix < dofs_per_axis_[0]; ++ix) {
                    std::array<int, 3> g{ix, iy, iz};
                    if (g[f.axis] == fixed) out.push_back(dof_id(g));
                }
        return out;
    }

    /// Elements touching a box face.
    std::vector<std::size_t> face_elements(FaceId f) const {
        std::vector<std::size_t> out;
        if (f.axis >= dim() || periodic(f.axis)) return out;
        const int fixed = f.side == 0 ? 0 : elems_[f.axis] - 1;
        for (std::size_t e = 0; e < num_elements_; ++e)
            if (element_index(e)[f.axis] == fixed) out.push_back(e);
        return out;
    }

    /// Element groups in which no two elements share a DoF.
    const std::vector<std::vector<std::size_t>>& colors() const { return colors_; }

private:
    static Basis1D validate_and_make_basis(const MeshSpec& s) {
        LPSFLOW_REQUIRE(s.dim >= 1 && s.dim <= 3, InvalidArgument, "mesh: dim must be 1, 2 or 3");
        LPSFLOW_REQUIRE(s.order >= 1, InvalidArgument, "mesh: polynomial order must be >= 1");
        for (int a = 0; a < s.dim; ++a) {
            const std::string ax = std::to_string(a);
            LPSFLOW_REQUIRE(s.elems[a] >= 1, InvalidArgument, "mesh: element count on axis " + ax + " must be >= 1");
            LPSFLOW_REQUIRE(std::isfinite(s.lower[a]) && std::isfinite(s.upper[a]) && s.upper[a] > s.lower[a],
                            InvalidArgument, "mesh: zero-measure or inverted extent on axis " + ax);
            const bool lo = s.faces[2 * a] == BoundaryKind::Periodic;
            const bool hi = s.faces[2 * a + 1] == BoundaryKind::Periodic;
            LPSFLOW_REQUIRE(lo == hi, InvalidArgument,
                            "mesh: conflicting tags on axis " + ax + " (periodic on one side only)");
            if (lo) {
                LPSFLOW_REQUIRE(s.elems[a] * s.order >= 2, InvalidArgument,
                                "mesh: periodic axis " + ax + " needs at least 2 DoFs");
            }
        }
        return make_basis(s.spacing, s.order);
    }

    void build_colors() {
        // per-axis colour e mod 2; an odd periodic axis needs a third colour for
        // the last element, which touches element 0 through the wrap-around.
        std::vector<std::vector<std::size_t>> buckets(27);
        for (std::size_t e = 0; e < num_elements_; ++e) {
            const auto ei = element_index(e);
            int c = 0, mult = 1;
            for (int a = 0; a < dim(); ++a) {
                int ca = ei[a] % 2;
                if (periodic(a) && elems_[a] % 2 == 1 && elems_[a] > 1 && ei[a] == elems_[a] - 1) ca = 2;
                c += ca * mult;
                mult *= 3;
            }
            buckets[c].push_back(e);
        }
        for (auto& b : buckets)
            if (!b.empty()) colors_.push_back(std::move(b));
    }

    MeshSpec spec_;
    Basis1D basis_;
    std::array<int, 3> dofs_per_axis_{1, 1, 1};
    std::array<int, 3> elems_{1, 1, 1};
    Point h_{0.0, 0.0, 0.0};
    std::array<std::vector<double>, 3> axis_coords_;
    std::vector<std::size_t> elem_dofs_;
    std::vector<std::vector<std::size_t>> colors_;
    std::size_t num_dofs_ = 0;
    std::size_t num_elements_ = 0;
    int nodes_per_element_ = 1;
    double volume_ = 0.0;
};

inline Mesh build_structured_mesh(const MeshSpec& spec) { return Mesh(spec); }

} // namespace lpsflow
