#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "lpsflow/mesh.hpp"

using namespace lpsflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MeshSpec box(int dim, int n, int p, BoundaryKind kind, NodeSpacing s = NodeSpacing::GLL, double lo = 0.0,
             double hi = 1.0) {
    MeshSpec m = MeshSpec::periodic_box(dim, lo, hi, n, p, s);
    m.faces.fill(kind);
    return m;
}

} // namespace

TEST(Mesh, ShearLayerGridHas3600Dofs) {
    const Mesh m(MeshSpec::periodic_box(2, 0.0, kTwoPi, 60, 1));
    EXPECT_EQ(m.num_dofs(), 3600u);
    EXPECT_EQ(m.dofs_per_axis()[0], 60);
    const Mesh coarse(MeshSpec::periodic_box(2, 0.0, kTwoPi, 30, 1));
    EXPECT_EQ(coarse.num_dofs(), 900u);
}

TEST(Mesh, SingleLinearElementWithWalls) {
    const Mesh m(box(1, 1, 1, BoundaryKind::DirichletWall));
    ASSERT_EQ(m.num_dofs(), 2u);
    EXPECT_EQ(m.node_coord(0)[0], 0.0);
    EXPECT_EQ(m.node_coord(1)[0], 1.0);
}

TEST(Mesh, PeriodicCubeDofCountMatchesEnumeration) {
    const Mesh m(MeshSpec::periodic_box(3, 0.0, kTwoPi, 16, 4));
    EXPECT_EQ(m.num_dofs(), 262144u);
    std::set<std::size_t> seen;
    for (std::size_t e = 0; e < m.num_elements(); ++e)
        for (auto d : m.element_dofs(e)) seen.insert(d);
    EXPECT_EQ(seen.size(), 262144u);
    EXPECT_EQ(*seen.rbegin(), 262143u);
}

TEST(Mesh, ElementSize) {
    EXPECT_NEAR(Mesh(MeshSpec::periodic_box(1, 0.0, kTwoPi, 16, 2)).element_size(0), std::numbers::pi / 8, 1e-15);
    EXPECT_NEAR(Mesh(box(3, 1, 1, BoundaryKind::DirichletWall)).element_size(0), 1.0, 1e-15);
    EXPECT_NEAR(Mesh(MeshSpec::periodic_box(2, 0.0, kTwoPi, 30, 1)).element_size(5), std::numbers::pi / 15, 1e-15);
}

TEST(Mesh, AnisotropicElementUsesMinimumEdge) {
    MeshSpec s = MeshSpec::periodic_box(2, 0.0, 1.0, 4, 2);
    s.upper = {2.0, 1.0, 1.0};
    s.elems = {4, 5, 1};
    const Mesh m(s);
    EXPECT_NEAR(m.element_size(3), 0.2, 1e-15);
}

TEST(Mesh, InvalidElementIdThrows) {
    const Mesh m(box(2, 2, 1, BoundaryKind::Periodic));
    EXPECT_THROW(m.element_size(4), InvalidArgument);
}

TEST(Mesh, DofCountPerAxisRule) {
    for (int p = 1; p <= 4; ++p)
        for (int n = 1; n <= 3; ++n) {
            const Mesh wall(box(2, n, p, BoundaryKind::DirichletWall));
            EXPECT_EQ(wall.dofs_per_axis()[0], n * p + 1);
            if (n * p >= 2) {
                const Mesh per(box(2, n, p, BoundaryKind::Periodic));
                EXPECT_EQ(per.dofs_per_axis()[1], n * p);
            }
        }
}

TEST(Mesh, ReferenceMapRoundTrip) {
    for (auto spacing : {NodeSpacing::GLL, NodeSpacing::Equispaced}) {
        for (auto kind : {BoundaryKind::Periodic, BoundaryKind::DirichletWall}) {
            const Mesh m(box(3, 3, 3, kind, spacing, -1.0, 2.0));
            const auto& nodes = m.basis().nodes;
            const auto& h = m.element_lengths();
            for (std::size_t e = 0; e < m.num_elements(); ++e) {
                const auto origin = m.element_origin(e);
                const auto dofs = m.element_dofs(e);
                std::size_t k = 0;
                for (int lz = 0; lz < 4; ++lz)
                    for (int ly = 0; ly < 4; ++ly)
                        for (int lx = 0; lx < 4; ++lx, ++k) {
                            const int l[3] = {lx, ly, lz};
                            const Point x = m.node_coord(dofs[k]);
                            for (int a = 0; a < 3; ++a) {
                                double ref = origin[a] + 0.5 * (nodes[l[a]] + 1.0) * h[a];
                                if (kind == BoundaryKind::Periodic && ref >= 2.0 - 1e-12) ref -= 3.0;
                                EXPECT_NEAR(x[a], ref, 1e-14 * 3.0);
                            }
                        }
            }
        }
    }
}

TEST(Mesh, PeriodicImagesShareOneId) {
    const Mesh m(box(2, 4, 2, BoundaryKind::Periodic));
    // the last element on the x axis wraps to DoF column 0
    const auto last = m.element_id({3, 0, 0});
    const auto first = m.element_id({0, 0, 0});
    EXPECT_EQ(m.element_dofs(last)[2], m.element_dofs(first)[0]);
    EXPECT_EQ(m.node_coord(m.element_dofs(first)[0])[0], 0.0);
}

TEST(Mesh, ElementVolumesSumToDomain) {
    MeshSpec s = box(3, 5, 2, BoundaryKind::DirichletWall, NodeSpacing::GLL, 0.0, 1.0);
    s.upper = {0.3, 2.0, 7.0};
    s.elems = {3, 5, 7};
    const Mesh m(s);
    double v = 0.0;
    for (std::size_t e = 0; e < m.num_elements(); ++e) v += m.element_volume(e);
    EXPECT_NEAR(v, m.volume(), 1e-13 * m.volume());
    EXPECT_NEAR(m.volume(), 0.3 * 2.0 * 7.0, 1e-13);
}

TEST(Mesh, DofOrderingIsLexicographic) {
    const Mesh m(box(3, 2, 2, BoundaryKind::DirichletWall));
    const auto& n = m.dofs_per_axis();
    EXPECT_EQ(m.dof_id({1, 2, 3}), 1u + n[0] * (2u + n[1] * 3u));
    const auto idx = m.dof_index(m.dof_id({4, 0, 2}));
    EXPECT_EQ(idx[0], 4);
    EXPECT_EQ(idx[2], 2);
}

TEST(Mesh, FaceDofs) {
    MeshSpec s = box(2, 3, 2, BoundaryKind::Periodic);
    s.faces[2] = s.faces[3] = BoundaryKind::DirichletWall;
    const Mesh m(s);
    EXPECT_TRUE(m.face_dofs({0, 0}).empty());
    const auto bottom = m.face_dofs({1, 0});
    EXPECT_EQ(bottom.size(), 6u);
    for (auto d : bottom) EXPECT_EQ(m.node_coord(d)[1], 0.0);
    for (auto d : m.face_dofs({1, 1})) EXPECT_EQ(m.node_coord(d)[1], 1.0);
    EXPECT_EQ(m.face_elements({1, 1}).size(), 3u);
}

TEST(Mesh, ColoursNeverShareDofs) {
    for (int n : {1, 2, 3, 5}) {
        for (auto kind : {BoundaryKind::Periodic, BoundaryKind::DirichletWall}) {
            if (kind == BoundaryKind::Periodic && n * 1 < 2) continue;
            const Mesh m(box(3, n, 1, kind));
            std::size_t total = 0;
            for (const auto& colour : m.colors()) {
                std::set<std::size_t> used;
                for (auto e : colour) {
                    std::set<std::size_t> mine(m.element_dofs(e).begin(), m.element_dofs(e).end());
                    for (auto d : mine) EXPECT_TRUE(used.insert(d).second) << "n=" << n;
                }
                total += colour.size();
            }
            EXPECT_EQ(total, m.num_elements());
        }
    }
}

TEST(Mesh, ValidationErrors) {
    MeshSpec s = box(2, 2, 1, BoundaryKind::DirichletWall);
    s.order = 0;
    EXPECT_THROW(Mesh{s}, InvalidArgument);
    s = box(2, 2, 1, BoundaryKind::DirichletWall);
    s.upper[1] = s.lower[1];
    EXPECT_THROW(Mesh{s}, InvalidArgument);
    s = box(2, 2, 1, BoundaryKind::DirichletWall);
    s.faces[0] = BoundaryKind::Periodic;
    EXPECT_THROW(Mesh{s}, InvalidArgument);
    s = box(1, 1, 1, BoundaryKind::Periodic);
    EXPECT_THROW(Mesh{s}, InvalidArgument);
    s = box(2, 0, 1, BoundaryKind::DirichletWall);
    EXPECT_THROW(Mesh{s}, InvalidArgument);
    s = box(4, 1, 1, BoundaryKind::DirichletWall);
    EXPECT_THROW(Mesh{s}, InvalidArgument);
}
