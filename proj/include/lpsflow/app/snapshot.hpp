#pragma once

// Field snapshots: legacy VTK rectilinear grid (ASCII) and a CSV point cloud.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/mesh.hpp"

namespace lpsflow::app {

class IoError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double component(const VectorField& u, int c, std::size_t i) { return c < u.ncomp() ? u[c][i] : 0.0; }

} // namespace detail

/// DoF grid of the mesh written as a rectilinear grid with point arrays u, v, w, p.
/// Periodic images are not duplicated, so the upper periodic boundary is absent.
inline void write_vtk_snapshot(const std::string& path, const Mesh& mesh, const VectorField& u, const ScalarField& p,
                               double t) {
    LPSFLOW_REQUIRE(u.size() == mesh.num_dofs() && p.size() == mesh.num_dofs(), MeshMismatch,
                    "write_vtk_snapshot: field/mesh mismatch");
    std::ofstream os(path);
    if (!os) throw IoError("cannot write snapshot '" + path + "'");
    const auto& n = mesh.dofs_per_axis();
    std::array<int, 3> dims{1, 1, 1};
    for (int a = 0; a < mesh.dim(); ++a) dims[a] = n[a];
    os << "# vtk DataFile Version 3.0\n"
       << "lpsflow snapshot t=" << detail::fmt17(t) << "\nASCII\nDATASET RECTILINEAR_GRID\n"
       << "DIMENSIONS " << dims[0] << ' ' << dims[1] << ' ' << dims[2] << '\n';
    static const char* names[3] = {"X_COORDINATES", "Y_COORDINATES", "Z_COORDINATES"};
    for (int a = 0; a < 3; ++a) {
        os << names[a] << ' ' << dims[a] << " double\n";
        if (a < mesh.dim()) {
            for (double x : mesh.axis_coords(a)) os << detail::fmt17(x) << ' ';
        } else {
            os << 0;
        }
        os << '\n';
    }
    os << "POINT_DATA " << mesh.num_dofs() << '\n';
    auto write_array = [&](const char* name, auto value) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (std::size_t i = 0; i < mesh.num_dofs(); ++i) os << detail::fmt17(value(i)) << '\n';
    };
    write_array("u", [&](std::size_t i) { return detail::component(u, 0, i); });
    write_array("v", [&](std::size_t i) { return detail::component(u, 1, i); });
    write_array("w", [&](std::size_t i) { return detail::component(u, 2, i); });
    write_array("p", [&](std::size_t i) { return p[i]; });
    if (!os) throw IoError("write failed for '" + path + "'");
}

inline void write_csv_snapshot(const std::string& path, const Mesh& mesh, const VectorField& u, const ScalarField& p) {
    LPSFLOW_REQUIRE(u.size() == mesh.num_dofs() && p.size() == mesh.num_dofs(), MeshMismatch,
                    "write_csv_snapshot: field/mesh mismatch");
    std::ofstream os(path);
    if (!os) throw IoError("cannot write snapshot '" + path + "'");
    os << "x,y,z,u,v,w,p\n";
    for (std::size_t i = 0; i < mesh.num_dofs(); ++i) {
        const Point x = mesh.node_coord(i);
        os << detail::fmt17(x[0]) << ',' << detail::fmt17(x[1]) << ',' << detail::fmt17(x[2]) << ','
           << detail::fmt17(detail::component(u, 0, i)) << ',' << detail::fmt17(detail::component(u, 1, i)) << ','
           << detail::fmt17(detail::component(u, 2, i)) << ',' << detail::fmt17(p[i]) << '\n';
    }
    if (!os) throw IoError("write failed for '" + path + "'");
}

struct PointCloud {
    std::vector<Point> x;
    std::vector<std::array<double, 4>> values;  // u, v, w, p
};

inline PointCloud read_csv_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read snapshot '" + path + "'");
    std::string line;
    std::getline(in, line);
    if (line != "x,y,z,u,v,w,p") throw IoError("'" + path + "': unexpected header");
    PointCloud pc;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::array<double, 7> row{};
        int k = 0;
        while (std::getline(ss, cell, ',')) {
            if (k >= 7) break;
            try {
                row[k] = std::stod(cell);
            } catch (const std::exception&) {
                throw IoError("'" + path + "':" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            ++k;
        }
        if (k != 7) throw IoError("'" + path + "':" + std::to_string(lineno) + ": expected 7 columns");
        pc.x.push_back({row[0], row[1], row[2]});
        pc.values.push_back({row[3], row[4], row[5], row[6]});
    }
    return pc;
}

} // namespace lpsflow::app
