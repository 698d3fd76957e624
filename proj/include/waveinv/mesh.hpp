#pragma once

#include "waveinv/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace waveinv {

/// Structured triangulation of an axis-aligned rectangle. Nodes sit on a
/// tensor grid with nx*ny nodes; every grid cell is split along its
/// lower-left-to-upper-right diagonal, so triangle numbering is reproducible.
struct Mesh {
    Rect domain;
    int nx = 0, ny = 0; // node counts per direction
    std::vector<Eigen::Vector2d> nodes;
    std::vector<std::array<int, 3>> triangles; // positively oriented
    std::vector<std::uint8_t> boundary_node;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int tri_count() const { return static_cast<int>(triangles.size()); }
    double dx() const { return domain.width() / (nx - 1); }
    double dy() const { return domain.height() / (ny - 1); }
    int node_index(int i, int j) const { return j * nx + i; }

    double tri_area(int t) const;
    /// Gradients of the three nodal hats on triangle t, one per column.
    Eigen::Matrix<double, 2, 3> tri_grads(int t) const;

    /// Index of a triangle whose closure contains (x,y); points on shared
    /// edges may resolve to either neighbor.
    int locate(double x, double y) const;

    /// Nearest grid line index along x resp. y for a coordinate.
    int nearest_line_x(double x) const;
    int nearest_line_y(double y) const;
    /// True if the coordinate lies on a grid line (relative tolerance).
    bool aligned_x(double x) const;
    bool aligned_y(double y) const;
};

Mesh build_rect_mesh(const Rect& domain, int nx, int ny);

} // namespace waveinv
