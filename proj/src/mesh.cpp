#include "waveinv/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace waveinv {

Mesh build_rect_mesh(const Rect& domain, int nx, int ny) {
    if (nx < 2 || ny < 2)
        throw ValidationError("build_rect_mesh: need at least 2 nodes per direction");
    if (!(domain.width() > 0) || !(domain.height() > 0))
        throw ValidationError("build_rect_mesh: degenerate rectangle");

    Mesh m;
    m.domain = domain;
    m.nx = nx;
    m.ny = ny;
    m.nodes.reserve(static_cast<std::size_t>(nx) * ny);
    m.boundary_node.assign(static_cast<std::size_t>(nx) * ny, 0);

    const double hx = domain.width() / (nx - 1);
    const double hy = domain.height() / (ny - 1);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double x = (i == nx - 1) ? domain.x1 : domain.x0 + i * hx;
            const double y = (j == ny - 1) ? domain.y1 : domain.y0 + j * hy;
            m.nodes.emplace_back(x, y);
            if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1)
                m.boundary_node[m.node_index(i, j)] = 1;
        }
    }

    m.triangles.reserve(2 * static_cast<std::size_t>(nx - 1) * (ny - 1));
    for (int j = 0; j < ny - 1; ++j) {
        for (int i = 0; i < nx - 1; ++i) {
            const int v00 = m.node_index(i, j);
            const int v10 = m.node_index(i + 1, j);
            const int v01 = m.node_index(i, j + 1);
            const int v11 = m.node_index(i + 1, j + 1);
            m.triangles.push_back({v00, v10, v11});
            m.triangles.push_back({v00, v11, v01});
        }
    }
    return m;
}

double Mesh::tri_area(int t) const {
    const auto& tri = triangles[t];
    const auto& a = nodes[tri[0]];
    const auto& b = nodes[tri[1]];
    const auto& c = nodes[tri[2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Eigen::Matrix<double, 2, 3> Mesh::tri_grads(int t) const {
    const auto& tri = triangles[t];
    const auto& a = nodes[tri[0]];
    const auto& b = nodes[tri[1]];
    const auto& c = nodes[tri[2]];
    const double twoA = 2.0 * tri_area(t);
    Eigen::Matrix<double, 2, 3> g;
    // grad of hat at vertex v = rotated opposite edge / (2|T|)
    g.col(0) << (b.y() - c.y()) / twoA, (c.x() - b.x()) / twoA;
    g.col(1) << (c.y() - a.y()) / twoA, (a.x() - c.x()) / twoA;
    g.col(2) << (a.y() - b.y()) / twoA, (b.x() - a.x()) / twoA;
    return g;
}

int Mesh::locate(double x, double y) const {
    const double tol = 1e-12 * std::max({std::abs(domain.x0), std::abs(domain.x1),
                                         std::abs(domain.y0), std::abs(domain.y1), 1.0});
    if (!domain.contains(x, y, tol))
        throw ValidationError("locate: point outside domain");
    const double hx = dx(), hy = dy();
    int ci = static_cast<int>(std::floor((x - domain.x0) / hx));
    int cj = static_cast<int>(std::floor((y - domain.y0) / hy));
    ci = std::clamp(ci, 0, nx - 2);
    cj = std::clamp(cj, 0, ny - 2);
    // local coordinates within the cell decide the half; the diagonal runs
    // from (0,0) to (1,1), lower triangle has eta <= xi
    const double xi = (x - (domain.x0 + ci * hx)) / hx;
    const double eta = (y - (domain.y0 + cj * hy)) / hy;
    const int cell = 2 * (cj * (nx - 1) + ci);
    return (eta <= xi) ? cell : cell + 1;
}

int Mesh::nearest_line_x(double x) const {
    return std::clamp(static_cast<int>(std::lround((x - domain.x0) / dx())), 0, nx - 1);
}

int Mesh::nearest_line_y(double y) const {
    return std::clamp(static_cast<int>(std::lround((y - domain.y0) / dy())), 0, ny - 1);
}

bool Mesh::aligned_x(double x) const {
    const double xl = domain.x0 + nearest_line_x(x) * dx();
    return std::abs(x - xl) <= 1e-9 * std::max(1.0, domain.width());
}

bool Mesh::aligned_y(double y) const {
    const double yl = domain.y0 + nearest_line_y(y) * dy();
    return std::abs(y - yl) <= 1e-9 * std::max(1.0, domain.height());
}

} // namespace waveinv
