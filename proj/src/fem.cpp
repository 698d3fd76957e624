#include "waveinv/fem.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace waveinv {

SpMat assemble_mass(const Mesh& mesh) {
    std::vector<Triplet> trip;
    trip.reserve(9 * mesh.tri_count());
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double s = mesh.tri_area(t) / 12.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trip.emplace_back(tri[a], tri[b], (a == b ? 2.0 : 1.0) * s);
    }
    SpMat M(mesh.node_count(), mesh.node_count());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

SpMat assemble_weighted_stiffness(const Mesh& mesh, const Vec& field) {
    if (field.size() != mesh.node_count())
        throw ValidationError("assemble_stiffness: coefficient size mismatch");
    std::vector<Triplet> trip;
    trip.reserve(9 * mesh.tri_count());
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double w = (field[tri[0]] + field[tri[1]] + field[tri[2]]) / 3.0;
        if (w == 0.0)
            continue;
        const auto g = mesh.tri_grads(t);
        const double area = mesh.tri_area(t);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trip.emplace_back(tri[a], tri[b], w * area * g.col(a).dot(g.col(b)));
    }
    SpMat A(mesh.node_count(), mesh.node_count());
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

SpMat assemble_stiffness(const Mesh& mesh, const Vec& coeff) {
    if (coeff.size() != mesh.node_count())
        throw ValidationError("assemble_stiffness: coefficient size mismatch");
    if (coeff.minCoeff() <= 0.0)
        throw SolverError("assemble_stiffness: nonpositive coefficient, min = " +
                          std::to_string(coeff.minCoeff()));
    return assemble_weighted_stiffness(mesh, coeff);
}

Vec point_source_load(const Mesh& mesh, double x, double y) {
    const int t = mesh.locate(x, y); // throws if outside
    const auto& tri = mesh.triangles[t];
    const auto g = mesh.tri_grads(t);
    Vec load = Vec::Zero(mesh.node_count());
    // barycentric evaluation: phi_a(x) = phi_a(v_a-anchor) + grad . (x - v_a)
    const Eigen::Vector2d p(x, y);
    for (int a = 0; a < 3; ++a) {
        const double val = 1.0 + g.col(a).dot(p - mesh.nodes[tri[a]]);
        load[tri[a]] = val;
    }
    return load;
}

Vec patch_mean_weights(const Mesh& mesh, const Rect& patch) {
    if (!(patch.area() > 0))
        throw ValidationError("patch_mean_weights: degenerate patch");
    const double tol = 1e-9 * std::max({1.0, mesh.domain.width(), mesh.domain.height()});
    Vec w = Vec::Zero(mesh.node_count());
    double covered = 0.0;
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        bool inside = true;
        for (int a = 0; a < 3; ++a)
            inside = inside && patch.contains(mesh.nodes[tri[a]].x(), mesh.nodes[tri[a]].y(), tol);
        if (!inside)
            continue;
        const double area = mesh.tri_area(t);
        covered += area;
        for (int a = 0; a < 3; ++a)
            w[tri[a]] += area / 3.0;
    }
    if (std::abs(covered - patch.area()) > 1e-9 * patch.area())
        throw ValidationError("patch_mean_weights: patch is not tiled exactly by the mesh");
    return w / patch.area();
}

Vec lumped_areas(const Mesh& mesh) {
    Vec d = Vec::Zero(mesh.node_count());
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const double third = mesh.tri_area(t) / 3.0;
        for (int a = 0; a < 3; ++a)
            d[mesh.triangles[t][a]] += third;
    }
    return d;
}

Vec l2_load(const Mesh& mesh, const std::function<double(double, double)>& f) {
    Vec load = Vec::Zero(mesh.node_count());
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Eigen::Vector2d& a = mesh.nodes[tri[0]];
        const Eigen::Vector2d& b = mesh.nodes[tri[1]];
        const Eigen::Vector2d& c = mesh.nodes[tri[2]];
        const Eigen::Vector2d mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
        const double s = mesh.tri_area(t) / 3.0;
        const double fab = f(mab.x(), mab.y());
        const double fbc = f(mbc.x(), mbc.y());
        const double fca = f(mca.x(), mca.y());
        // hat values at edge midpoints are 1/2 on the two adjacent vertices
        load[tri[0]] += s * 0.5 * (fab + fca);
        load[tri[1]] += s * 0.5 * (fab + fbc);
        load[tri[2]] += s * 0.5 * (fbc + fca);
    }
    return load;
}

Vec project_l2(const Mesh& mesh, const SpMat& mass, const std::function<double(double, double)>& f) {
    Eigen::SimplicialLDLT<SpMat> solver(mass);
    if (solver.info() != Eigen::Success)
        throw SolverError("project_l2: mass factorization failed");
    Vec s = solver.solve(l2_load(mesh, f));
    if (solver.info() != Eigen::Success)
        throw SolverError("project_l2: solve failed");
    return s;
}

} // namespace waveinv
