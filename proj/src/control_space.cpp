#include "waveinv/control_space.hpp"

#include <cmath>

namespace waveinv {

ControlSpace::ControlSpace(const Mesh& mesh, const Rect& control_rect)
    : mesh_(&mesh), rect_(control_rect) {
    if (!(rect_.area() > 0))
        throw ValidationError("ControlSpace: degenerate control rectangle");
    const double tol = 1e-9 * std::max({1.0, mesh.domain.width(), mesh.domain.height()});

    const int nt = mesh.tri_count();
    std::vector<std::uint8_t> tri_inside(nt, 0);
    std::vector<std::vector<int>> incident(mesh.node_count());
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        bool inside = true;
        for (int a = 0; a < 3; ++a) {
            inside = inside && rect_.contains(mesh.nodes[tri[a]].x(), mesh.nodes[tri[a]].y(), tol);
            incident[tri[a]].push_back(t);
        }
        tri_inside[t] = inside ? 1 : 0;
        if (inside)
            tri_ids_.push_back(t);
    }

    node_to_dof_.assign(mesh.node_count(), -1);
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (incident[n].empty())
            continue;
        bool all_inside = true;
        for (int t : incident[n])
            all_inside = all_inside && tri_inside[t];
        if (all_inside) {
            node_to_dof_[n] = static_cast<int>(node_ids_.size());
            node_ids_.push_back(n);
        }
    }
    if (node_ids_.empty())
        throw ValidationError("ControlSpace: control rectangle contains no admissible dofs");

    tri_data_.reserve(tri_ids_.size());
    for (int t : tri_ids_)
        tri_data_.push_back({t, mesh.tri_area(t), mesh.tri_grads(t), mesh.triangles[t]});

    lumped_ = Vec::Zero(dof_count());
    for (const auto& td : tri_data_)
        for (int a = 0; a < 3; ++a)
            if (const int dof = node_to_dof_[td.verts[a]]; dof >= 0)
                lumped_[dof] += td.area / 3.0;
    // supports of control dofs lie inside the closure, so every incident
    // triangle was counted and all weights are positive
    if (lumped_.minCoeff() <= 0)
        throw ValidationError("ControlSpace: nonpositive lumped weight");
}

Vec ControlSpace::extend_zero(const Vec& u) const {
    Vec out = Vec::Zero(mesh_->node_count());
    for (int k = 0; k < dof_count(); ++k)
        out[node_ids_[k]] = u[k];
    return out;
}

Vec ControlSpace::extend(const Vec& u, double offset) const {
    Vec out = Vec::Constant(mesh_->node_count(), offset);
    for (int k = 0; k < dof_count(); ++k)
        out[node_ids_[k]] += u[k];
    return out;
}

Vec ControlSpace::restrict_nodal(const Vec& field) const {
    Vec out(dof_count());
    for (int k = 0; k < dof_count(); ++k)
        out[k] = field[node_ids_[k]];
    return out;
}

SpMat assemble_gradient_op(const ControlSpace& cs) {
    std::vector<Triplet> trip;
    trip.reserve(6 * cs.tri_count());
    const auto& tds = cs.tri_data();
    for (int k = 0; k < cs.tri_count(); ++k) {
        const auto& td = tds[k];
        for (int a = 0; a < 3; ++a) {
            const int dof = cs.dof_of_node(td.verts[a]);
            if (dof < 0)
                continue; // zero-extended neighbor
            trip.emplace_back(2 * k, dof, td.area * td.grads(0, a));
            trip.emplace_back(2 * k + 1, dof, td.area * td.grads(1, a));
        }
    }
    SpMat Ah(2 * cs.tri_count(), cs.dof_count());
    Ah.setFromTriplets(trip.begin(), trip.end());
    return Ah;
}

} // namespace waveinv
