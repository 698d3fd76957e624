#pragma once

#include "waveinv/mesh.hpp"

#include <vector>

namespace waveinv {

/// Control dofs and triangles of a rectangular control subdomain. A node is a
/// control dof iff every triangle incident to it lies in the closure of the
/// control rectangle, so the extension of u_h by the offset stays continuous.
/// Control triangles are all triangles inside the closure.
class ControlSpace {
public:
    ControlSpace(const Mesh& mesh, const Rect& control_rect);

    const Mesh& mesh() const { return *mesh_; }
    const Rect& rect() const { return rect_; }

    int dof_count() const { return static_cast<int>(node_ids_.size()); }
    int tri_count() const { return static_cast<int>(tri_ids_.size()); }

    const std::vector<int>& node_ids() const { return node_ids_; }
    const std::vector<int>& tri_ids() const { return tri_ids_; }
    int dof_of_node(int mesh_node) const { return node_to_dof_[mesh_node]; }

    /// Lumped weights d_i = integral of phi_i over the control domain.
    const Vec& lumped() const { return lumped_; }

    double inner(const Vec& a, const Vec& b) const { return (a.array() * lumped_.array() * b.array()).sum(); }
    double norm(const Vec& a) const { return std::sqrt(inner(a, a)); }

    /// Extension by zero onto all mesh nodes.
    Vec extend_zero(const Vec& u) const;
    /// offset + E0 u.
    Vec extend(const Vec& u, double offset) const;
    /// Values at control dofs of a full nodal field.
    Vec restrict_nodal(const Vec& field) const;

    /// Per-triangle cache used by assembly and the gradient contraction.
    struct TriData {
        int mesh_tri;
        double area;
        Eigen::Matrix<double, 2, 3> grads;
        std::array<int, 3> verts; // mesh node ids
    };
    const std::vector<TriData>& tri_data() const { return tri_data_; }

private:
    const Mesh* mesh_;
    Rect rect_;
    std::vector<int> node_ids_;
    std::vector<int> tri_ids_;
    std::vector<int> node_to_dof_;
    std::vector<TriData> tri_data_;
    Vec lumped_;
};

/// Matrix of the area-weighted element gradient: row pair (2k, 2k+1) maps
/// control values to |K| * grad(u_h) on control triangle k, so that the sum of
/// the per-triangle Euclidean norms is the total variation of u_h.
SpMat assemble_gradient_op(const ControlSpace& cs);

} // namespace waveinv
