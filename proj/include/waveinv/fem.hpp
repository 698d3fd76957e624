#pragma once

#include "waveinv/mesh.hpp"

#include <functional>

namespace waveinv {

/// Exact P1 mass matrix (element block |T|/12 * [2 1 1; 1 2 1; 1 1 2]).
SpMat assemble_mass(const Mesh& mesh);

/// Stiffness matrix for a P1 coefficient field given nodally on the whole
/// mesh; the element coefficient is the vertex average, which integrates the
/// P1 coefficient against the constant gradients exactly. Throws if any nodal
/// value is <= 0 (loss of coercivity).
SpMat assemble_stiffness(const Mesh& mesh, const Vec& coeff);

/// Same assembly without the positivity check, for sign-indefinite
/// perturbation fields (coefficient derivatives).
SpMat assemble_weighted_stiffness(const Mesh& mesh, const Vec& field);

/// Load vector with entries phi_i(x), i.e. the action of a point source.
Vec point_source_load(const Mesh& mesh, double x, double y);

/// Weight vector w with w^T y = mean of y_h over the patch. The patch must be
/// tiled exactly by mesh triangles.
Vec patch_mean_weights(const Mesh& mesh, const Rect& patch);

/// Lumped node areas: integral of phi_i over the mesh (= mass row sums).
Vec lumped_areas(const Mesh& mesh);

/// L2 load vector of a point-evaluable function, per-element three-midpoint
/// rule (exact for quadratics).
Vec l2_load(const Mesh& mesh, const std::function<double(double, double)>& f);

/// L2 projection onto the P1 space: solves M s = l2_load(f).
Vec project_l2(const Mesh& mesh, const SpMat& mass, const std::function<double(double, double)>& f);

} // namespace waveinv
