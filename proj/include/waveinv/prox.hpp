#pragma once

#include "waveinv/observation.hpp"

#include <vector>

namespace waveinv {

/// Strictly increasing target values u_1 < ... < u_m of the multi-bang
/// penalty; the box constraint [u_1, u_m] is part of the penalty.
struct MultiBangLevels {
    std::vector<double> values;

    int count() const { return static_cast<int>(values.size()); }
    double lo() const { return values.front(); }
    double hi() const { return values.back(); }
    void validate() const;
};

/// Scalar penalty: +inf outside [u_1,u_m], on [u_i,u_{i+1}] the affine
/// interpolation 0.5 * ((u_i + u_{i+1}) t - u_i u_{i+1}).
double multibang_scalar(double t, const MultiBangLevels& levels);

/// Lumped penalty sum_i d_i g(u_i); +inf if any entry leaves the box.
double multibang_value(const Vec& u, const MultiBangLevels& levels, const Vec& lumped);

/// Proximal map of gamma*g: plateaus at the levels, unit-slope segments
/// shifted by gamma/2 * (u_i + u_{i+1}) in between; gamma = 0 degenerates to
/// the projection onto [u_1, u_m].
double multibang_prox_scalar(double v, double gamma, const MultiBangLevels& levels);
Vec multibang_prox(const Vec& v, double gamma, const MultiBangLevels& levels);

/// Isotropic discrete total variation sum_K |(Ah u)_K|_2.
double tv_value(const SpMat& Ah, const Vec& u);

/// Per-triangle radial projection onto the beta-ball; psi is the stacked
/// (2 M_c) dual vector.
Vec project_dual_ball(const Vec& psi, double beta);

/// Resolvent update of the tracking conjugate:
/// (r + gammaF (y_new - y_d)) / (1 + gammaF).
Observation prox_fstar_residual(const Observation& r, double gammaF, const Observation& y_new,
                                const Observation& y_d);

} // namespace waveinv
