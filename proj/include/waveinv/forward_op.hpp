#pragma once

#include "waveinv/scenario.hpp"

namespace waveinv {

/// Tridiagonal temporal coupling matrix K = (1/6 - sigma) tau^2 A_tau + M_tau
/// of the gradient representation; rows are tau * [(1/2-s), s | s, (1-2s), s |
/// ... | s, (1/2-s)]. Diagonal for sigma = 0.
struct TemporalK {
    double tau = 0;
    double sigma = 0;
    int nodes = 0;

    double diag(int i) const {
        const bool end = (i == 0 || i == nodes - 1);
        return tau * (end ? 0.5 - sigma : 1.0 - 2.0 * sigma);
    }
    double off() const { return tau * sigma; }
    Mat dense() const;
};

/// Raw per-triangle derivative representation and its Riesz representative in
/// the lumped control inner product.
struct GradientField {
    Vec raw;   // length M_c
    Vec riesz; // length N_c
};

/// Per-control-triangle contraction sum_{i,l} K_{il} grad(y^i) . grad(p^l).
Vec contract_temporal_k(const ControlSpace& cs, const TemporalK& K, const SpaceTimeField& y,
                        const SpaceTimeField& p);

/// Scatter a per-triangle field into the nodal dual vector <raw, phi_i> and
/// divide by the lumped weights.
GradientField gradient_from_raw(const ControlSpace& cs, const Vec& raw);

/// Discrete control-to-observation map and its derivatives for one scenario.
/// The cached-workspace overloads let an iteration reuse factorizations and
/// trajectories; the plain ones are self-contained.
class ForwardOp {
public:
    explicit ForwardOp(const Scenario& sc) : sc_(&sc) {}

    const Scenario& scenario() const { return *sc_; }

    /// Factorize at the extended coefficient of u.
    void prepare(StepperWorkspace& ws, const Vec& u) const;

    SpaceTimeField state(StepperWorkspace& ws) const;
    Observation apply_S(const Vec& u) const;

    Observation apply_dS(StepperWorkspace& ws, const SpaceTimeField& y, const Vec& du) const;
    Observation apply_dS(const Vec& u, const Vec& du) const;

    /// Exact adjoint of apply_dS in the (lumped control, observation) inner
    /// products: <dS(u) du, o>_O = sum_i d_i riesz_i du_i.
    GradientField apply_dS_adjoint(StepperWorkspace& ws, const SpaceTimeField& y,
                                   const Observation& o) const;
    GradientField apply_dS_adjoint(const Vec& u, const Observation& o) const;

    /// Power-iteration estimate of the norm of du -> (dS(u) du, Ah du) into
    /// the observation x Euclidean metric, from the lumped control metric or
    /// from the plain Euclidean one (whichever the iteration runs in).
    double estimate_opnorm(const Vec& u, int iterations, bool lumped = true) const;

    TemporalK temporal_k() const {
        return {sc_->grid().tau(), sc_->sigma(), sc_->grid().nodes()};
    }

private:
    const Scenario* sc_;
};

} // namespace waveinv
