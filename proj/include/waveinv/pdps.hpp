#pragma once

#include "waveinv/forward_op.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace waveinv {

struct StepSizes {
    double gamma_g = 1e3; // primal
    double gamma_f = 0.1; // dual
};

struct PdpsOptions {
    double alpha = 0;
    double beta = 0;
    StepSizes steps;
    double tol = 1e-6;
    int max_iter = 20000;
    int check_every = 10;
    int norm_check_iters = 10;
    bool lumped_riesz = true;

    static PdpsOptions from_config(const PdpsConfig& c) {
        return {c.alpha, c.beta, {c.gamma_g, c.gamma_f}, c.tol,
                c.max_iter, c.check_every, c.norm_check_iters, c.lumped_riesz};
    }
};

/// Defects of the fixed-point system at one iterate, in the norms the
/// stopping rule uses: lumped control norm, observation norm, Euclidean.
struct ResidualReport {
    double primal = 0;
    double obs = 0;
    double dual = 0;
    double objective = 0;

    double sum() const { return primal + obs + dual; }
};

struct PDPSState {
    Vec u;
    Observation r;
    Vec psi;
    int iter = 0;

    // caches carried between iterations: factorization and trajectory at u
    std::shared_ptr<StepperWorkspace> ws_u;
    SpaceTimeField y_u;
    Observation Sy_u;
};

struct HistoryRow {
    int iteration = 0;
    double objective = 0, primal = 0, obs = 0, dual = 0, sum = 0;
};

struct RunResult {
    Vec u;
    Vec coefficient; // offset + E0 u
    bool converged = false;
    int iterations = 0;
    std::vector<HistoryRow> history;
    ResidualReport final_residuals;
    double opnorm_estimate = 0;
    double stepsize_product = 0;         // gammaF gammaG ||K'||
    double stepsize_product_squared = 0; // gammaF gammaG ||K'||^2
    bool stepsize_warning = false;
    double wall_seconds = 0;
};

/// One primal-dual proximal splitting iteration with over-relaxation. Per
/// call: one adjoint solve at u^k and forward solves at the extrapolated and
/// at the new iterate (exactly two forward + one adjoint).
class PdpsSolver {
public:
    PdpsSolver(const Scenario& sc, const PdpsOptions& opts, Observation y_d);

    PDPSState init() const;

    /// Advance one iteration; if report is non-null, it receives the defects
    /// of the *incoming* state (whose primal defect is u^k - u^{k+1}).
    PDPSState step(PDPSState state, ResidualReport* report = nullptr) const;

    /// Standalone residual evaluation at a state.
    ResidualReport residuals(const PDPSState& state) const;

    RunResult run(const std::function<void(const HistoryRow&)>& on_row = {}) const;

    const Observation& data() const { return yd_; }
    const PdpsOptions& options() const { return opts_; }

private:
    const Scenario* sc_;
    ForwardOp fop_;
    PdpsOptions opts_;
    Observation yd_;
    mutable std::shared_ptr<StepperWorkspace> ws_scratch_; // extrapolated-coefficient workspace

    Vec primal_gradient(const PDPSState& state) const;
    ResidualReport defects(const PDPSState& state, const Vec& u_next) const;
};

} // namespace waveinv
