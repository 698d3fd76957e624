#include "waveinv/pdps.hpp"

#include <chrono>
#include <cmath>

namespace waveinv {

PdpsSolver::PdpsSolver(const Scenario& sc, const PdpsOptions& opts, Observation y_d)
    : sc_(&sc), fop_(sc), opts_(opts), yd_(std::move(y_d)) {
    if (!(opts_.steps.gamma_f > 0) || !(opts_.steps.gamma_g > 0))
        throw ValidationError("pdps: step sizes must be positive");
    if (opts_.alpha < 0 || opts_.beta < 0)
        throw ValidationError("pdps: alpha and beta must be >= 0");
    if (opts_.check_every < 1)
        throw ValidationError("pdps: check_every must be >= 1");
    if (yd_.kind != sc.obs().kind() || yd_.time_nodes() != sc.grid().nodes() ||
        yd_.cols() != sc.obs().cols())
        throw ValidationError("pdps: data does not match the observation space");
}

PDPSState PdpsSolver::init() const {
    PDPSState st;
    st.u = Vec::Zero(sc_->control().dof_count());
    st.r = sc_->obs().zero();
    st.psi = Vec::Zero(sc_->gradient_op().rows());
    st.iter = 0;
    st.ws_u = std::make_shared<StepperWorkspace>(sc_->make_workspace());
    fop_.prepare(*st.ws_u, st.u);
    st.y_u = fop_.state(*st.ws_u);
    st.Sy_u = sc_->obs().observe(st.y_u);
    return st;
}

Vec PdpsSolver::primal_gradient(const PDPSState& state) const {
    const GradientField g = fop_.apply_dS_adjoint(*state.ws_u, state.y_u, state.r);
    const SpMat& Ah = sc_->gradient_op();
    const Vec tv_dual = Ah.transpose() * state.psi;
    if (opts_.lumped_riesz)
        return g.riesz + tv_dual.cwiseQuotient(sc_->control().lumped());
    // literal vector form: nodal dual vectors without the Riesz factor
    return g.riesz.cwiseProduct(sc_->control().lumped()) + tv_dual;
}

ResidualReport PdpsSolver::defects(const PDPSState& state, const Vec& u_next) const {
    const ControlSpace& cs = sc_->control();
    ResidualReport rep;
    rep.primal = cs.norm(state.u - u_next);

    Observation mis = state.r;
    mis.data = state.r.data - (state.Sy_u.data - yd_.data);
    rep.obs = opts_.steps.gamma_f / (1.0 + opts_.steps.gamma_f) * sc_->obs().norm(mis);

    if (opts_.beta > 0) {
        const Vec q = state.psi + opts_.steps.gamma_f * (sc_->gradient_op() * state.u);
        rep.dual = (state.psi - project_dual_ball(q, opts_.beta)).norm();
    }

    Observation res = state.Sy_u;
    res.data = state.Sy_u.data - yd_.data;
    rep.objective = 0.5 * std::pow(sc_->obs().norm(res), 2);
    if (opts_.alpha > 0)
        rep.objective += opts_.alpha * multibang_value(state.u, sc_->levels(), cs.lumped());
    if (opts_.beta > 0)
        rep.objective += opts_.beta * tv_value(sc_->gradient_op(), state.u);
    return rep;
}

PDPSState PdpsSolver::step(PDPSState state, ResidualReport* report) const {
    const double gG = opts_.steps.gamma_g;
    const double gF = opts_.steps.gamma_f;

    // primal prox step at u^k
    const Vec grad = primal_gradient(state);
    const Vec u_next = multibang_prox(state.u - gG * grad, gG * opts_.alpha, sc_->levels());
    if (report)
        *report = defects(state, u_next);

    // dual updates at the extrapolated point
    const Vec u_hat = 2.0 * u_next - state.u;
    if (!ws_scratch_)
        ws_scratch_ = std::make_shared<StepperWorkspace>(sc_->make_workspace());
    try {
        fop_.prepare(*ws_scratch_, u_hat);
    } catch (const SolverError& e) {
        throw SolverError("pdps iteration " + std::to_string(state.iter + 1) + ": " + e.what());
    }
    const SpaceTimeField y_hat = fop_.state(*ws_scratch_);
    const Observation Sy_hat = sc_->obs().observe(y_hat);

    PDPSState next;
    next.u = u_next;
    next.r = prox_fstar_residual(state.r, gF, Sy_hat, yd_);
    if (opts_.beta > 0)
        next.psi = project_dual_ball(state.psi + gF * (sc_->gradient_op() * u_hat), opts_.beta);
    else
        next.psi = Vec::Zero(state.psi.size());
    next.iter = state.iter + 1;

    // state solve at the accepted iterate, reusing the incoming workspace
    next.ws_u = std::move(state.ws_u);
    try {
        fop_.prepare(*next.ws_u, next.u);
    } catch (const SolverError& e) {
        throw SolverError("pdps iteration " + std::to_string(next.iter) + ": " + e.what());
    }
    next.y_u = fop_.state(*next.ws_u);
    next.Sy_u = sc_->obs().observe(next.y_u);
    return next;
}

ResidualReport PdpsSolver::residuals(const PDPSState& state) const {
    const Vec grad = primal_gradient(state);
    const Vec u_next =
        multibang_prox(state.u - opts_.steps.gamma_g * grad, opts_.steps.gamma_g * opts_.alpha,
                       sc_->levels());
    return defects(state, u_next);
}

RunResult PdpsSolver::run(const std::function<void(const HistoryRow&)>& on_row) const {
    const auto t_start = std::chrono::steady_clock::now();
    RunResult out;

    if (opts_.norm_check_iters > 0) {
        out.opnorm_estimate = fop_.estimate_opnorm(Vec::Zero(sc_->control().dof_count()),
                                                   opts_.norm_check_iters, opts_.lumped_riesz);
        out.stepsize_product = opts_.steps.gamma_f * opts_.steps.gamma_g * out.opnorm_estimate;
        out.stepsize_product_squared =
            opts_.steps.gamma_f * opts_.steps.gamma_g * out.opnorm_estimate * out.opnorm_estimate;
        out.stepsize_warning = !(out.stepsize_product_squared < 1.0);
    }

    PDPSState state = init();
    bool have_best = false;
    double best_sum = 0;
    Vec best_u;
    ResidualReport best_rep;
    int best_iter = 0;

    for (int k = 1; k <= opts_.max_iter; ++k) {
        ResidualReport rep;
        state = step(std::move(state), &rep);
        if (!std::isfinite(rep.objective))
            throw SolverError("pdps: non-finite objective at iteration " + std::to_string(k));

        if (k % opts_.check_every == 0 || k == opts_.max_iter) {
            const HistoryRow row{k, rep.objective, rep.primal, rep.obs, rep.dual, rep.sum()};
            out.history.push_back(row);
            if (on_row)
                on_row(row);
            if (!have_best || row.sum < best_sum) {
                have_best = true;
                best_sum = row.sum;
                best_u = state.u;
                best_rep = rep;
                best_iter = k;
            }
            if (row.sum < opts_.tol) {
                out.converged = true;
                out.iterations = k;
                out.u = state.u;
                out.final_residuals = rep;
                break;
            }
        }
    }
    if (!out.converged) {
        out.iterations = best_iter;
        out.u = best_u;
        out.final_residuals = best_rep;
    }
    out.coefficient = sc_->extended_coefficient(out.u);
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

} // namespace waveinv
