#include "waveinv/forward_op.hpp"

#include <cmath>

namespace waveinv {

Mat TemporalK::dense() const {
    Mat K = Mat::Zero(nodes, nodes);
    for (int i = 0; i < nodes; ++i) {
        K(i, i) = diag(i);
        if (i + 1 < nodes) {
            K(i, i + 1) = off();
            K(i + 1, i) = off();
        }
    }
    return K;
}

Vec contract_temporal_k(const ControlSpace& cs, const TemporalK& K, const SpaceTimeField& y,
                        const SpaceTimeField& p) {
    const int nt = K.nodes;
    if (y.time_nodes() != nt || p.time_nodes() != nt)
        throw ValidationError("contract_temporal_k: trajectory length mismatch");
    const double off = K.off();
    Vec raw = Vec::Zero(cs.tri_count());

    std::vector<double> gyx(nt), gyy(nt), gpx(nt), gpy(nt);
    const auto& tds = cs.tri_data();
    for (int k = 0; k < cs.tri_count(); ++k) {
        const auto& td = tds[k];
        for (int i = 0; i < nt; ++i) {
            double ax = 0, ay = 0, bx = 0, by = 0;
            for (int a = 0; a < 3; ++a) {
                const int v = td.verts[a];
                ax += td.grads(0, a) * y[i][v];
                ay += td.grads(1, a) * y[i][v];
                bx += td.grads(0, a) * p[i][v];
                by += td.grads(1, a) * p[i][v];
            }
            gyx[i] = ax;
            gyy[i] = ay;
            gpx[i] = bx;
            gpy[i] = by;
        }
        double acc = 0;
        for (int i = 0; i < nt; ++i) {
            acc += K.diag(i) * (gyx[i] * gpx[i] + gyy[i] * gpy[i]);
            if (i + 1 < nt)
                acc += off * (gyx[i] * gpx[i + 1] + gyy[i] * gpy[i + 1] +
                              gyx[i + 1] * gpx[i] + gyy[i + 1] * gpy[i]);
        }
        raw[k] = acc;
    }
    return raw;
}

GradientField gradient_from_raw(const ControlSpace& cs, const Vec& raw) {
    GradientField g;
    g.raw = raw;
    Vec dual = Vec::Zero(cs.dof_count());
    const auto& tds = cs.tri_data();
    for (int k = 0; k < cs.tri_count(); ++k) {
        const double w = tds[k].area / 3.0 * raw[k];
        for (int a = 0; a < 3; ++a)
            if (const int dof = cs.dof_of_node(tds[k].verts[a]); dof >= 0)
                dual[dof] += w;
    }
    g.riesz = dual.cwiseQuotient(cs.lumped());
    return g;
}

void ForwardOp::prepare(StepperWorkspace& ws, const Vec& u) const {
    ws.set_coefficient(sc_->extended_coefficient(u));
}

SpaceTimeField ForwardOp::state(StepperWorkspace& ws) const {
    return ws.forward_solve(sc_->force_loads(), nullptr, nullptr, sc_->cfl_override());
}

Observation ForwardOp::apply_S(const Vec& u) const {
    StepperWorkspace ws = sc_->make_workspace();
    prepare(ws, u);
    return sc_->obs().observe(state(ws));
}

Observation ForwardOp::apply_dS(StepperWorkspace& ws, const SpaceTimeField& y, const Vec& du) const {
    const Vec delta = sc_->control().extend_zero(du);
    return sc_->obs().observe(ws.linearized_solve(delta, y));
}

Observation ForwardOp::apply_dS(const Vec& u, const Vec& du) const {
    StepperWorkspace ws = sc_->make_workspace();
    prepare(ws, u);
    const SpaceTimeField y = state(ws);
    return apply_dS(ws, y, du);
}

GradientField ForwardOp::apply_dS_adjoint(StepperWorkspace& ws, const SpaceTimeField& y,
                                          const Observation& o) const {
    // The derivative enters the state equation with a negative sign, so the
    // exact adjoint is the K-contraction against the adjoint state driven by
    // the negated loads.
    std::vector<Vec> loads = sc_->obs().adjoint_observe(o);
    for (auto& g : loads)
        g = -g;
    const SpaceTimeField p = ws.adjoint_solve(loads);
    return gradient_from_raw(sc_->control(), contract_temporal_k(sc_->control(), temporal_k(), y, p));
}

GradientField ForwardOp::apply_dS_adjoint(const Vec& u, const Observation& o) const {
    StepperWorkspace ws = sc_->make_workspace();
    prepare(ws, u);
    const SpaceTimeField y = state(ws);
    return apply_dS_adjoint(ws, y, o);
}

double ForwardOp::estimate_opnorm(const Vec& u, int iterations, bool lumped) const {
    if (iterations < 1)
        throw ValidationError("estimate_opnorm: need at least one iteration");
    const ControlSpace& cs = sc_->control();
    const SpMat& Ah = sc_->gradient_op();

    StepperWorkspace ws = sc_->make_workspace();
    prepare(ws, u);
    const SpaceTimeField y = state(ws);

    const auto inner = [&](const Vec& a, const Vec& b) {
        return lumped ? cs.inner(a, b) : a.dot(b);
    };

    Vec v = Vec::Ones(cs.dof_count());
    for (int i = 0; i < v.size(); ++i)
        v[i] += 1e-3 * std::sin(1.0 + i); // deterministic symmetry breaking
    v /= std::sqrt(inner(v, v));

    double est = 0.0;
    for (int k = 0; k < iterations; ++k) {
        const Observation ov = apply_dS(ws, y, v);
        const Vec av = Ah * v;
        // w = T*T v in the chosen control metric
        const GradientField g = apply_dS_adjoint(ws, y, ov);
        Vec w = Ah.transpose() * av;
        if (lumped)
            w = g.riesz + w.cwiseQuotient(cs.lumped());
        else
            w += g.riesz.cwiseProduct(cs.lumped());
        const double num = inner(w, v); // = ||T v||^2
        est = std::sqrt(std::max(0.0, num));
        const double wn = std::sqrt(inner(w, w));
        if (wn == 0.0)
            return 0.0;
        v = w / wn;
    }
    return est;
}

} // namespace waveinv
