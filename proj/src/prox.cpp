#include "waveinv/prox.hpp"

#include <cmath>
#include <limits>

namespace waveinv {

void MultiBangLevels::validate() const {
    if (values.size() < 2)
        throw ValidationError("MultiBangLevels: need at least two levels");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw ValidationError("MultiBangLevels: levels must be strictly increasing");
}

double multibang_scalar(double t, const MultiBangLevels& levels) {
    const auto& u = levels.values;
    if (t < u.front() || t > u.back())
        return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        if (t <= u[i + 1])
            return 0.5 * ((u[i] + u[i + 1]) * t - u[i] * u[i + 1]);
    }
    // t == u.back(), both adjacent pieces agree by continuity
    const std::size_t m = u.size();
    return 0.5 * ((u[m - 2] + u[m - 1]) * t - u[m - 2] * u[m - 1]);
}

double multibang_value(const Vec& u, const MultiBangLevels& levels, const Vec& lumped) {
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        const double g = multibang_scalar(u[i], levels);
        if (std::isinf(g))
            return g;
        acc += lumped[i] * g;
    }
    return acc;
}

double multibang_prox_scalar(double v, double gamma, const MultiBangLevels& levels) {
    const auto& u = levels.values;
    const int m = levels.count();
    const double half = 0.5 * gamma;
    // plateau of u_i covers [(1+g/2) u_i + (g/2) u_{i-1}, (1+g/2) u_i + (g/2) u_{i+1}]
    // with sentinels u_0 = -inf, u_{m+1} = +inf; between consecutive plateaus
    // the prox is the identity shifted by (g/2)(u_i + u_{i+1})
    if (v <= (1.0 + half) * u[0] + half * u[1])
        return u[0];
    for (int i = 0; i + 1 < m; ++i) {
        const double seg_hi = (1.0 + half) * u[i + 1] + half * u[i]; // start of next plateau
        if (v < seg_hi)
            return v - half * (u[i] + u[i + 1]);
        const double plat_hi = (i + 2 < m) ? (1.0 + half) * u[i + 1] + half * u[i + 2]
                                           : std::numeric_limits<double>::infinity();
        if (v <= plat_hi)
            return u[i + 1];
    }
    return u[m - 1];
}

Vec multibang_prox(const Vec& v, double gamma, const MultiBangLevels& levels) {
    if (gamma < 0)
        throw ValidationError("multibang_prox: gamma must be >= 0");
    Vec out(v.size());
    for (int i = 0; i < v.size(); ++i)
        out[i] = multibang_prox_scalar(v[i], gamma, levels);
    return out;
}

double tv_value(const SpMat& Ah, const Vec& u) {
    const Vec g = Ah * u;
    double acc = 0.0;
    for (int k = 0; k + 1 < g.size(); k += 2)
        acc += std::hypot(g[k], g[k + 1]);
    return acc;
}

Vec project_dual_ball(const Vec& psi, double beta) {
    if (!(beta > 0))
        throw ValidationError("project_dual_ball: beta must be positive");
    Vec out(psi.size());
    for (int k = 0; k + 1 < psi.size(); k += 2) {
        const double nrm = std::hypot(psi[k], psi[k + 1]);
        const double scale = beta / std::max(beta, nrm);
        out[k] = scale * psi[k];
        out[k + 1] = scale * psi[k + 1];
    }
    return out;
}

Observation prox_fstar_residual(const Observation& r, double gammaF, const Observation& y_new,
                                const Observation& y_d) {
    if (r.kind != y_new.kind || r.kind != y_d.kind || r.data.rows() != y_new.data.rows() ||
        r.data.cols() != y_new.data.cols() || r.data.rows() != y_d.data.rows() ||
        r.data.cols() != y_d.data.cols())
        throw ValidationError("prox_fstar_residual: observation shape mismatch");
    Observation out = r;
    out.data = (r.data + gammaF * (y_new.data - y_d.data)) / (1.0 + gammaF);
    return out;
}

} // namespace waveinv
