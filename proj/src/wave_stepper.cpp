#include "waveinv/wave_stepper.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace waveinv {

double ricker(double t, double a, double h, double t0) {
    const double s = std::numbers::pi * h * (t - t0);
    const double s2 = s * s;
    return a * (1.0 - 2.0 * s2) * std::exp(-s2);
}

PointSource PointSource::make_ricker(double x, double y, double a, double h, double t0,
                                     Placement p) {
    PointSource src;
    src.x = x;
    src.y = y;
    src.placement = p;
    src.amplitude = [a, h, t0](double t) { return ricker(t, a, h, t0); };
    return src;
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
    std::vector<double> x, w;
};

GaussRule gauss_rule(int order) {
    switch (order) {
    case 1: return {{0.0}, {2.0}};
    case 2: {
        const double a = 1.0 / std::sqrt(3.0);
        return {{-a, a}, {1.0, 1.0}};
    }
    case 3: {
        const double a = std::sqrt(3.0 / 5.0);
        return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    }
    case 4: {
        const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
        const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
        const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
        const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
        return {{-b, -a, a, b}, {wb, wa, wa, wb}};
    }
    default: {
        const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double w0 = 128.0 / 225.0;
        const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        return {{-b, -a, 0.0, a, b}, {wb, wa, w0, wa, wb}};
    }
    }
}

// integral of f(t) e_i(t) over one half [ta,tb] of the hat support, on which
// the hat is affine with values (va at ta, vb at tb)
double hat_segment_integral(const std::function<double(double)>& f, double ta, double tb,
                            double va, double vb, const GaussRule& gr, int panels) {
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = ta + (tb - ta) * p / panels;
        const double pb = ta + (tb - ta) * (p + 1) / panels;
        const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
        for (std::size_t q = 0; q < gr.x.size(); ++q) {
            const double t = mid + half * gr.x[q];
            const double hat = va + (vb - va) * (t - ta) / (tb - ta);
            acc += half * gr.w[q] * f(t) * hat;
        }
    }
    return acc;
}

} // namespace

std::vector<Vec> temporal_force_loads(const Mesh& mesh, const ForcingSpec& forcing,
                                      const TimeGrid& grid, int gauss_order, int panels) {
    const GaussRule gr = gauss_rule(gauss_order);
    std::vector<Vec> loads(grid.steps, Vec::Zero(mesh.node_count()));
    for (const auto& src : forcing.sources) {
        const Vec space = point_source_load(mesh, src.x, src.y);
        for (int i = 0; i < grid.steps; ++i) {
            double c = 0.0;
            if (i > 0)
                c += hat_segment_integral(src.amplitude, grid.time(i - 1), grid.time(i), 0.0, 1.0,
                                          gr, panels);
            c += hat_segment_integral(src.amplitude, grid.time(i), grid.time(i + 1), 1.0, 0.0, gr,
                                      panels);
            if (c != 0.0)
                loads[i] += c * space;
        }
    }
    return loads;
}

double estimate_eigmax(const SpMat& M, const SpMat& A, int iterations) {
    Eigen::SimplicialLDLT<SpMat> msolver(M);
    if (msolver.info() != Eigen::Success)
        throw SolverError("estimate_eigmax: mass factorization failed");
    Vec x = Vec::Ones(M.rows());
    x[0] += 0.5; // break symmetry
    double lambda = 0.0;
    for (int k = 0; k < iterations; ++k) {
        Vec ax = A * x;
        lambda = x.dot(ax) / x.dot(M * x);
        x = msolver.solve(ax);
        const double nrm = x.norm();
        if (nrm == 0.0)
            return 0.0;
        x /= nrm;
    }
    return lambda;
}

double cfl_tau_max(double sigma, double eigmax) {
    if (sigma >= 0.25 || eigmax <= 0.0)
        return std::numeric_limits<double>::infinity();
    return 2.0 / std::sqrt((1.0 - 4.0 * sigma) * eigmax);
}

StepperWorkspace::StepperWorkspace(const Mesh& mesh, const SpMat& mass, TimeGrid grid,
                                   double sigma)
    : mesh_(&mesh), M_(&mass), grid_(grid), sigma_(sigma) {
    if (sigma < 0)
        throw ValidationError("StepperWorkspace: sigma must be >= 0");
}

void StepperWorkspace::set_coefficient(const Vec& coeff) {
    A_ = assemble_stiffness(*mesh_, coeff);
    const double t2 = grid_.tau() * grid_.tau();
    C_ = *M_ + sigma_ * t2 * A_;
    B_ = 2.0 * (*M_) - (1.0 - 2.0 * sigma_) * t2 * A_;
    if (!pattern_ready_) {
        solver_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
        solver_->analyzePattern(C_);
        pattern_ready_ = true;
    }
    solver_->factorize(C_);
    if (solver_->info() != Eigen::Success)
        throw SolverError("StepperWorkspace: factorization of M + sigma tau^2 A failed");
    coeff_ = coeff;
    tau_max_.reset();
    ++stats_.factorizations;
}

Vec StepperWorkspace::solve_system(const Vec& rhs, int step) const {
    Vec out = solver_->solve(rhs);
    if (solver_->info() != Eigen::Success)
        throw SolverError("wave step solve failed at step " + std::to_string(step));
    if (!out.allFinite())
        throw SolverError("instability: non-finite values at step " + std::to_string(step));
    return out;
}

void StepperWorkspace::check_cfl(bool override_flag) {
    if (sigma_ >= 0.25 || override_flag)
        return;
    if (!tau_max_)
        tau_max_ = 0.9 * cfl_tau_max(sigma_, estimate_eigmax(*M_, A_));
    if (grid_.tau() > *tau_max_)
        throw ValidationError("CFL violated: tau = " + std::to_string(grid_.tau()) +
                              " exceeds safe bound " + std::to_string(*tau_max_) +
                              " for sigma = " + std::to_string(sigma_));
}

SpaceTimeField StepperWorkspace::forward_solve(const std::vector<Vec>& force_loads,
                                               const Vec* y0, const Vec* y1_load,
                                               bool cfl_override) {
    if (coeff_.size() == 0)
        throw ValidationError("forward_solve: no coefficient set");
    check_cfl(cfl_override);
    const int n = mesh_->node_count();
    const double tau = grid_.tau();
    const double t2 = tau * tau;

    SpaceTimeField y;
    y.frames.resize(grid_.nodes());
    y.frames[0] = y0 ? *y0 : Vec::Zero(n);

    auto load_at = [&](int i) -> Vec {
        if (i < static_cast<int>(force_loads.size()) && force_loads[i].size() > 0)
            return force_loads[i];
        return Vec::Zero(n);
    };

    // first step: C y^1 = M y^0 - tau^2 (1/2 - sigma) A y^0 + tau load(y1) + tau F^0
    {
        Vec rhs = (*M_) * y.frames[0] - t2 * (0.5 - sigma_) * (A_ * y.frames[0]) + tau * load_at(0);
        if (y1_load)
            rhs += tau * (*y1_load);
        y.frames[1] = solve_system(rhs, 1);
    }
    // interior: C y^{i+1} = B y^i - C y^{i-1} + tau F^i
    for (int i = 1; i < grid_.steps; ++i) {
        Vec rhs = B_ * y.frames[i] - C_ * y.frames[i - 1] + tau * load_at(i);
        y.frames[i + 1] = solve_system(rhs, i + 1);
    }
    ++stats_.forward_solves;
    return y;
}

SpaceTimeField StepperWorkspace::adjoint_solve(const std::vector<Vec>& loads) {
    const int n = mesh_->node_count();
    const int N = grid_.steps;
    const double tau = grid_.tau();

    SpaceTimeField p;
    p.frames.assign(grid_.nodes(), Vec::Zero(n));

    auto load_at = [&](int i) -> Vec {
        if (i < static_cast<int>(loads.size()) && loads[i].size() > 0)
            return loads[i];
        return Vec::Zero(n);
    };

    // backward mirror of the forward recursion:
    //   C p^{i-1} = tau G^i + B p^i - C p^{i+1},  p^N = p^{N+1} = 0
    Vec p_next = Vec::Zero(n); // p^{i+1}
    for (int i = N; i >= 1; --i) {
        Vec rhs = tau * load_at(i) + B_ * p.frames[i] - C_ * p_next;
        p.frames[i - 1] = solve_system(rhs, i - 1);
        p_next = p.frames[i];
    }
    ++stats_.adjoint_solves;
    return p;
}

SpaceTimeField StepperWorkspace::linearized_solve(const Vec& delta_field, const SpaceTimeField& y) {
    if (y.time_nodes() != grid_.nodes())
        throw ValidationError("linearized_solve: trajectory has wrong length");
    const SpMat dA = assemble_weighted_stiffness(*mesh_, delta_field);
    const int n = mesh_->node_count();
    const double t2 = grid_.tau() * grid_.tau();

    SpaceTimeField dy;
    dy.frames.resize(grid_.nodes());
    dy.frames[0] = Vec::Zero(n);
    {
        Vec rhs = -t2 * (dA * (sigma_ * y.frames[1] + (0.5 - sigma_) * y.frames[0]));
        dy.frames[1] = solve_system(rhs, 1);
    }
    for (int i = 1; i < grid_.steps; ++i) {
        Vec rhs = B_ * dy.frames[i] - C_ * dy.frames[i - 1] -
                  t2 * (dA * (sigma_ * y.frames[i + 1] + (1.0 - 2.0 * sigma_) * y.frames[i] +
                              sigma_ * y.frames[i - 1]));
        dy.frames[i + 1] = solve_system(rhs, i + 1);
    }
    ++stats_.linearized_solves;
    return dy;
}

} // namespace waveinv
