#include "waveinv/wave_stepper.hpp"

#include "support/oracles.hpp"
#include "support/test_scenarios.hpp"
#include "waveinv/rng.hpp"
#include "waveinv/scenario.hpp"

#include <doctest.h>

using namespace waveinv;

namespace {

double traj_rel_err(const SpaceTimeField& a, const SpaceTimeField& b) {
    double num = 0, den = 0;
    for (int i = 0; i < a.time_nodes(); ++i) {
        num += (a[i] - b[i]).squaredNorm();
        den += b[i].squaredNorm();
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

struct Fixture {
    Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 3, 3);
    SpMat M = assemble_mass(mesh);
    TimeGrid grid = make_time_grid(1.0, 4);
    Vec coeff, y0, y1, y1_load;
    std::vector<Vec> loads;

    explicit Fixture(double sigma, std::uint64_t seed = 123) {
        Rng rng(seed);
        coeff.resize(mesh.node_count());
        y0.resize(mesh.node_count());
        y1.resize(mesh.node_count());
        for (int i = 0; i < mesh.node_count(); ++i) {
            coeff[i] = 0.8 + rng.uniform01();
            y0[i] = rng.uniform01() - 0.5;
            y1[i] = rng.uniform01() - 0.5;
        }
        y1_load = M * y1;
        ForcingSpec forcing;
        forcing.sources.push_back(PointSource::make_ricker(0.5, 0.5, 2.0, 2.0, 0.3));
        forcing.sources.push_back(PointSource::make_ricker(0.25, 0.75, 1.0, 3.0, 0.2));
        loads = temporal_force_loads(mesh, forcing, grid);
        (void)sigma;
    }
};

} // namespace

TEST_CASE("ricker wavelet values") {
    CHECK(ricker(0.7, 3.0, 5.0, 0.7) == doctest::Approx(3.0));
    CHECK(std::abs(ricker(100.0, 3.0, 5.0, 0.7)) < 1e-300);
    CHECK(std::abs(ricker(-100.0, 3.0, 5.0, 0.7)) < 1e-300);
    // the transmission wavelet 2 (1 - 2 (5 pi (t-0.1))^2) exp(-(5 pi (t-0.1))^2)
    CHECK(ricker(0.1, 2.0, 5.0, 0.1) == doctest::Approx(2.0));
    const double t = 0.137;
    const double s = 5.0 * std::numbers::pi * (t - 0.1);
    CHECK(ricker(t, 2.0, 5.0, 0.1) ==
          doctest::Approx(2.0 * (1.0 - 2.0 * s * s) * std::exp(-s * s)).epsilon(1e-15));
}

TEST_CASE("temporal force loads") {
    const Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 3, 3);
    const TimeGrid grid = make_time_grid(1.0, 5);
    SUBCASE("constant amplitude integrates the hats exactly") {
        ForcingSpec f;
        PointSource s;
        s.x = 0.5;
        s.y = 0.5;
        s.amplitude = [](double) { return 3.0; };
        f.sources.push_back(s);
        const auto loads = temporal_force_loads(mesh, f, grid);
        const Vec space = point_source_load(mesh, 0.5, 0.5);
        const double tau = grid.tau();
        CHECK((loads[0] - 3.0 * tau / 2.0 * space).lpNorm<Eigen::Infinity>() < 1e-14);
        for (int i = 1; i < grid.steps; ++i)
            CHECK((loads[i] - 3.0 * tau * space).lpNorm<Eigen::Infinity>() < 1e-14);
    }
    SUBCASE("quadrature order is far past converged for preset wavelets") {
        ForcingSpec f;
        f.sources.push_back(PointSource::make_ricker(0.5, 0.5, 2.0, 5.0, 0.1));
        const TimeGrid fine = make_time_grid(3.0, 128);
        const auto l5 = temporal_force_loads(mesh, f, fine, 5);
        const auto l3 = temporal_force_loads(mesh, f, fine, 3);
        double maxdiff = 0;
        for (int i = 0; i < fine.steps; ++i)
            maxdiff = std::max(maxdiff, (l5[i] - l3[i]).lpNorm<Eigen::Infinity>());
        CHECK(maxdiff < 1e-10);
    }
}

TEST_CASE("forward solve: zero data gives the zero trajectory") {
    Fixture fx(0.25);
    StepperWorkspace ws(fx.mesh, fx.M, fx.grid, 0.25);
    ws.set_coefficient(fx.coeff);
    const std::vector<Vec> noloads;
    const SpaceTimeField y = ws.forward_solve(noloads, nullptr, nullptr);
    for (int i = 0; i < y.time_nodes(); ++i)
        CHECK(y[i].lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("forward solve matches the dense space-time oracle") {
    for (const double sigma : {0.25, 1.0 / 6.0, 0.5}) {
        CAPTURE(sigma);
        Fixture fx(sigma);
        StepperWorkspace ws(fx.mesh, fx.M, fx.grid, sigma);
        ws.set_coefficient(fx.coeff);
        // algebraic equivalence is what is under test, so bypass the CFL guard
        const SpaceTimeField y = ws.forward_solve(fx.loads, &fx.y0, &fx.y1_load, true);

        const auto st = oracle::dense_spacetime_matrix(fx.mesh, fx.coeff, fx.grid, sigma);
        const SpaceTimeField yd = oracle::dense_forward(st, fx.y0, fx.y1_load, fx.loads);
        CHECK(traj_rel_err(y, yd) < 1e-12);
    }
}

TEST_CASE("adjoint solve is the transpose of the dense forward matrix") {
    for (const double sigma : {0.25, 0.4}) {
        CAPTURE(sigma);
        Fixture fx(sigma, 77);
        StepperWorkspace ws(fx.mesh, fx.M, fx.grid, sigma);
        ws.set_coefficient(fx.coeff);

        Rng rng(31);
        std::vector<Vec> G(fx.grid.nodes());
        for (auto& g : G) {
            g.resize(fx.mesh.node_count());
            for (int i = 0; i < g.size(); ++i)
                g[i] = rng.uniform01() - 0.5;
        }
        const SpaceTimeField p = ws.adjoint_solve(G);
        CHECK(p[fx.grid.steps].lpNorm<Eigen::Infinity>() == 0.0);

        const auto st = oracle::dense_spacetime_matrix(fx.mesh, fx.coeff, fx.grid, sigma);
        const SpaceTimeField pd = oracle::dense_adjoint(st, G);
        CHECK(traj_rel_err(p, pd) < 1e-12);
    }
}

TEST_CASE("adjoint identity for the bare sweeps") {
    Fixture fx(0.25, 5);
    StepperWorkspace ws(fx.mesh, fx.M, fx.grid, 0.25);
    ws.set_coefficient(fx.coeff);
    Rng rng(8);
    const int n = fx.mesh.node_count();
    // forward map b -> y(1..N) from per-step Galerkin loads b (tau-scaled in the sweep)
    std::vector<Vec> b(fx.grid.steps);
    std::vector<Vec> c(fx.grid.nodes());
    for (auto& v : b) {
        v.resize(n);
        for (int i = 0; i < n; ++i)
            v[i] = rng.uniform01() - 0.5;
    }
    for (auto& v : c) {
        v.resize(n);
        for (int i = 0; i < n; ++i)
            v[i] = rng.uniform01() - 0.5;
    }
    const SpaceTimeField y = ws.forward_solve(b, nullptr, nullptr);
    const SpaceTimeField p = ws.adjoint_solve(c);
    // <L^{-1} b, c> = <b, L^{-T} c>: forward rows j pair with p^j, trial i with c^i
    double lhs = 0, rhs = 0;
    for (int i = 1; i <= fx.grid.steps; ++i)
        lhs += y[i].dot(c[i]);
    for (int j = 0; j < fx.grid.steps; ++j)
        rhs += b[j].dot(p[j]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("linearized solve") {
    Fixture fx(0.25, 55);
    StepperWorkspace ws(fx.mesh, fx.M, fx.grid, 0.25);
    ws.set_coefficient(fx.coeff);
    const SpaceTimeField y = ws.forward_solve(fx.loads, &fx.y0, &fx.y1_load);

    Rng rng(4);
    Vec delta(fx.mesh.node_count());
    for (int i = 0; i < delta.size(); ++i)
        delta[i] = rng.uniform01() - 0.5;

    SUBCASE("zero direction gives zero") {
        const SpaceTimeField dy = ws.linearized_solve(Vec::Zero(fx.mesh.node_count()), y);
        for (int i = 0; i < dy.time_nodes(); ++i)
            CHECK(dy[i].lpNorm<Eigen::Infinity>() == 0.0);
    }
    SUBCASE("linearity") {
        const SpaceTimeField d1 = ws.linearized_solve(delta, y);
        const SpaceTimeField d2 = ws.linearized_solve(2.0 * delta, y);
        double err = 0;
        for (int i = 0; i < d1.time_nodes(); ++i)
            err = std::max(err, (d2[i] - 2.0 * d1[i]).lpNorm<Eigen::Infinity>());
        CHECK(err < 1e-12);
    }
    SUBCASE("first-order finite-difference consistency") {
        const SpaceTimeField dy = ws.linearized_solve(delta, y);
        StepperWorkspace ws2(fx.mesh, fx.M, fx.grid, 0.25);
        double prev = -1;
        for (const double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
            ws2.set_coefficient(fx.coeff + eps * delta);
            const SpaceTimeField ye = ws2.forward_solve(fx.loads, &fx.y0, &fx.y1_load);
            double err = 0;
            for (int i = 0; i < y.time_nodes(); ++i)
                err = std::max(err, ((ye[i] - y[i]) / eps - dy[i]).lpNorm<Eigen::Infinity>());
            if (prev >= 0)
                CHECK(err < 0.15 * prev); // O(eps) decay
            prev = err;
        }
    }
}

TEST_CASE("one factorization per coefficient is shared by all sweeps") {
    Fixture fx(0.25, 99);
    StepperWorkspace ws(fx.mesh, fx.M, fx.grid, 0.25);
    ws.set_coefficient(fx.coeff);
    CHECK(ws.stats().factorizations == 1);
    const SpaceTimeField y = ws.forward_solve(fx.loads, &fx.y0, &fx.y1_load);
    std::vector<Vec> G(fx.grid.nodes(), Vec::Zero(fx.mesh.node_count()));
    (void)ws.adjoint_solve(G);
    (void)ws.linearized_solve(Vec::Zero(fx.mesh.node_count()), y);
    CHECK(ws.stats().factorizations == 1);
    CHECK(ws.stats().forward_solves == 1);
    CHECK(ws.stats().adjoint_solves == 1);
    CHECK(ws.stats().linearized_solves == 1);
    ws.set_coefficient(fx.coeff * 1.5);
    CHECK(ws.stats().factorizations == 2);
}

TEST_CASE("zero adjoint loads give the zero adjoint state") {
    Fixture fx(0.25);
    StepperWorkspace ws(fx.mesh, fx.M, fx.grid, 0.25);
    ws.set_coefficient(fx.coeff);
    std::vector<Vec> G(fx.grid.nodes(), Vec::Zero(fx.mesh.node_count()));
    const SpaceTimeField p = ws.adjoint_solve(G);
    for (int i = 0; i < p.time_nodes(); ++i)
        CHECK(p[i].lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("unconditional stability at sigma = 1/4 and the conserved energy") {
    const Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 12, 12);
    const SpMat M = assemble_mass(mesh);
    Vec coeff = Vec::Constant(mesh.node_count(), 1.3);
    Vec y0(mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n) {
        const double dx = mesh.nodes[n].x() - 0.4, dy = mesh.nodes[n].y() - 0.55;
        y0[n] = std::exp(-40.0 * (dx * dx + dy * dy));
    }
    const TimeGrid grid = make_time_grid(2.0, 160);
    StepperWorkspace ws(mesh, M, grid, 0.25);
    ws.set_coefficient(coeff);
    const SpaceTimeField y = ws.forward_solve({}, &y0, nullptr);

    const SpMat A = ws.stiffness();
    const double tau = grid.tau();
    auto energy = [&](int i) {
        const Vec v = (y[i + 1] - y[i]) / tau;
        const Vec s = y[i + 1] + y[i];
        return 0.5 * v.dot(M * v) + 0.125 * s.dot(A * s);
    };
    const double e0 = energy(0);
    CHECK(e0 > 0);
    for (int i = 1; i < grid.steps; ++i)
        CHECK(std::abs(energy(i) / e0 - 1.0) < 1e-10);
}

TEST_CASE("CFL guard at sigma = 0") {
    const Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 9, 9);
    const SpMat M = assemble_mass(mesh);
    const Vec coeff = Vec::Constant(mesh.node_count(), 1.0);
    const SpMat A = assemble_stiffness(mesh, coeff);
    const double lam = estimate_eigmax(M, A);
    CHECK(lam > 0);
    const double tmax = cfl_tau_max(0.0, lam);

    SUBCASE("violating step sizes are refused") {
        const TimeGrid bad = make_time_grid(10.0 * tmax * 4, 4);
        StepperWorkspace ws(mesh, M, bad, 0.0);
        ws.set_coefficient(coeff);
        Vec y0 = Vec::Ones(mesh.node_count());
        CHECK_THROWS_AS(ws.forward_solve({}, &y0, nullptr), ValidationError);
    }
    SUBCASE("a compliant step size runs stably") {
        const int steps = static_cast<int>(std::ceil(0.5 / (0.5 * tmax)));
        const TimeGrid ok = make_time_grid(0.5, steps);
        StepperWorkspace ws(mesh, M, ok, 0.0);
        ws.set_coefficient(coeff);
        Vec y0(mesh.node_count());
        for (int n = 0; n < mesh.node_count(); ++n)
            y0[n] = std::sin(3.0 * mesh.nodes[n].x());
        const SpaceTimeField y = ws.forward_solve({}, &y0, nullptr);
        for (int i = 0; i <= ok.steps; ++i)
            CHECK(y[i].lpNorm<Eigen::Infinity>() < 10.0);
    }
}

// demonstrative blow-up of the explicit-type scheme far above the CFL bound
TEST_CASE("sigma = 0 diverges when tau is 10x the CFL estimate") {
    const Mesh mesh = build_rect_mesh({0, 1, 0, 1}, 9, 9);
    const SpMat M = assemble_mass(mesh);
    const Vec coeff = Vec::Constant(mesh.node_count(), 1.0);
    const double tmax = cfl_tau_max(0.0, estimate_eigmax(M, assemble_stiffness(mesh, coeff)));
    const int steps = 40;
    const TimeGrid grid = make_time_grid(10.0 * tmax * steps, steps);
    StepperWorkspace ws(mesh, M, grid, 0.0);
    ws.set_coefficient(coeff);
    Vec y0(mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n)
        y0[n] = std::sin(5.0 * mesh.nodes[n].x()) * std::cos(3.0 * mesh.nodes[n].y());
    double maxnorm = 0;
    try {
        const SpaceTimeField y = ws.forward_solve({}, &y0, nullptr, /*cfl_override=*/true);
        for (int i = 0; i <= grid.steps; ++i)
            maxnorm = std::max(maxnorm, y[i].lpNorm<Eigen::Infinity>());
    } catch (const SolverError&) {
        maxnorm = std::numeric_limits<double>::infinity(); // overflowed to non-finite
    }
    CHECK(maxnorm > 1e6);
}
