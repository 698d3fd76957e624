#include "waveinv/cli.hpp"

#include "waveinv/export.hpp"
#include "waveinv/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>

namespace waveinv {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::int64_t seed = -1;
};

ScenarioConfig resolve_config(const CommonOpts& c) {
    ScenarioConfig cfg;
    if (!c.preset.empty())
        cfg = preset_by_name(c.preset);
    else if (!c.config_path.empty())
        cfg = load_config(c.config_path);
    else
        throw ValidationError("either --config or --preset is required");
    if (c.seed >= 0)
        cfg.noise.seed = static_cast<std::uint64_t>(c.seed);
    return cfg;
}

FileHeader make_header(const ScenarioConfig& cfg) {
    FileHeader h;
    h.config_hash = config_hash(cfg);
    h.data_hash = data_hash(cfg);
    h.seed = cfg.noise.seed;
    return h;
}

Observation apply_configured_noise(const Observation& clean, const Scenario& sc) {
    const NoiseSpec& ns = sc.config().noise;
    if (ns.kind == "none" || ns.level == 0)
        return clean;
    if (ns.kind == "gaussian_relative")
        return add_noise_gaussian(clean, ns.level, ns.seed);
    if (ns.kind == "structured_cosine")
        return add_noise_cosine(clean, sc.grid(), ns.level, ns.terms, ns.seed);
    throw ValidationError("unknown noise kind '" + ns.kind + "'");
}

int cmd_generate_data(const ScenarioConfig& cfg, const std::string& outdir) {
    const Scenario sc(cfg);
    fs::create_directories(outdir);
    const FileHeader hdr = make_header(sc.config());

    const Vec ue = sc.exact_control();
    const ForwardOp fop(sc);
    const Observation clean = fop.apply_S(ue);
    const Observation yd = apply_configured_noise(clean, sc);

    write_observation_csv((fs::path(outdir) / "yd.csv").string(), hdr, sc.grid(), yd);
    const Vec coeff = sc.extended_coefficient(ue);
    write_field_csv((fs::path(outdir) / "exact_coefficient.csv").string(), hdr, sc.mesh(), coeff);
    write_field_vtk((fs::path(outdir) / "exact_coefficient.vtk").string(), hdr, sc.mesh(), coeff,
                    "exact_coefficient");
    save_config(sc.config(), (fs::path(outdir) / "config.ini").string());
    write_summary((fs::path(outdir) / "generation.txt").string(), hdr,
                  {{"scenario", sc.config().name},
                   {"noise_kind", sc.config().noise.kind},
                   {"noise_level", format_double(sc.config().noise.level)},
                   {"seed", std::to_string(sc.config().noise.seed)},
                   {"generator", sc.config().noise.generator},
                   {"time_nodes", std::to_string(sc.grid().nodes())},
                   {"observation_columns", std::to_string(sc.obs().cols())}});
    std::cout << "wrote " << outdir << "/yd.csv (" << sc.grid().nodes() << " x " << sc.obs().cols()
              << ")\n";
    return 0;
}

int cmd_solve(const ScenarioConfig& cfg, const std::string& datadir, const std::string& outdir) {
    const Scenario sc(cfg);
    fs::create_directories(outdir);
    const FileHeader hdr = make_header(sc.config());

    const auto yd_path = (fs::path(datadir) / "yd.csv").string();
    FileHeader data_hdr;
    Observation yd = read_observation_csv(yd_path, sc.obs().kind(), &data_hdr);
    if (yd.time_nodes() != sc.grid().nodes() || yd.cols() != sc.obs().cols())
        throw ValidationError("data file " + yd_path + " does not match the scenario dimensions");
    if (data_hdr.data_hash != 0 && data_hdr.data_hash != hdr.data_hash)
        throw ValidationError("data file " + yd_path +
                              " was generated from a different data configuration");

    const PdpsOptions opts = PdpsOptions::from_config(sc.config().pdps);
    const PdpsSolver solver(sc, opts, std::move(yd));
    const RunResult res = solver.run();

    write_control_csv((fs::path(outdir) / "u.csv").string(), hdr, sc.control(), res.u);
    write_field_csv((fs::path(outdir) / "coefficient.csv").string(), hdr, sc.mesh(),
                    res.coefficient);
    write_field_vtk((fs::path(outdir) / "coefficient.vtk").string(), hdr, sc.mesh(),
                    res.coefficient, "coefficient");
    write_history_csv((fs::path(outdir) / "history.csv").string(), hdr, res.history);
    save_config(sc.config(), (fs::path(outdir) / "config.ini").string());
    write_summary((fs::path(outdir) / "summary.txt").string(), hdr,
                  {{"scenario", sc.config().name},
                   {"converged", res.converged ? "true" : "false"},
                   {"iterations", std::to_string(res.iterations)},
                   {"objective", format_double(res.final_residuals.objective)},
                   {"primal_residual", format_double(res.final_residuals.primal)},
                   {"observation_residual", format_double(res.final_residuals.obs)},
                   {"dual_residual", format_double(res.final_residuals.dual)},
                   {"residual_sum", format_double(res.final_residuals.sum())},
                   {"opnorm_estimate", format_double(res.opnorm_estimate)},
                   {"stepsize_product", format_double(res.stepsize_product)},
                   {"stepsize_product_squared", format_double(res.stepsize_product_squared)},
                   {"stepsize_warning", res.stepsize_warning ? "true" : "false"},
                   {"wall_seconds", format_double(res.wall_seconds)}});

    std::cout << (res.converged ? "converged" : "NOT converged") << " after " << res.iterations
              << " iterations, residual sum " << format_double(res.final_residuals.sum()) << "\n";
    if (res.stepsize_warning)
        std::cout << "warning: gammaF*gammaG*|K'|^2 = "
                  << format_double(res.stepsize_product_squared) << " is not below 1\n";
    return res.converged ? 0 : 2;
}

int cmd_adjoint_test(ScenarioConfig cfg, int nx, int ny, int nt, bool corrupt) {
    if (nx > 0) cfg.nx = nx;
    if (ny > 0) cfg.ny = ny;
    if (nt > 0) cfg.nt = nt;
    cfg.snap_geometry = true; // diagnostics run on reduced meshes
    const Scenario sc(cfg);
    const ForwardOp fop(sc);
    const ControlSpace& cs = sc.control();
    Rng rng(sc.config().noise.seed + 1);

    const double lo = sc.levels().lo(), hi = sc.levels().hi(), range = hi - lo;
    Vec u(cs.dof_count()), du(cs.dof_count());
    for (int i = 0; i < u.size(); ++i) {
        u[i] = lo + range * (0.25 + 0.5 * rng.uniform01());
        du[i] = range * (rng.uniform01() - 0.5);
    }
    Observation o = sc.obs().zero();
    for (int i = 0; i < o.data.rows(); ++i)
        for (int c = 0; c < o.data.cols(); ++c)
            o.data(i, c) = rng.uniform01() - 0.5;

    bool all_pass = true;
    auto report = [&](const char* name, bool pass, const std::string& detail) {
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        all_pass = all_pass && pass;
    };

    // adjoint identity <dS du, o>_O = <du, dS* o>_D
    {
        StepperWorkspace ws = sc.make_workspace();
        fop.prepare(ws, u);
        const SpaceTimeField y = fop.state(ws);
        const Observation dsdu = fop.apply_dS(ws, y, du);
        GradientField g = fop.apply_dS_adjoint(ws, y, o);
        if (corrupt)
            g.riesz *= 1.0 + 1e-3;
        const double lhs = sc.obs().inner(dsdu, o);
        const double rhs = cs.inner(du, g.riesz);
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        const double rel = std::abs(lhs - rhs) / scale;
        report("adjoint identity", rel < 1e-10,
               "rel_err = " + format_double(rel) + " (threshold 1e-10)");
    }

    // Taylor remainder of S: || S(u+e du) - S(u) - e dS du || = O(e^2)
    {
        const Observation Su = fop.apply_S(u);
        const Observation dsdu = fop.apply_dS(u, du);
        std::vector<double> eps = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
        std::vector<double> errs;
        for (const double e : eps) {
            const Observation Se = fop.apply_S(u + e * du);
            Observation rem = Se;
            rem.data = Se.data - Su.data - e * dsdu.data;
            errs.push_back(sc.obs().norm(rem));
        }
        // least-squares slope on log-log
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(eps.size());
        for (int i = 0; i < n; ++i) {
            const double X = std::log(eps[i]), Y = std::log(std::max(errs[i], 1e-300));
            sx += X; sy += Y; sxx += X * X; sxy += X * Y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        report("taylor slope", slope > 1.9 && slope < 2.1,
               "slope = " + format_double(slope) + " (expected in [1.9, 2.1])");
    }

    const double est = fop.estimate_opnorm(Vec::Zero(cs.dof_count()),
                                           std::max(1, sc.config().pdps.norm_check_iters),
                                           sc.config().pdps.lumped_riesz);
    const double prod = sc.config().pdps.gamma_f * sc.config().pdps.gamma_g * est;
    std::cout << "opnorm_estimate = " << format_double(est) << "\n";
    std::cout << "gammaF*gammaG*norm = " << format_double(prod) << "\n";
    std::cout << "gammaF*gammaG*norm^2 = " << format_double(prod * est) << "\n";
    std::cout << "result: " << (all_pass ? "PASS" : "FAIL") << "\n";
    return all_pass ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"piecewise-constant wave-speed reconstruction by multibang/TV-regularized "
                 "inversion with a primal-dual proximal splitting solver"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string outdir = "out", datadir;
    int nx = 0, ny = 0, nt = 0;
    bool corrupt = false;
    double tol_override = -1;
    int max_iter_override = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "scenario configuration file");
        sub->add_option("--preset", common.preset,
                        "built-in scenario: transmission, transmission-mb, reflection");
        sub->add_option("--seed", common.seed, "override the noise seed");
    };

    auto* gen = app.add_subcommand("generate-data", "synthesize observations for a scenario");
    add_common(gen);
    gen->add_option("--out", outdir, "output directory")->required();

    auto* solve = app.add_subcommand("solve", "run the splitting iteration on recorded data");
    add_common(solve);
    solve->add_option("--data", datadir, "directory with yd.csv")->required();
    solve->add_option("--out", outdir, "output directory")->required();
    solve->add_option("--tol", tol_override, "override the residual tolerance");
    solve->add_option("--max-iter", max_iter_override, "override the iteration limit");

    auto* adj = app.add_subcommand("adjoint-test", "derivative and adjoint diagnostics "
                                                   "(geometry is snapped to reduced meshes)");
    add_common(adj);
    adj->add_option("--nx", nx, "mesh nodes in x for the test (default: config value)");
    adj->add_option("--ny", ny, "mesh nodes in y for the test");
    adj->add_option("--nt", nt, "time steps for the test");
    adj->add_flag("--corrupt-adjoint", corrupt, "negative-control hook: perturb the adjoint");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        ScenarioConfig cfg = resolve_config(common);
        if (solve->parsed()) {
            if (tol_override >= 0)
                cfg.pdps.tol = tol_override;
            if (max_iter_override > 0)
                cfg.pdps.max_iter = max_iter_override;
            return cmd_solve(cfg, datadir, outdir);
        }
        if (gen->parsed())
            return cmd_generate_data(cfg, outdir);
        return cmd_adjoint_test(cfg, nx, ny, nt, corrupt);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run_cli(args);
}

} // namespace waveinv
