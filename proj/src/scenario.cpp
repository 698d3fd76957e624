#include "waveinv/scenario.hpp"

#include <cmath>

namespace waveinv {

namespace {

double snap_x(const Mesh& mesh, double x) {
    return mesh.domain.x0 + mesh.nearest_line_x(x) * mesh.dx();
}
double snap_y(const Mesh& mesh, double y) {
    return mesh.domain.y0 + mesh.nearest_line_y(y) * mesh.dy();
}
Rect snap_rect(const Mesh& mesh, const Rect& r) {
    Rect s{snap_x(mesh, r.x0), snap_x(mesh, r.x1), snap_y(mesh, r.y0), snap_y(mesh, r.y1)};
    // on very coarse meshes both edges can land on one line; keep one cell
    if (s.x1 <= s.x0) {
        if (s.x1 + mesh.dx() <= mesh.domain.x1 + 1e-12)
            s.x1 += mesh.dx();
        else
            s.x0 -= mesh.dx();
    }
    if (s.y1 <= s.y0) {
        if (s.y1 + mesh.dy() <= mesh.domain.y1 + 1e-12)
            s.y1 += mesh.dy();
        else
            s.y0 -= mesh.dy();
    }
    return s;
}

void require_aligned(const Mesh& mesh, const Rect& r, const std::string& what) {
    if (!mesh.aligned_x(r.x0) || !mesh.aligned_x(r.x1) || !mesh.aligned_y(r.y0) ||
        !mesh.aligned_y(r.y1))
        throw ValidationError(what + " is not aligned with mesh lines; enable "
                              "[mesh] snap_geometry or adjust the geometry");
}

} // namespace

Scenario::Scenario(const ScenarioConfig& cfg) : cfg_(cfg) {
    if (!(cfg_.sigma >= 0))
        throw ValidationError("scenario: sigma must be >= 0");
    if (!(cfg_.offset > 0))
        throw ValidationError("scenario: offset coefficient must be positive");

    mesh_ = build_rect_mesh(cfg_.domain, cfg_.nx, cfg_.ny);
    grid_ = make_time_grid(cfg_.T, cfg_.nt);

    levels_.values = cfg_.levels;
    levels_.validate();

    // canonicalize geometry before any validation
    if (cfg_.snap_geometry) {
        cfg_.control_rect = snap_rect(mesh_, cfg_.control_rect);
        if (cfg_.obs_kind == "restriction")
            cfg_.obs_rect = snap_rect(mesh_, cfg_.obs_rect);
        for (auto& p : cfg_.patches)
            p = snap_rect(mesh_, p);
    } else {
        require_aligned(mesh_, cfg_.control_rect, "control rectangle");
        if (cfg_.obs_kind == "restriction")
            require_aligned(mesh_, cfg_.obs_rect, "observation rectangle");
        for (const auto& p : cfg_.patches)
            require_aligned(mesh_, p, "observation patch");
    }
    if (!mesh_.domain.contains(cfg_.control_rect, 1e-12))
        throw ValidationError("scenario: control rectangle leaves the domain");

    M_ = assemble_mass(mesh_);
    control_ = std::make_unique<ControlSpace>(mesh_, cfg_.control_rect);
    Ah_ = assemble_gradient_op(*control_);

    if (cfg_.obs_kind == "restriction") {
        obs_ = std::make_unique<ObservationSpace>(
            ObservationSpace::restriction(mesh_, grid_, cfg_.obs_rect));
    } else if (cfg_.obs_kind == "patch_mean") {
        std::vector<Rect> patches;
        patches.reserve(cfg_.patches.size());
        for (const auto& p : cfg_.patches)
            patches.push_back(p);
        obs_ = std::make_unique<ObservationSpace>(
            ObservationSpace::patch_means(mesh_, grid_, patches));
    } else {
        throw ValidationError("scenario: unknown observation kind '" + cfg_.obs_kind + "'");
    }

    ForcingSpec forcing;
    const double tol = 1e-9 * std::max(1.0, std::max(mesh_.domain.width(), mesh_.domain.height()));
    for (const auto& s : cfg_.sources) {
        if (!mesh_.domain.contains(s.x, s.y, tol))
            throw ValidationError("scenario: source outside the closed domain");
        const auto placement = s.placement == "boundary" ? Placement::boundary : Placement::interior;
        forcing.sources.push_back(PointSource::make_ricker(s.x, s.y, s.a, s.h, s.t0, placement));
    }
    force_loads_ = temporal_force_loads(mesh_, forcing, grid_);

    for (const auto& b : cfg_.exact) {
        if (!cfg_.control_rect.contains(b.rect, 1e-9))
            throw ValidationError("scenario: exact-coefficient box leaves the control rectangle");
        if (b.value < levels_.lo() - 1e-12 || b.value > levels_.hi() + 1e-12)
            throw ValidationError("scenario: exact-coefficient value outside the level range");
    }
}

Vec Scenario::exact_control() const {
    Vec u = Vec::Zero(control_->dof_count());
    const auto& nodes = mesh_.nodes;
    for (int k = 0; k < control_->dof_count(); ++k) {
        const auto& p = nodes[control_->node_ids()[k]];
        for (const auto& b : cfg_.exact)
            if (b.rect.contains(p.x(), p.y()))
                u[k] = b.value;
    }
    return u;
}

StepperWorkspace Scenario::make_workspace() const {
    return StepperWorkspace(mesh_, M_, grid_, cfg_.sigma);
}

} // namespace waveinv
