#pragma once

#include "waveinv/config.hpp"
#include "waveinv/control_space.hpp"
#include "waveinv/observation.hpp"
#include "waveinv/prox.hpp"

#include <memory>

namespace waveinv {

/// Assembled, immutable runtime form of a ScenarioConfig: mesh, operators,
/// observation space and precomputed force loads. Safe to share between
/// concurrent solves.
class Scenario {
public:
    explicit Scenario(const ScenarioConfig& cfg);

    const ScenarioConfig& config() const { return cfg_; }
    const Mesh& mesh() const { return mesh_; }
    const TimeGrid& grid() const { return grid_; }
    const SpMat& mass() const { return M_; }
    const ControlSpace& control() const { return *control_; }
    const SpMat& gradient_op() const { return Ah_; }
    const ObservationSpace& obs() const { return *obs_; }
    const std::vector<Vec>& force_loads() const { return force_loads_; }
    const MultiBangLevels& levels() const { return levels_; }
    double sigma() const { return cfg_.sigma; }
    double offset() const { return cfg_.offset; }
    bool cfl_override() const { return cfg_.cfl_override; }

    /// offset + E0 u at every mesh node.
    Vec extended_coefficient(const Vec& u) const { return control_->extend(u, cfg_.offset); }

    /// Nodal control values of the exact coefficient boxes (last box wins).
    Vec exact_control() const;

    StepperWorkspace make_workspace() const;

private:
    ScenarioConfig cfg_; // geometry canonicalized (snapped) if requested
    Mesh mesh_;
    TimeGrid grid_;
    SpMat M_;
    std::unique_ptr<ControlSpace> control_;
    SpMat Ah_;
    std::unique_ptr<ObservationSpace> obs_;
    std::vector<Vec> force_loads_;
    MultiBangLevels levels_;
};

} // namespace waveinv
