#pragma once

#include "waveinv/wave_stepper.hpp"

#include <cstdint>
#include <vector>

namespace waveinv {

enum class ObsKind { restriction, patch_mean };

/// Element of the discrete observation space: one row per time node, one
/// column per observation node (restriction) or per patch series (patch_mean).
struct Observation {
    ObsKind kind = ObsKind::restriction;
    Mat data;

    int time_nodes() const { return static_cast<int>(data.rows()); }
    int cols() const { return static_cast<int>(data.cols()); }
};

/// Geometry and mass structure of one observation operator B, with its
/// adjoint and inner product. Restriction restricts the state to the nodes of
/// the closed observation subdomain; patch_mean records per-patch spatial
/// means as time series.
class ObservationSpace {
public:
    static ObservationSpace restriction(const Mesh& mesh, const TimeGrid& grid, const Rect& omega_o);
    static ObservationSpace patch_means(const Mesh& mesh, const TimeGrid& grid,
                                        const std::vector<Rect>& patches);

    ObsKind kind() const { return kind_; }
    int cols() const { return cols_; }
    const TimeGrid& grid() const { return grid_; }
    const std::vector<int>& obs_nodes() const { return obs_nodes_; }

    Observation observe(const SpaceTimeField& y) const;
    Observation zero() const;

    double inner(const Observation& a, const Observation& b) const;
    double norm(const Observation& a) const { return std::sqrt(inner(a, a)); }

    /// Temporal loads G^0..G^steps with sum_i <y^i, G^i> = <B y, o> for every
    /// trajectory y; the adjoint sweep consumes G^1..G^steps.
    std::vector<Vec> adjoint_observe(const Observation& o) const;

private:
    ObsKind kind_;
    TimeGrid grid_;
    int cols_ = 0;
    int mesh_nodes_ = 0;
    std::vector<int> obs_nodes_; // restriction
    SpMat Mo_;                   // spatial mass on the observation subdomain
    SpMat W_;                    // patch weights, mesh_nodes x m
    SpMat Mtau_;                 // temporal P1 mass

    void check(const Observation& o) const;
};

SpMat temporal_mass(const TimeGrid& grid);
SpMat temporal_stiffness(const TimeGrid& grid);

/// o + level * ||o||_inf * xi, componentwise standard normal xi.
Observation add_noise_gaussian(const Observation& o, double level, std::uint64_t seed);

/// Structured cosine disturbance for patch-mean series: each series gets
/// delta * eta_k * sum_{i=1..M} (m_ik / i) cos(4 pi t - s_ik pi), with eta_k
/// normalizing the disturbance sup to the series sup over the time nodes.
Observation add_noise_cosine(const Observation& o, const TimeGrid& grid, double delta, int M,
                             std::uint64_t seed);

} // namespace waveinv
