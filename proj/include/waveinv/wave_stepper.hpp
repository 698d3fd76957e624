#pragma once

#include "waveinv/fem.hpp"
#include "waveinv/time_grid.hpp"

#include <Eigen/SparseCholesky>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace waveinv {

/// Nodal-in-space, piecewise-linear-in-time trajectory: frames[i] holds the
/// spatial coefficient vector at time node i.
struct SpaceTimeField {
    std::vector<Vec> frames;

    int time_nodes() const { return static_cast<int>(frames.size()); }
    Vec& operator[](int i) { return frames[i]; }
    const Vec& operator[](int i) const { return frames[i]; }
};

double ricker(double t, double a, double h, double t0);

enum class Placement { interior, boundary };

struct PointSource {
    double x = 0, y = 0;
    Placement placement = Placement::interior;
    std::function<double(double)> amplitude; // time signature

    static PointSource make_ricker(double x, double y, double a, double h, double t0,
                                   Placement p = Placement::interior);
};

struct ForcingSpec {
    std::vector<PointSource> sources;
};

/// Per-step loads F^i = (integral of f e_i dt against the hats), i = 0 ..
/// steps-1, by composite Gauss quadrature: each half of the hat support is
/// split into `panels` sub-intervals carrying a fixed-order rule.
std::vector<Vec> temporal_force_loads(const Mesh& mesh, const ForcingSpec& forcing,
                                      const TimeGrid& grid, int gauss_order = 5,
                                      int panels = 8);

/// Largest generalized eigenvalue of A x = lambda M x by power iteration.
double estimate_eigmax(const SpMat& M, const SpMat& A, int iterations = 64);

/// Largest stable step size for the three-level scheme at this sigma, or
/// +infinity for sigma >= 1/4.
double cfl_tau_max(double sigma, double eigmax);

struct SolveStats {
    long factorizations = 0;
    long forward_solves = 0;
    long adjoint_solves = 0;
    long linearized_solves = 0;
};

/// Holds the matrices and the single factorization of M + sigma tau^2 A(u)
/// shared by the forward, adjoint and linearized sweeps for one coefficient.
class StepperWorkspace {
public:
    StepperWorkspace(const Mesh& mesh, const SpMat& mass, TimeGrid grid, double sigma);

    /// Assemble A(coeff), rebuild the stepping matrices and refactorize. The
    /// sparsity pattern is analyzed once and reused.
    void set_coefficient(const Vec& coeff);

    const Mesh& mesh() const { return *mesh_; }
    const TimeGrid& grid() const { return grid_; }
    double sigma() const { return sigma_; }
    const SpMat& mass() const { return *M_; }
    const SpMat& stiffness() const { return A_; }
    const Vec& coefficient() const { return coeff_; }
    const SolveStats& stats() const { return stats_; }

    /// y^0 = y0 (or zero), then the three-level recursion driven by the
    /// per-step loads; y1_load is the load vector of the initial velocity.
    SpaceTimeField forward_solve(const std::vector<Vec>& force_loads, const Vec* y0,
                                 const Vec* y1_load, bool cfl_override = false);

    /// Exact algebraic transpose of the forward space-time system applied to
    /// the loads G^1..G^steps (index 0 of `loads` is ignored); returns
    /// p^0..p^steps with p^steps = 0.
    SpaceTimeField adjoint_solve(const std::vector<Vec>& loads);

    /// Derivative of the forward sweep with respect to the coefficient in
    /// direction delta (a full nodal field), around the trajectory y.
    SpaceTimeField linearized_solve(const Vec& delta_field, const SpaceTimeField& y);

private:
    const Mesh* mesh_;
    const SpMat* M_;
    TimeGrid grid_;
    double sigma_;
    SpMat A_, C_, B_; // C = M + s t^2 A, B = 2M - (1-2s) t^2 A
    std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> solver_; // the solver type is not movable
    bool pattern_ready_ = false;
    Vec coeff_;
    std::optional<double> tau_max_; // cached CFL bound for this coefficient
    SolveStats stats_;

    Vec solve_system(const Vec& rhs, int step) const;
    void check_cfl(bool override_flag);
};

} // namespace waveinv
