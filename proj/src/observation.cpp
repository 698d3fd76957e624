#include "waveinv/observation.hpp"

#include "waveinv/rng.hpp"

#include <cmath>
#include <numbers>

namespace waveinv {

SpMat temporal_mass(const TimeGrid& grid) {
    const int n = grid.nodes();
    const double tau = grid.tau();
    std::vector<Triplet> trip;
    trip.reserve(3 * n);
    for (int i = 0; i < n; ++i) {
        const bool end = (i == 0 || i == n - 1);
        trip.emplace_back(i, i, end ? tau / 3.0 : 2.0 * tau / 3.0);
        if (i + 1 < n) {
            trip.emplace_back(i, i + 1, tau / 6.0);
            trip.emplace_back(i + 1, i, tau / 6.0);
        }
    }
    SpMat M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

SpMat temporal_stiffness(const TimeGrid& grid) {
    const int n = grid.nodes();
    const double tau = grid.tau();
    std::vector<Triplet> trip;
    trip.reserve(3 * n);
    for (int i = 0; i < n; ++i) {
        const bool end = (i == 0 || i == n - 1);
        trip.emplace_back(i, i, (end ? 1.0 : 2.0) / tau);
        if (i + 1 < n) {
            trip.emplace_back(i, i + 1, -1.0 / tau);
            trip.emplace_back(i + 1, i, -1.0 / tau);
        }
    }
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

ObservationSpace ObservationSpace::restriction(const Mesh& mesh, const TimeGrid& grid,
                                               const Rect& omega_o) {
    ObservationSpace os;
    os.kind_ = ObsKind::restriction;
    os.grid_ = grid;
    os.mesh_nodes_ = mesh.node_count();
    os.Mtau_ = temporal_mass(grid);

    const double tol = 1e-9 * std::max({1.0, mesh.domain.width(), mesh.domain.height()});
    std::vector<int> node_to_col(mesh.node_count(), -1);
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (omega_o.contains(mesh.nodes[n].x(), mesh.nodes[n].y(), tol)) {
            node_to_col[n] = static_cast<int>(os.obs_nodes_.size());
            os.obs_nodes_.push_back(n);
        }
    }
    if (os.obs_nodes_.empty())
        throw ValidationError("ObservationSpace: observation subdomain contains no nodes");
    os.cols_ = static_cast<int>(os.obs_nodes_.size());

    // spatial mass over triangles inside the observation subdomain
    std::vector<Triplet> trip;
    bool any_tri = false;
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        bool inside = true;
        for (int a = 0; a < 3; ++a)
            inside = inside && node_to_col[tri[a]] >= 0;
        if (!inside)
            continue;
        any_tri = true;
        const double s = mesh.tri_area(t) / 12.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trip.emplace_back(node_to_col[tri[a]], node_to_col[tri[b]],
                                  (a == b ? 2.0 : 1.0) * s);
    }
    if (!any_tri)
        throw ValidationError("ObservationSpace: observation subdomain contains no triangles");
    os.Mo_.resize(os.cols_, os.cols_);
    os.Mo_.setFromTriplets(trip.begin(), trip.end());
    return os;
}

ObservationSpace ObservationSpace::patch_means(const Mesh& mesh, const TimeGrid& grid,
                                               const std::vector<Rect>& patches) {
    if (patches.empty())
        throw ValidationError("ObservationSpace: no patches given");
    ObservationSpace os;
    os.kind_ = ObsKind::patch_mean;
    os.grid_ = grid;
    os.mesh_nodes_ = mesh.node_count();
    os.Mtau_ = temporal_mass(grid);
    os.cols_ = static_cast<int>(patches.size());

    std::vector<Triplet> trip;
    for (int k = 0; k < os.cols_; ++k) {
        const Vec w = patch_mean_weights(mesh, patches[k]); // throws on misalignment
        for (int n = 0; n < w.size(); ++n)
            if (w[n] != 0.0)
                trip.emplace_back(n, k, w[n]);
    }
    os.W_.resize(mesh.node_count(), os.cols_);
    os.W_.setFromTriplets(trip.begin(), trip.end());
    return os;
}

void ObservationSpace::check(const Observation& o) const {
    if (o.kind != kind_ || o.time_nodes() != grid_.nodes() || o.cols() != cols_)
        throw ValidationError("Observation does not match this observation space");
}

Observation ObservationSpace::observe(const SpaceTimeField& y) const {
    if (y.time_nodes() != grid_.nodes())
        throw ValidationError("observe: trajectory length mismatch");
    Observation o;
    o.kind = kind_;
    o.data.resize(grid_.nodes(), cols_);
    for (int i = 0; i < grid_.nodes(); ++i) {
        if (y[i].size() != mesh_nodes_)
            throw ValidationError("observe: frame size mismatch");
        if (kind_ == ObsKind::restriction) {
            for (int c = 0; c < cols_; ++c)
                o.data(i, c) = y[i][obs_nodes_[c]];
        } else {
            o.data.row(i) = (W_.transpose() * y[i]).transpose();
        }
    }
    return o;
}

Observation ObservationSpace::zero() const {
    Observation o;
    o.kind = kind_;
    o.data = Mat::Zero(grid_.nodes(), cols_);
    return o;
}

double ObservationSpace::inner(const Observation& a, const Observation& b) const {
    check(a);
    check(b);
    if (kind_ == ObsKind::restriction) {
        // sum_{i,j} (Mtau)_{ij} a_i^T Mo b_j
        const Mat bm = b.data * Mo_; // Mo symmetric
        return (a.data.array() * (Mtau_ * bm).array()).sum();
    }
    return (a.data.array() * (Mtau_ * b.data).array()).sum();
}

std::vector<Vec> ObservationSpace::adjoint_observe(const Observation& o) const {
    check(o);
    std::vector<Vec> loads(grid_.nodes());
    const Mat to = Mtau_ * o.data; // temporal mass applied per column
    for (int i = 0; i < grid_.nodes(); ++i) {
        if (kind_ == ObsKind::restriction) {
            const Vec local = Mo_ * to.row(i).transpose();
            Vec g = Vec::Zero(mesh_nodes_);
            for (int c = 0; c < cols_; ++c)
                g[obs_nodes_[c]] = local[c];
            loads[i] = std::move(g);
        } else {
            loads[i] = W_ * to.row(i).transpose();
        }
    }
    return loads;
}

Observation add_noise_gaussian(const Observation& o, double level, std::uint64_t seed) {
    if (level < 0)
        throw ValidationError("add_noise_gaussian: negative level");
    Observation out = o;
    if (level == 0)
        return out;
    const double amp = level * o.data.array().abs().maxCoeff();
    Rng rng(seed);
    for (int i = 0; i < out.data.rows(); ++i)
        for (int c = 0; c < out.data.cols(); ++c)
            out.data(i, c) += amp * rng.normal();
    return out;
}

Observation add_noise_cosine(const Observation& o, const TimeGrid& grid, double delta, int M,
                             std::uint64_t seed) {
    if (o.kind != ObsKind::patch_mean)
        throw ValidationError("add_noise_cosine: requires patch-mean observations");
    if (delta < 0 || delta > 1)
        throw ValidationError("add_noise_cosine: delta must be in [0,1]");
    if (o.time_nodes() != grid.nodes())
        throw ValidationError("add_noise_cosine: grid mismatch");
    Observation out = o;
    if (delta == 0)
        return out;

    Rng rng(seed);
    const int nt = grid.nodes();
    for (int k = 0; k < o.cols(); ++k) {
        Vec m(M), s(M);
        for (int i = 0; i < M; ++i) {
            m[i] = rng.uniform01();
            s[i] = rng.uniform01();
        }
        Vec r = Vec::Zero(nt);
        for (int j = 0; j < nt; ++j) {
            const double t = grid.time(j);
            for (int i = 0; i < M; ++i)
                r[j] += m[i] / (i + 1.0) * std::cos(4.0 * std::numbers::pi * t - s[i] * std::numbers::pi);
        }
        const double sup_series = o.data.col(k).cwiseAbs().maxCoeff();
        const double sup_r = r.cwiseAbs().maxCoeff();
        if (sup_series == 0.0)
            throw ValidationError("add_noise_cosine: zero series, normalization undefined");
        if (sup_r == 0.0)
            throw ValidationError("add_noise_cosine: degenerate disturbance");
        const double eta = sup_series / sup_r;
        out.data.col(k) += delta * eta * r;
    }
    return out;
}

} // namespace waveinv
