#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace waveinv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Configuration or input that cannot be run as given.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failure inside a linear solve or time-stepping sweep.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Axis-aligned rectangle (x0,x1) x (y0,y1).
struct Rect {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }

    bool contains(double x, double y, double tol = 0.0) const {
        return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
    }
    bool contains(const Rect& r, double tol = 0.0) const {
        return r.x0 >= x0 - tol && r.x1 <= x1 + tol && r.y0 >= y0 - tol && r.y1 <= y1 + tol;
    }
};

} // namespace waveinv
