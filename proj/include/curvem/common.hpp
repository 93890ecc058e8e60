#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvem {

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or degenerate geometry (non-positive measure, bad curve, non-star fan).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A projector or reconstruction could not be formed (rank deficiency, bad degree).
class ProjectorError : public Error {
public:
    using Error::Error;
};

/// Linear solver failure (non-convergence, loss of definiteness).
class SolverError : public Error {
public:
    using Error::Error;
};

/// Malformed input: mesh files, configuration, incompatible data.
class InputError : public Error {
public:
    using Error::Error;
};

inline constexpr double pi = 3.14159265358979323846;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Outward normal of a counterclockwise-traversed boundary with tangent t.
inline Vec2 right_normal(const Vec2& t) { return Vec2(t.y(), -t.x()); }

} // namespace curvem
