#pragma once

#include "spherocurve/curves.hpp"
#include "spherocurve/quatspin.hpp"

#include <iosfwd>
#include <optional>

namespace spherocurve {

/// Minimum-norm point of the convex hull of the given points (Wolfe's algorithm).
Vec min_norm_point(const std::vector<Vec>& points);

enum class Hemisphericity { Hemispherical, Borderline, Neither };
std::string_view to_string(Hemisphericity h);

struct HemisphereReport {
    Hemisphericity classification = Hemisphericity::Neither;
    Eigen::Vector3d witness = Eigen::Vector3d::UnitZ();
    /// min_t witness . gamma(t); the optimum of max_h min_t h . gamma(t).
    double margin = 0.0;
};

inline constexpr double kBorderlineBand = 1e-6;

/// Maximizes min_t h . gamma(t) over unit h: exactly via the minimum-norm point of the
/// hull when the origin is outside it, otherwise by multi-start ascent along
/// min-norm directions of the active tangent projections.
HemisphereReport hemisphere_classify(const CurveSpec& curve, int samples = 1024);

/// Normalized average of the directions h with h . gamma >= 0 among a Fibonacci
/// set of `directions` unit vectors; the classifier's witness when that set
/// misses the feasible region. EmptyFeasibleError for "neither".
Eigen::Vector3d distinguished_hemisphere(const CurveSpec& curve, int directions = 100000,
                                         int samples = 1024);

struct PlanarClosedCurve {
    std::vector<double> ts;
    std::vector<Eigen::Vector2d> points;
    std::vector<Eigen::Vector2d> tangents;
};

/// Rotates h to the north pole and projects from the south pole, with the plane
/// oriented by the outward normal at -h. PoleError if the curve comes within 1e-6
/// of -h; PreconditionError if it is not closed.
PlanarClosedCurve stereographic_project(const CurveSpec& curve, const Eigen::Vector3d& h,
                                        int samples = 1024);

/// Accumulated turning of the unit tangent (radians).
double total_turning(const PlanarClosedCurve& pc);

/// Degree of the unit tangent. ImmersionError at rest points; DensityError when a
/// step turns by pi or more or the total is not within 0.05 of an integer.
int rotation_number(const PlanarClosedCurve& pc);

/// rot(gamma) = -rot(eta) for the projection from -h; empty when the curve comes
/// within 1e-6 of -h.
std::optional<int> spherical_rotation_number(const CurveSpec& curve, const Eigen::Vector3d& h,
                                             int samples = 1024);

struct RotationReport {
    HemisphereReport hemisphere;
    std::optional<Eigen::Vector3d> distinguished;
    std::optional<int> rotation;
};

/// Classification, distinguished hemisphere and rotation number of a closed S^2 curve.
RotationReport analyze_rotation(const CurveSpec& curve, int samples = 1024);

struct NecessaryConditionReport {
    bool pass = false;
    SpinPair endpoint;
    RotationReport left;
};

/// For gamma with lifted endpoint (1, -1): its left part must be hemispherical
/// with rotation number 2. PreconditionError for other endpoints.
NecessaryConditionReport thm3_necessary_condition(const CurveSpec& gamma, int samples = 1024);

/// Projected curve with the cumulative turning angle marked along it.
void write_svg(std::ostream& os, const PlanarClosedCurve& pc, int annotations = 8);

} // namespace spherocurve
