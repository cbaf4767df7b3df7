#pragma once

#include "spherocurve/curves.hpp"

#include <functional>
#include <iosfwd>

namespace spherocurve {

/// Derivative matrix (gamma, gamma', ..., gamma^(n)) = frame * remainder.
struct FrenetFrame {
    Mat frame;
    Mat remainder;
};

/// Gram-Schmidt on gamma, ..., gamma^(n-1); the last column completes a positive
/// orthonormal basis, so the last diagonal entry of the remainder carries the sign
/// of the determinant. DegeneracyError if the leading vectors are dependent.
FrenetFrame frenet_from_columns(const Mat& columns);
FrenetFrame frenet_frame(const CurveSpec& curve, double t);

/// Frames and remainders on a parameter grid.
struct FrameCurve {
    std::vector<double> ts;
    std::vector<Mat> frames;
    std::vector<Mat> remainders;

    std::size_t size() const { return ts.size(); }
    int dim() const { return frames.empty() ? 0 : static_cast<int>(frames.front().rows()); }

    double speed(std::size_t i) const { return remainders[i](1, 1); }
    double kappa(std::size_t i) const;
    /// S^3 only.
    double tau(std::size_t i) const;
    /// det(gamma, ..., gamma^(n)).
    double det(std::size_t i) const { return remainders[i].diagonal().prod(); }
};

FrameCurve frame_curve(const CurveSpec& curve, const std::vector<double>& ts);
FrameCurve frame_curve(const CurveSpec& curve, int n = kVerificationGrid);

/// Geodesic curvature det(gamma, gamma', gamma'') / |gamma'|^3. ImmersionError at rest points.
double curvature_s2(const CurveSpec& curve, double t);

struct CurvatureTorsion {
    double speed = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
};

/// Read off the Frenet remainder; torsion keeps its sign for generic curves.
CurvatureTorsion curvature_torsion_s3(const CurveSpec& curve, double t);

struct LocalConvexity {
    bool locally_convex = false;
    double min_det = 0.0;
    /// Minimum of det / |gamma'|^(n(n+1)/2), i.e. kappa on S^2 and kappa^2 tau on S^3.
    double min_normalized_det = 0.0;
    double argmin_t = 0.0;
};

/// det(gamma, ..., gamma^(n)) > tol on a uniform grid.
LocalConvexity local_convexity_check(const CurveSpec& curve, int grid = kVerificationGrid,
                                     double tol = 1e-10);

/// Largest principal rotation angle of a^T b.
double frame_angle(const Mat& a, const Mat& b);

/// Lambda = Gamma^T Gamma' from 5-point stencils, skew-symmetrized.
/// DensityError if consecutive frames differ by pi/4 or more.
std::vector<Mat> log_derivative(const FrameCurve& frames);

struct JacobiProfile {
    std::vector<double> ts;
    std::vector<double> speed;
    std::vector<double> kappa;
    std::vector<double> tau;  // empty on S^2
};

JacobiProfile jacobi_profile(const FrameCurve& frames);

using LambdaFunction = std::function<Mat(double)>;

struct IntegratedFrame {
    FrameCurve frames;
    /// Gamma(t) e1 with derivatives Gamma M_k e1 on the integration grid.
    CurveSpec curve;
};

/// Gamma' = Gamma Lambda(t), Gamma(0) = I, classical RK4 with Gram-Schmidt on the rows
/// after every step.
IntegratedFrame integrate_frame(const LambdaFunction& lambda, int dim, int steps);

/// integrate_frame for Jacobi matrices; JacobiError unless every subdiagonal
/// entry is positive at every stage.
IntegratedFrame integrate_jacobian(const LambdaFunction& lambda, int steps);

/// Columns t, frame entries row-major, kappa, tau, det.
void write_frame_csv(std::ostream& os, const FrameCurve& frames);

} // namespace spherocurve
