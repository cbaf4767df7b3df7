#pragma once

#include "spherocurve/curves.hpp"
#include "spherocurve/frenet.hpp"
#include "spherocurve/quatspin.hpp"

namespace spherocurve {

/// Lambda x = omega_l x - x omega_r on H.
struct SpinSplit {
    Quaternion omega_l;
    Quaternion omega_r;
};

/// Split of the Jacobi matrix with subdiagonal (s, s kappa, s tau).
SpinSplit split_log_derivative(double s, double kappa, double tau);

/// Split of an arbitrary skew 4x4 matrix.
SpinSplit split_skew(const Eigen::Matrix4d& lambda);

/// 4x4 matrix of x -> omega_l x - x omega_r.
Eigen::Matrix4d join_split(const SpinSplit& split);

/// 3x3 matrix of h -> w h - h w = 2 w x h for imaginary w.
Eigen::Matrix3d adjoint_matrix(const Quaternion& w);

struct PairCurve {
    CurveSpec left;
    CurveSpec right;
    /// Shared parameter grid.
    std::vector<double> ts;
};

struct Decomposition {
    PairCurve pair;
    FrameCurve frames;
    std::vector<SpinPair> lift;
};

/// Frames -> Spin_4 lift from (1, 1) -> first columns of Pi_3 of each factor.
/// ConvexityError unless the input is locally convex.
Decomposition decompose_full(const CurveSpec& gamma, int samples = 1024);
PairCurve decompose(const CurveSpec& gamma, int samples = 1024);

struct ConditionLReport {
    /// Largest relative speed mismatch |v_l - v_r| / max(v_l, v_r).
    double speed_mismatch = 0.0;
    /// Smallest kappa_l - |kappa_r|.
    double margin = 0.0;
    double margin_t = 0.0;
    bool pass = false;
};

inline constexpr double kSpeedMismatchTol = 1e-6;
inline constexpr double kConditionLMargin = 1e-9;

ConditionLReport condition_L_report(const PairCurve& pair, int grid = kVerificationGrid);

/// S^3 curve with common speed c, s = c (kl - kr) / 2, kappa = 2 / (kl - kr),
/// tau = (kl + kr) / (kl - kr). ConditionLError names the first failing sample.
CurveSpec compose(const PairCurve& pair, int steps = 1024);

/// Endpoint of the Spin_4 lift (from (1, 1)) of the Frenet frame path of an S^3 curve.
SpinPair lifted_endpoint(const CurveSpec& gamma, int samples = 1024);
/// Endpoint of the Spin_3 lift (from 1) of the Frenet frame path of an S^2 curve.
UnitQuaternion lifted_endpoint_s2(const CurveSpec& curve, int samples = 1024);

} // namespace spherocurve
