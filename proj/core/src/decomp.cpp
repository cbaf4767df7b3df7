#include "spherocurve/decomp.hpp"

#include "spherocurve/catalog.hpp"
#include "spherocurve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spherocurve {

namespace {

const std::array<Quaternion, 3> kImaginary = {Quaternion::i(), Quaternion::j(), Quaternion::k()};

template <int N>
std::vector<Rotation<N>> to_rotations(const FrameCurve& fc) {
    std::vector<Rotation<N>> out;
    out.reserve(fc.size());
    for (const Mat& f : fc.frames) out.emplace_back(typename Rotation<N>::Matrix(f));
    return out;
}

template <int N>
auto base_for(const Rotation<N>& first) {
    if constexpr (N == 3) {
        const bool identity = (first.matrix() - Eigen::Matrix3d::Identity()).norm() < 1e-6;
        return identity ? UnitQuaternion{} : spin3_preimage(first);
    } else {
        const bool identity = (first.matrix() - Eigen::Matrix4d::Identity()).norm() < 1e-6;
        return identity ? SpinPair{} : spin4_preimage(first);
    }
}

// Curve G(t) e1 for a frame path with G' = G W, derivatives from W and its
// grid derivatives.
CurveSpec frame_curve_from_adjoint(const std::vector<double>& ts, const std::vector<Mat>& g,
                                   const std::vector<Mat>& w, std::string label) {
    const std::size_t n = ts.size();
    SampledCurve sc;
    sc.ts = ts;
    sc.points.resize(n);
    sc.derivs.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const std::size_t first = stencil_start(ts, ts[i], 5);
        const Mat fw = fornberg_weights(ts[i], std::span(ts).subspan(first, 5), 2);
        Mat dw = Mat::Zero(3, 3), ddw = Mat::Zero(3, 3);
        for (int k = 0; k < 5; ++k) {
            dw += fw(1, k) * w[first + k];
            ddw += fw(2, k) * w[first + k];
        }
        const Mat& l = w[i];
        const Mat m2 = l * l + dw;
        const Mat m3 = l * m2 + l * dw + dw * l + ddw;
        sc.points[i] = g[i].col(0);
        sc.derivs[i] = {g[i] * l.col(0), g[i] * m2.col(0), g[i] * m3.col(0)};
    });
    return CurveSpec::from_samples(Space::S2, std::move(sc), std::move(label));
}

std::string at(double t) {
    std::ostringstream s;
    s << "t = " << t;
    return s.str();
}

} // namespace

SpinSplit split_log_derivative(double s, double kappa, double tau) {
    if (!(s > 0.0)) throw PreconditionError("split_log_derivative needs s > 0");
    return {{0.0, s * (1.0 + tau) / 2.0, 0.0, s * kappa / 2.0},
            {0.0, s * (tau - 1.0) / 2.0, 0.0, s * kappa / 2.0}};
}

SpinSplit split_skew(const Eigen::Matrix4d& lambda) {
    // Left and right imaginary multiplications form an orthogonal basis of so(4),
    // each of squared Frobenius norm 4.
    SpinSplit out;
    Eigen::Vector3d l, r;
    for (int a = 0; a < 3; ++a) {
        l[a] = (lambda.array() * left_mult_matrix(kImaginary[a]).array()).sum() / 4.0;
        r[a] = -(lambda.array() * right_mult_matrix(kImaginary[a]).array()).sum() / 4.0;
    }
    out.omega_l = Quaternion::imaginary(l);
    out.omega_r = Quaternion::imaginary(r);
    return out;
}

Eigen::Matrix4d join_split(const SpinSplit& split) {
    return left_mult_matrix(split.omega_l) - right_mult_matrix(split.omega_r);
}

Eigen::Matrix3d adjoint_matrix(const Quaternion& w) {
    const Eigen::Vector3d v = 2.0 * w.imaginary_part();
    Eigen::Matrix3d m;
    m << 0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0;
    return m;
}

Decomposition decompose_full(const CurveSpec& gamma, int samples) {
    if (gamma.dim() != 4) throw PreconditionError("decompose needs a curve in S^3");
    const LocalConvexity lc = local_convexity_check(gamma);
    if (!lc.locally_convex) {
        std::ostringstream msg;
        msg << "curve is not locally convex: det = " << lc.min_det << " at " << at(lc.argmin_t);
        throw ConvexityError(msg.str());
    }
    FrameCurve fc = frame_curve(gamma, samples);
    const auto rotations = to_rotations<4>(fc);
    std::vector<SpinPair> lift = lift_path_spin4(rotations, base_for(rotations.front()));

    const std::size_t n = fc.size();
    std::vector<Mat> gl(n), gr(n), wl(n), wr(n);
    parallel_for(n, [&](std::size_t i) {
        const SpinSplit sp = split_log_derivative(fc.speed(i), fc.kappa(i), fc.tau(i));
        gl[i] = project_spin3(lift[i].left).matrix();
        gr[i] = project_spin3(lift[i].right).matrix();
        wl[i] = adjoint_matrix(sp.omega_l);
        wr[i] = adjoint_matrix(sp.omega_r);
    });
    const std::string base = gamma.label().empty() ? "gamma" : gamma.label();
    PairCurve pair{frame_curve_from_adjoint(fc.ts, gl, wl, "left(" + base + ")"),
                   frame_curve_from_adjoint(fc.ts, gr, wr, "right(" + base + ")"), fc.ts};
    return {std::move(pair), std::move(fc), std::move(lift)};
}

PairCurve decompose(const CurveSpec& gamma, int samples) {
    return decompose_full(gamma, samples).pair;
}

namespace {

struct PairSample {
    double vl, vr, kl, kr;
};

PairSample pair_sample(const PairCurve& pair, double t) {
    const Jet l = pair.left.jet(t), r = pair.right.jet(t);
    const double vl = l[1].norm(), vr = r[1].norm();
    if (!(vl >= 1e-12) || !(vr >= 1e-12)) throw ImmersionError("pair is not immersed at " + at(t));
    return {vl, vr, l.columns(2).determinant() / (vl * vl * vl),
            r.columns(2).determinant() / (vr * vr * vr)};
}

double mismatch(const PairSample& p) { return std::abs(p.vl - p.vr) / std::max(p.vl, p.vr); }

} // namespace

ConditionLReport condition_L_report(const PairCurve& pair, int grid) {
    if (pair.left.dim() != 3 || pair.right.dim() != 3) {
        throw PreconditionError("a pair consists of two S^2 curves");
    }
    const auto ts = uniform_grid(grid);
    std::vector<PairSample> s(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { s[i] = pair_sample(pair, ts[i]); });
    ConditionLReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        rep.speed_mismatch = std::max(rep.speed_mismatch, mismatch(s[i]));
        const double m = s[i].kl - std::abs(s[i].kr);
        if (m < rep.margin) {
            rep.margin = m;
            rep.margin_t = ts[i];
        }
    }
    rep.pass = rep.speed_mismatch <= kSpeedMismatchTol && rep.margin > kConditionLMargin;
    return rep;
}

CurveSpec compose(const PairCurve& pair, int steps) {
    if (pair.left.dim() != 3 || pair.right.dim() != 3) {
        throw PreconditionError("a pair consists of two S^2 curves");
    }
    for (double t : uniform_grid(steps)) {
        const PairSample p = pair_sample(pair, t);
        if (mismatch(p) > kSpeedMismatchTol) {
            std::ostringstream msg;
            msg << "speeds differ (" << p.vl << " vs " << p.vr << ") at " << at(t);
            throw ConditionLError(msg.str());
        }
        if (!(p.kl > std::abs(p.kr) + kConditionLMargin)) {
            std::ostringstream msg;
            msg << "kappa_l = " << p.kl << " is not above |kappa_r| = " << std::abs(p.kr)
                << " at " << at(t);
            throw ConditionLError(msg.str());
        }
    }
    auto lambda = [pair](double t) {
        const PairSample p = pair_sample(pair, t);
        const double c = 0.5 * (p.vl + p.vr);
        Vec sub(3);
        sub << c * (p.kl - p.kr) / 2.0, c, c * (p.kl + p.kr) / 2.0;
        return jacobi_matrix(sub);
    };
    IntegratedFrame result = integrate_jacobian(lambda, steps);
    return result.curve.with_label("compose(" + pair.left.label() + ", " + pair.right.label() + ")");
}

SpinPair lifted_endpoint(const CurveSpec& gamma, int samples) {
    if (gamma.dim() != 4) throw PreconditionError("lifted_endpoint needs a curve in S^3");
    const auto rotations = to_rotations<4>(frame_curve(gamma, samples));
    return lift_path_spin4(rotations, base_for(rotations.front())).back();
}

UnitQuaternion lifted_endpoint_s2(const CurveSpec& curve, int samples) {
    if (curve.dim() != 3) throw PreconditionError("lifted_endpoint_s2 needs a curve in S^2");
    const auto rotations = to_rotations<3>(frame_curve(curve, samples));
    return lift_path_spin3(rotations, base_for(rotations.front())).back();
}

} // namespace spherocurve
