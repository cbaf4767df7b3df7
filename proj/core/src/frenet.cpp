#include "spherocurve/frenet.hpp"

#include "spherocurve/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace spherocurve {

namespace {

constexpr double kDependenceTol = 1e-10;

std::string at(double t) {
    std::ostringstream s;
    s << " at t = " << t;
    return s.str();
}

// Nodes a, a + h, ..., a + 4h kept inside [0, 1].
std::array<double, 5> local_nodes(double t, double h) {
    const double a = std::clamp(t - 2.0 * h, 0.0, 1.0 - 4.0 * h);
    return {a, a + h, a + 2.0 * h, a + 3.0 * h, a + 4.0 * h};
}

struct LambdaJet {
    Mat l, dl, ddl;
};

LambdaJet lambda_jet(const LambdaFunction& lambda, double t, const Mat& at_t) {
    constexpr double h = 1e-3;
    const auto nodes = local_nodes(t, h);
    const Mat w = fornberg_weights(t, nodes, 2);
    LambdaJet j{at_t, Mat::Zero(at_t.rows(), at_t.cols()), Mat::Zero(at_t.rows(), at_t.cols())};
    for (int i = 0; i < 5; ++i) {
        const Mat li = lambda(nodes[i]);
        j.dl += w(1, i) * li;
        j.ddl += w(2, i) * li;
    }
    return j;
}

void check_jacobi(const Mat& l, double t) {
    for (Eigen::Index i = 0; i + 1 < l.rows(); ++i) {
        if (!(l(i + 1, i) > 0.0)) {
            std::ostringstream msg;
            msg << "subdiagonal entry " << i + 1 << " is " << l(i + 1, i) << at(t);
            throw JacobiError(msg.str());
        }
    }
}

} // namespace

FrenetFrame frenet_from_columns(const Mat& columns) {
    const auto d = columns.rows();
    if (columns.cols() != d) throw PreconditionError("need n + 1 derivative columns");
    Mat f = Mat::Zero(d, d);
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        Vec v = columns.col(k);
        for (Eigen::Index j = 0; j < k; ++j) v -= f.col(j).dot(v) * f.col(j);
        const double n = v.norm();
        if (!(n > kDependenceTol * std::max(1.0, columns.col(k).norm()))) {
            throw DegeneracyError("derivative " + std::to_string(k) +
                                  " depends on the previous ones");
        }
        f.col(k) = v / n;
    }
    // Positive completion: x_i = det(f_0, ..., f_{d-2}, e_i).
    Vec x(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        Mat m = f;
        m.col(d - 1) = Vec::Unit(d, i);
        x[i] = m.determinant();
    }
    f.col(d - 1) = x.normalized();
    Mat r = f.transpose() * columns;
    r.triangularView<Eigen::StrictlyLower>().setZero();
    return {std::move(f), std::move(r)};
}

FrenetFrame frenet_frame(const CurveSpec& curve, double t) {
    try {
        return frenet_from_columns(curve.jet(t).columns(curve.dim() - 1));
    } catch (const DegeneracyError& e) {
        throw DegeneracyError(std::string(e.what()).substr(17) + at(t));
    }
}

double FrameCurve::kappa(std::size_t i) const {
    const Mat& r = remainders[i];
    return r(2, 2) / (r(1, 1) * r(1, 1));
}

double FrameCurve::tau(std::size_t i) const {
    const Mat& r = remainders[i];
    if (r.rows() < 4) throw PreconditionError("torsion is defined on S^3 only");
    return r(3, 3) / (r(1, 1) * r(2, 2));
}

FrameCurve frame_curve(const CurveSpec& curve, const std::vector<double>& ts) {
    FrameCurve out;
    out.ts = ts;
    out.frames.resize(ts.size());
    out.remainders.resize(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) {
        FrenetFrame f = frenet_frame(curve, ts[i]);
        out.frames[i] = std::move(f.frame);
        out.remainders[i] = std::move(f.remainder);
    });
    return out;
}

FrameCurve frame_curve(const CurveSpec& curve, int n) { return frame_curve(curve, uniform_grid(n)); }

double curvature_s2(const CurveSpec& curve, double t) {
    if (curve.dim() != 3) throw PreconditionError("curvature_s2 needs a curve in S^2");
    const Jet j = curve.jet(t);
    const double v = j[1].norm();
    if (!(v >= 1e-12)) throw ImmersionError("speed vanishes" + at(t));
    return j.columns(2).determinant() / (v * v * v);
}

CurvatureTorsion curvature_torsion_s3(const CurveSpec& curve, double t) {
    if (curve.dim() != 4) throw PreconditionError("curvature_torsion_s3 needs a curve in S^3");
    const Mat r = frenet_frame(curve, t).remainder;
    return {r(1, 1), r(2, 2) / (r(1, 1) * r(1, 1)), r(3, 3) / (r(1, 1) * r(2, 2))};
}

LocalConvexity local_convexity_check(const CurveSpec& curve, int grid, double tol) {
    const auto ts = uniform_grid(grid);
    std::vector<double> det(ts.size()), normalized(ts.size());
    const int n = curve.dim() - 1;
    parallel_for(ts.size(), [&](std::size_t i) {
        const Jet j = curve.jet(ts[i]);
        det[i] = j.columns(n).determinant();
        normalized[i] = det[i] / std::pow(j[1].norm(), n * (n + 1) / 2);
    });
    const auto it = std::min_element(det.begin(), det.end());
    const auto idx = static_cast<std::size_t>(it - det.begin());
    return {*it > tol, *it, *std::min_element(normalized.begin(), normalized.end()), ts[idx]};
}

double frame_angle(const Mat& a, const Mat& b) {
    const Mat rel = a.transpose() * b;
    const Eigen::EigenSolver<Mat> es(rel, false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const std::complex<double> z = es.eigenvalues()[i];
        worst = std::max(worst, std::abs(std::arg(z)));
    }
    return worst;
}

std::vector<Mat> log_derivative(const FrameCurve& fc) {
    const std::size_t n = fc.size();
    if (n < 5) throw PreconditionError("log_derivative needs at least 5 frames");
    for (std::size_t i = 1; i < n; ++i) {
        const double angle = frame_angle(fc.frames[i - 1], fc.frames[i]);
        if (!(angle < std::numbers::pi / 4.0)) {
            std::ostringstream msg;
            msg << "frames " << i - 1 << " and " << i << " differ by " << angle << " >= pi/4";
            throw DensityError(msg.str());
        }
    }
    std::vector<Mat> out(n);
    parallel_for(n, [&](std::size_t i) {
        const std::size_t first = stencil_start(fc.ts, fc.ts[i], 5);
        const Mat w = fornberg_weights(fc.ts[i], std::span(fc.ts).subspan(first, 5), 1);
        Mat d = Mat::Zero(fc.dim(), fc.dim());
        for (int k = 0; k < 5; ++k) d += w(1, k) * fc.frames[first + k];
        out[i] = skew_part(fc.frames[i].transpose() * d);
    });
    return out;
}

JacobiProfile jacobi_profile(const FrameCurve& fc) {
    JacobiProfile p;
    p.ts = fc.ts;
    for (std::size_t i = 0; i < fc.size(); ++i) {
        p.speed.push_back(fc.speed(i));
        p.kappa.push_back(fc.kappa(i));
        if (fc.dim() == 4) p.tau.push_back(fc.tau(i));
    }
    return p;
}

namespace {

IntegratedFrame integrate(const LambdaFunction& lambda, int dim, int steps, bool jacobian) {
    if (steps < 4) throw PreconditionError("integration needs at least 4 steps");
    if (dim != 3 && dim != 4) throw PreconditionError("frames must be 3x3 or 4x4");
    const double h = 1.0 / steps;
    auto eval = [&](double t) {
        Mat l = lambda(t);
        if (l.rows() != dim || l.cols() != dim) throw PreconditionError("lambda has wrong size");
        if (jacobian) check_jacobi(l, t);
        return l;
    };

    FrameCurve fc;
    fc.ts = uniform_grid(steps);
    fc.frames.resize(fc.ts.size());
    fc.remainders.resize(fc.ts.size());
    std::vector<Mat> lambdas(fc.ts.size());

    Mat g = Mat::Identity(dim, dim);
    lambdas[0] = eval(0.0);
    fc.frames[0] = g;
    for (int s = 0; s < steps; ++s) {
        const double t = fc.ts[s];
        const Mat mid = eval(t + 0.5 * h);
        const Mat end = eval(fc.ts[s + 1]);
        const Mat k1 = g * lambdas[s];
        const Mat k2 = (g + 0.5 * h * k1) * mid;
        const Mat k3 = (g + 0.5 * h * k2) * mid;
        const Mat k4 = (g + h * k3) * end;
        g = reorthonormalize_rows(g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        fc.frames[s + 1] = g;
        lambdas[s + 1] = end;
    }

    SampledCurve sc;
    sc.ts = fc.ts;
    sc.points.resize(fc.ts.size());
    sc.derivs.resize(fc.ts.size());
    parallel_for(fc.ts.size(), [&](std::size_t i) {
        // gamma^(k) = Gamma M_k e1 with M_1 = L, M_2 = L^2 + L', M_3 = L^3 + 2 L L' + L' L + L''.
        const LambdaJet lj = lambda_jet(lambda, fc.ts[i], lambdas[i]);
        const Mat& l = lj.l;
        const Mat m2 = l * l + lj.dl;
        const Mat m3 = l * m2 + l * lj.dl + lj.dl * l + lj.ddl;
        const Vec e1 = Vec::Unit(dim, 0);
        Mat cols(dim, 4);
        cols << e1, l.col(0), m2.col(0), m3.col(0);
        const Mat& frame = fc.frames[i];
        sc.points[i] = frame.col(0);
        sc.derivs[i] = {frame * cols.col(1), frame * cols.col(2), frame * cols.col(3)};
        fc.remainders[i] = cols.leftCols(dim);
    });
    CurveSpec curve = CurveSpec::from_samples(dim == 4 ? Space::S3 : Space::S2, std::move(sc),
                                              "integrated");
    return {std::move(fc), std::move(curve)};
}

} // namespace

IntegratedFrame integrate_frame(const LambdaFunction& lambda, int dim, int steps) {
    return integrate(lambda, dim, steps, false);
}

IntegratedFrame integrate_jacobian(const LambdaFunction& lambda, int steps) {
    const auto dim = static_cast<int>(lambda(0.0).rows());
    return integrate(lambda, dim, steps, true);
}

void write_frame_csv(std::ostream& os, const FrameCurve& fc) {
    const int d = fc.dim();
    os << "t";
    for (int r = 1; r <= d; ++r)
        for (int c = 1; c <= d; ++c) os << ",f" << r << c;
    os << ",kappa,tau,det\n";
    const auto old_flags = os.flags();
    const auto old_precision = os.precision(12);
    for (std::size_t i = 0; i < fc.size(); ++i) {
        os << fc.ts[i];
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) os << ',' << fc.frames[i](r, c);
        os << ',' << fc.kappa(i) << ',';
        if (d == 4) os << fc.tau(i);
        os << ',' << fc.det(i) << '\n';
    }
    os.flags(old_flags);
    os.precision(old_precision);
}

} // namespace spherocurve
