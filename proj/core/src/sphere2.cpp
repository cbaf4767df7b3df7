#include "spherocurve/sphere2.hpp"

#include "spherocurve/decomp.hpp"
#include "spherocurve/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <numbers>
#include <ostream>
#include <sstream>

namespace spherocurve {

namespace {

using std::numbers::pi;

std::vector<Vec> sample_points(const CurveSpec& curve, int samples) {
    if (curve.dim() != 3) throw PreconditionError("expected a curve on S^2");
    const auto ts = uniform_grid(samples);
    std::vector<Vec> pts(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { pts[i] = curve.point(ts[i]); });
    return pts;
}

double min_dot(const std::vector<Vec>& pts, const Eigen::Vector3d& h) {
    double m = std::numeric_limits<double>::infinity();
    for (const Vec& p : pts) m = std::min(m, h.dot(p));
    return m;
}

Eigen::Vector3d fibonacci_direction(int i, int n) {
    const double golden = pi * (3.0 - std::sqrt(5.0));
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(golden * i), r * std::sin(golden * i), z};
}

struct Ascent {
    Eigen::Vector3d h;
    double value;
};

// Steepest ascent of m(h) = min_t h . gamma(t) on the sphere. The direction is the
// min-norm point of the tangential parts of the eps-active points, which increases
// every one of them to first order.
Ascent ascend(const std::vector<Vec>& pts, Eigen::Vector3d h) {
    double value = min_dot(pts, h);
    double eps = 0.05;
    for (int iter = 0; iter < 500 && eps > 1e-12; ++iter) {
        std::vector<Vec> tangents;
        for (const Vec& p : pts) {
            const double d = h.dot(p);
            if (d <= value + eps) tangents.push_back(p - d * h);
        }
        const Vec dir = min_norm_point(tangents);
        if (dir.norm() < 1e-13) {
            eps *= 0.25;
            continue;
        }
        const Eigen::Vector3d u = dir.normalized();
        bool improved = false;
        for (double theta = 0.5; theta > 1e-14; theta *= 0.5) {
            const Eigen::Vector3d cand = (std::cos(theta) * h + std::sin(theta) * u).normalized();
            const double v = min_dot(pts, cand);
            if (v > value) {
                h = cand;
                value = v;
                improved = true;
                break;
            }
        }
        if (!improved) eps *= 0.25;
    }
    return {h, value};
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << x;
    return s.str();
}

} // namespace

Vec min_norm_point(const std::vector<Vec>& points) {
    if (points.empty()) throw PreconditionError("min_norm_point needs at least one point");
    const auto dim = points.front().size();
    double scale = 0.0;
    for (const Vec& p : points) scale = std::max(scale, p.squaredNorm());
    if (scale == 0.0) return Vec::Zero(dim);

    std::size_t start = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].squaredNorm() < points[start].squaredNorm()) start = i;
    }
    std::vector<std::size_t> corral{start};
    std::vector<double> lambda{1.0};
    Vec x = points[start];

    for (int major = 0; major < 1000; ++major) {
        std::size_t j = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double v = x.dot(points[i]);
            if (v < best) {
                best = v;
                j = i;
            }
        }
        if (x.squaredNorm() - best <= 1e-14 * scale) break;
        if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
        corral.push_back(j);
        lambda.push_back(0.0);

        for (int minor = 0; minor < 100; ++minor) {
            // Affine minimizer over the corral: [P^T P 1; 1^T 0] [mu; nu] = [0; 1].
            const auto k = static_cast<Eigen::Index>(corral.size());
            Mat kkt = Mat::Zero(k + 1, k + 1);
            for (Eigen::Index a = 0; a < k; ++a) {
                for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = points[corral[a]].dot(points[corral[b]]);
                kkt(a, k) = kkt(k, a) = 1.0;
            }
            Vec rhs = Vec::Zero(k + 1);
            rhs[k] = 1.0;
            const Vec mu = kkt.completeOrthogonalDecomposition().solve(rhs);
            if ((mu.head(k).array() > 1e-14).all()) {
                for (Eigen::Index a = 0; a < k; ++a) lambda[a] = mu[a];
                break;
            }
            double theta = 1.0;
            for (Eigen::Index a = 0; a < k; ++a) {
                if (mu[a] <= 1e-14) theta = std::min(theta, lambda[a] / (lambda[a] - mu[a]));
            }
            for (Eigen::Index a = 0; a < k; ++a) lambda[a] += theta * (mu[a] - lambda[a]);
            for (Eigen::Index a = k - 1; a >= 0; --a) {
                if (lambda[a] <= 1e-14) {
                    corral.erase(corral.begin() + a);
                    lambda.erase(lambda.begin() + a);
                }
            }
            const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
            for (double& l : lambda) l /= total;
        }
        x = Vec::Zero(dim);
        for (std::size_t a = 0; a < corral.size(); ++a) x += lambda[a] * points[corral[a]];
    }
    return x;
}

std::string_view to_string(Hemisphericity h) {
    switch (h) {
    case Hemisphericity::Hemispherical: return "hemispherical";
    case Hemisphericity::Borderline: return "borderline";
    case Hemisphericity::Neither: return "neither";
    }
    return "neither";
}

HemisphereReport hemisphere_classify(const CurveSpec& curve, int samples) {
    const auto pts = sample_points(curve, samples);
    HemisphereReport rep;
    const Vec p = min_norm_point(pts);
    if (p.norm() > kBorderlineBand) {
        rep.classification = Hemisphericity::Hemispherical;
        rep.witness = p.normalized();
        rep.margin = min_dot(pts, rep.witness);
        return rep;
    }
    // The origin is (nearly) in the hull: the optimum is <= 0; find how close to 0.
    constexpr int kProbe = 256, kStarts = 8;
    std::vector<std::pair<double, int>> probes(kProbe);
    for (int i = 0; i < kProbe; ++i) probes[i] = {-min_dot(pts, fibonacci_direction(i, kProbe)), i};
    std::sort(probes.begin(), probes.end());
    std::vector<Ascent> results(kStarts);
    parallel_for(kStarts, [&](std::size_t s) {
        results[s] = ascend(pts, fibonacci_direction(probes[s].second, kProbe));
    });
    // Best by value, ties by lowest start index.
    std::size_t best = 0;
    for (std::size_t s = 1; s < results.size(); ++s) {
        if (results[s].value > results[best].value) best = s;
    }
    rep.witness = results[best].h;
    rep.margin = results[best].value;
    if (rep.margin > kBorderlineBand) {
        rep.classification = Hemisphericity::Hemispherical;
    } else if (rep.margin >= -kBorderlineBand) {
        rep.classification = Hemisphericity::Borderline;
    } else {
        rep.classification = Hemisphericity::Neither;
    }
    return rep;
}

Eigen::Vector3d distinguished_hemisphere(const CurveSpec& curve, int directions, int samples) {
    const HemisphereReport rep = hemisphere_classify(curve, samples);
    if (rep.classification == Hemisphericity::Neither) {
        throw EmptyFeasibleError("the curve lies in no closed hemisphere (best margin " +
                                 fmt(rep.margin) + ")");
    }
    const auto pts = sample_points(curve, samples);
    const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(), 64));
    std::vector<Eigen::Vector3d> partial(workers, Eigen::Vector3d::Zero());
    parallel_for(workers, [&](std::size_t w) {
        for (int i = static_cast<int>(w); i < directions; i += static_cast<int>(workers)) {
            const Eigen::Vector3d h = fibonacci_direction(i, directions);
            bool feasible = true;
            for (const Vec& p : pts) {
                if (h.dot(p) < 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) partial[w] += h;
        }
    });
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const auto& s : partial) sum += s;
    if (sum.norm() < 1e-12) return rep.witness;
    return sum.normalized();
}

PlanarClosedCurve stereographic_project(const CurveSpec& curve, const Eigen::Vector3d& h,
                                        int samples) {
    if (curve.dim() != 3) throw PreconditionError("expected a curve on S^2");
    const Eigen::Vector3d n = h.normalized();
    int axis = 0;
    n.cwiseAbs().minCoeff(&axis);
    const Eigen::Vector3d a = (Eigen::Vector3d::Unit(axis) - n[axis] * n).normalized();
    const Eigen::Vector3d b = n.cross(a);
    Eigen::Matrix3d rot;
    rot << a.transpose(), b.transpose(), n.transpose();

    PlanarClosedCurve pc;
    pc.ts = uniform_grid(samples);
    pc.points.resize(pc.ts.size());
    pc.tangents.resize(pc.ts.size());
    std::vector<double> pole_distance(pc.ts.size());
    parallel_for(pc.ts.size(), [&](std::size_t i) {
        const Jet j = curve.jet(pc.ts[i]);
        const Eigen::Vector3d p = rot * Eigen::Vector3d(j[0]);
        const Eigen::Vector3d dp = rot * Eigen::Vector3d(j[1]);
        pole_distance[i] = (Eigen::Vector3d(j[0]) + n).norm();
        const double w = 1.0 + p.z();
        pc.points[i] = Eigen::Vector2d(p.x(), -p.y()) / w;
        pc.tangents[i] = (Eigen::Vector2d(dp.x(), -dp.y()) * w - Eigen::Vector2d(p.x(), -p.y()) * dp.z()) /
                         (w * w);
    });
    const auto closest = std::min_element(pole_distance.begin(), pole_distance.end());
    if (*closest < 1e-6) {
        std::ostringstream msg;
        msg << "the curve passes within " << *closest << " of the projection pole at t = "
            << pc.ts[static_cast<std::size_t>(closest - pole_distance.begin())];
        throw PoleError(msg.str());
    }
    if ((curve.point(0.0) - curve.point(1.0)).norm() > 1e-9) {
        throw PreconditionError("the curve is not closed");
    }
    return pc;
}

double total_turning(const PlanarClosedCurve& pc) {
    double total = 0.0;
    for (std::size_t i = 0; i < pc.tangents.size(); ++i) {
        if (!(pc.tangents[i].norm() >= 1e-12)) {
            throw ImmersionError("planar curve has a rest point at t = " + fmt(pc.ts[i]));
        }
    }
    for (std::size_t i = 0; i + 1 < pc.tangents.size(); ++i) {
        const Eigen::Vector2d& u = pc.tangents[i];
        const Eigen::Vector2d& v = pc.tangents[i + 1];
        const double step = std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
        if (!(std::abs(step) < pi - 1e-9)) {
            throw DensityError("tangent turns by pi or more between consecutive samples");
        }
        total += step;
    }
    return total;
}

int rotation_number(const PlanarClosedCurve& pc) {
    const double turns = total_turning(pc) / (2.0 * pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 0.05) {
        throw DensityError("total turning " + fmt(turns) + " is not close to an integer");
    }
    return static_cast<int>(rounded);
}

std::optional<int> spherical_rotation_number(const CurveSpec& curve, const Eigen::Vector3d& h,
                                             int samples) {
    try {
        return -rotation_number(stereographic_project(curve, h, samples));
    } catch (const PoleError&) {
        return std::nullopt;
    }
}

RotationReport analyze_rotation(const CurveSpec& curve, int samples) {
    RotationReport rep;
    rep.hemisphere = hemisphere_classify(curve, samples);
    if (rep.hemisphere.classification == Hemisphericity::Neither) return rep;
    rep.distinguished = distinguished_hemisphere(curve, 100000, samples);
    rep.rotation = spherical_rotation_number(curve, *rep.distinguished, samples);
    return rep;
}

NecessaryConditionReport thm3_necessary_condition(const CurveSpec& gamma, int samples) {
    NecessaryConditionReport rep;
    const Decomposition d = decompose_full(gamma, samples);
    rep.endpoint = d.lift.back();
    const SpinPair target{UnitQuaternion{}, -UnitQuaternion{}};
    if (rep.endpoint.distance(target) > 1e-5) {
        std::ostringstream msg;
        msg << "lifted endpoint (" << rep.endpoint.left.quaternion() << ", "
            << rep.endpoint.right.quaternion() << ") is not (1, -1)";
        throw PreconditionError(msg.str());
    }
    rep.left = analyze_rotation(d.pair.left, samples);
    rep.pass = rep.left.hemisphere.classification == Hemisphericity::Hemispherical &&
               rep.left.rotation == 2;
    return rep;
}

void write_svg(std::ostream& os, const PlanarClosedCurve& pc, int annotations) {
    Eigen::Vector2d lo = pc.points.front(), hi = pc.points.front();
    for (const auto& p : pc.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double pad = 0.1 * std::max((hi - lo).maxCoeff(), 1e-6);
    lo.array() -= pad;
    hi.array() += pad;
    const double size = 600.0;
    const double scale = size / (hi - lo).maxCoeff();
    auto x = [&](const Eigen::Vector2d& p) { return fmt((p.x() - lo.x()) * scale); };
    // SVG's y axis points down.
    auto y = [&](const Eigen::Vector2d& p) { return fmt((hi.y() - p.y()) * scale); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < pc.points.size(); ++i) {
        os << (i ? " L" : "M") << x(pc.points[i]) << ',' << y(pc.points[i]);
    }
    os << "\"/>\n";

    double turned = 0.0;
    const std::size_t n = pc.points.size();
    const std::size_t every = std::max<std::size_t>(1, (n - 1) / std::max(annotations, 1));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const Eigen::Vector2d& u = pc.tangents[i - 1];
            const Eigen::Vector2d& v = pc.tangents[i];
            turned += std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
        }
        if (i % every != 0 || i + 1 == n) continue;
        os << "<circle cx=\"" << x(pc.points[i]) << "\" cy=\"" << y(pc.points[i])
           << "\" r=\"3\" fill=\"red\"/>\n";
        os << "<text x=\"" << x(pc.points[i]) << "\" y=\"" << y(pc.points[i])
           << "\" font-size=\"12\" dx=\"5\" dy=\"-5\">t=" << fmt(pc.ts[i])
           << " turn=" << fmt(turned * 180.0 / pi) << "deg</text>\n";
    }
    os << "<text x=\"10\" y=\"20\" font-size=\"14\">total turning " << fmt(turned / (2.0 * pi))
       << " turns</text>\n";
    os << "</svg>\n";
}

} // namespace spherocurve
