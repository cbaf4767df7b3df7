#include "spherocurve/catalog.hpp"

#include "spherocurve/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spherocurve {

namespace {

using std::numbers::pi;

// Derivatives 0..3 of cos(w t) and sin(w t).
std::array<double, 4> cos_jet(double w, double t) {
    const double c = std::cos(w * t), s = std::sin(w * t);
    return {c, -w * s, -w * w * c, w * w * w * s};
}

std::array<double, 4> sin_jet(double w, double t) {
    const double c = std::cos(w * t), s = std::sin(w * t);
    return {s, w * c, -w * w * s, -w * w * w * c};
}

std::string number(double x) {
    std::ostringstream s;
    s << x;
    return s.str();
}

} // namespace

CurveSpec circle_sigma(double c) {
    if (!(c > 0.0 && c <= 2.0 * pi + 1e-12)) {
        throw RangeError("sigma needs 0 < c <= 2 pi, got c = " + number(c));
    }
    const double rho = std::asin(std::min(1.0, c / (2.0 * pi)));
    const double cr = std::cos(rho), sr = std::sin(rho);
    auto gen = [cr, sr](double t) {
        const auto co = cos_jet(2.0 * pi, t);
        const auto si = sin_jet(2.0 * pi, t);
        Jet j;
        for (int k = 0; k < 4; ++k) {
            Vec v(3);
            v << sr * sr * co[k], sr * si[k], -sr * cr * co[k];
            if (k == 0) v += cr * Eigen::Vector3d(cr, 0.0, sr);
            j[k] = v;
        }
        return j;
    };
    return CurveSpec::generator(Space::S2, gen, "sigma_" + number(c))
        .with_catalog({"sigma", c, 1.0});
}

CurveSpec iterate(const CurveSpec& curve, double m) {
    if (!(m > 0.0)) throw PreconditionError("iteration count must be positive, got " + number(m));
    if (curve.is_sampled() && m > 1.0) {
        throw PreconditionError("a sampled curve cannot be iterated beyond [0, 1]");
    }
    CurveSpec out = reparametrize(
        curve, [m](double t) { return ScalarJet{{m * t, m, 0.0, 0.0}}; },
        curve.label() + "^" + number(m));
    if (const auto& ref = curve.catalog()) {
        CatalogRef r = *ref;
        r.m *= m;
        out = out.with_catalog(r);
    }
    return out;
}

CurveSpec sigma(double c, double m) {
    CurveSpec base = circle_sigma(c);
    return m == 1.0 ? base : iterate(base, m);
}

Gamma1 gamma1(double m) {
    if (!(m > 0.0)) throw PreconditionError("gamma1 needs m > 0, got " + number(m));
    const double w = pi * m / 2.0;
    const double r3 = std::sqrt(3.0);
    auto gen = [w, r3](double t) {
        // (c^3, sqrt3 s c^2, sqrt3 c s^2, s^3) in terms of the first and third harmonics.
        const auto c1 = cos_jet(w, t), c3 = cos_jet(3.0 * w, t);
        const auto s1 = sin_jet(w, t), s3 = sin_jet(3.0 * w, t);
        Jet j;
        for (int k = 0; k < 4; ++k) {
            Vec v(4);
            v << (3.0 * c1[k] + c3[k]) / 4.0, r3 * (s1[k] + s3[k]) / 4.0,
                r3 * (c1[k] - c3[k]) / 4.0, (3.0 * s1[k] - s3[k]) / 4.0;
            j[k] = v;
        }
        return j;
    };
    Vec sub(3);
    sub << pi * m * r3 / 2.0, pi * m, pi * m * r3 / 2.0;
    return {CurveSpec::generator(Space::S3, gen, "gamma1^" + number(m))
                .with_catalog({"gamma1", 0.0, m}),
            jacobi_matrix(sub)};
}

Mat jacobi_matrix(const Vec& subdiagonal) {
    const auto n = subdiagonal.size() + 1;
    Mat l = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        l(i + 1, i) = subdiagonal[i];
        l(i, i + 1) = -subdiagonal[i];
    }
    return l;
}

CurveSpec catalog_curve(const CatalogRef& ref) {
    if (ref.name == "sigma") return sigma(ref.c, ref.m);
    if (ref.name == "gamma1") return gamma1(ref.m).curve;
    throw SchemaError("unknown catalog curve '" + ref.name + "'");
}

} // namespace spherocurve
