#include "spherocurve/curves.hpp"

#include "spherocurve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spherocurve {

namespace {

constexpr int kStencilWidth = 5;

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};

template <typename F>
double gauss_legendre(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
    return half * acc;
}

double speed_at(const CurveSpec& c, double t) { return c.jet(t)[1].norm(); }

std::string describe_t(double t) {
    std::ostringstream s;
    s << "t = " << t;
    return s.str();
}

} // namespace

int ambient_dim(Space s) { return (s == Space::S2 || s == Space::R3) ? 3 : 4; }

bool is_sphere(Space s) { return s == Space::S2 || s == Space::S3; }

Space sphere_of(Space s) { return ambient_dim(s) == 3 ? Space::S2 : Space::S3; }

Space ambient_of(Space s) { return ambient_dim(s) == 3 ? Space::R3 : Space::R4; }

std::string_view to_string(Space s) {
    switch (s) {
    case Space::S2: return "S2";
    case Space::S3: return "S3";
    case Space::R3: return "R3";
    case Space::R4: return "R4";
    }
    return "?";
}

Space space_from_string(std::string_view name) {
    if (name == "S2") return Space::S2;
    if (name == "S3") return Space::S3;
    if (name == "R3") return Space::R3;
    if (name == "R4") return Space::R4;
    throw SchemaError("unknown space '" + std::string(name) + "'");
}

struct CurveSpec::Impl {
    Space space;
    std::string label;
    Generator generator;
    std::optional<SampledCurve> samples;
    std::optional<CatalogRef> catalog;
};

CurveSpec CurveSpec::generator(Space space, Generator gen, std::string label) {
    auto impl = std::make_shared<Impl>();
    impl->space = space;
    impl->generator = std::move(gen);
    impl->label = std::move(label);
    return CurveSpec(std::move(impl));
}

CurveSpec CurveSpec::from_samples(Space space, SampledCurve s, std::string label) {
    const auto n = s.ts.size();
    if (n < kStencilWidth) {
        throw PreconditionError("a sampled curve needs at least 5 samples");
    }
    if (s.points.size() != n || (s.has_derivatives() && s.derivs.size() != n)) {
        throw PreconditionError("sample arrays have mismatched lengths");
    }
    if (std::abs(s.ts.front()) > 1e-12 || std::abs(s.ts.back() - 1.0) > 1e-12) {
        throw PreconditionError("sample grid must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(s.ts[i] > s.ts[i - 1])) {
            throw PreconditionError("sample grid is not strictly increasing at index " +
                                    std::to_string(i));
        }
    }
    const int dim = ambient_dim(space);
    for (std::size_t i = 0; i < n; ++i) {
        if (s.points[i].size() != dim) {
            throw PreconditionError("sample " + std::to_string(i) + " has wrong dimension");
        }
        if (is_sphere(space) && std::abs(s.points[i].norm() - 1.0) > 1e-9) {
            throw PreconditionError("sample " + std::to_string(i) + " is off the sphere");
        }
        if (s.has_derivatives()) {
            for (const auto& d : s.derivs[i]) {
                if (d.size() != dim) {
                    throw PreconditionError("derivative at sample " + std::to_string(i) +
                                            " has wrong dimension");
                }
            }
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->space = space;
    impl->samples = std::move(s);
    impl->label = std::move(label);
    return CurveSpec(std::move(impl));
}

Space CurveSpec::space() const { return impl_->space; }
bool CurveSpec::is_sampled() const { return impl_->samples.has_value(); }
const std::string& CurveSpec::label() const { return impl_->label; }

const SampledCurve* CurveSpec::samples() const {
    return impl_->samples ? &*impl_->samples : nullptr;
}

const std::optional<CatalogRef>& CurveSpec::catalog() const { return impl_->catalog; }

CurveSpec CurveSpec::with_catalog(CatalogRef ref) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->catalog = std::move(ref);
    return CurveSpec(std::move(impl));
}

CurveSpec CurveSpec::with_label(std::string label) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->label = std::move(label);
    return CurveSpec(std::move(impl));
}

Jet CurveSpec::jet(double t) const {
    if (!impl_->samples) return impl_->generator(t);

    const SampledCurve& s = *impl_->samples;
    const std::size_t first = stencil_start(s.ts, t, kStencilWidth);
    const std::span<const double> nodes(s.ts.data() + first, kStencilWidth);
    const int dim = ambient_dim(impl_->space);
    Jet out;
    for (auto& v : out.d) v = Vec::Zero(dim);
    if (s.has_derivatives()) {
        // Stored derivatives: interpolate each order separately.
        const Mat w = fornberg_weights(t, nodes, 0);
        for (int i = 0; i < kStencilWidth; ++i) {
            out[0] += w(0, i) * s.points[first + i];
            for (int k = 1; k <= 3; ++k) out[k] += w(0, i) * s.derivs[first + i][k - 1];
        }
    } else {
        const Mat w = fornberg_weights(t, nodes, 3);
        for (int i = 0; i < kStencilWidth; ++i) {
            for (int k = 0; k <= 3; ++k) out[k] += w(k, i) * s.points[first + i];
        }
    }
    return out;
}

std::vector<double> uniform_grid(int n) {
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) ts[i] = static_cast<double>(i) / n;
    return ts;
}

SampledCurve sample(const CurveSpec& curve, int n) {
    if (n < 4) throw PreconditionError("sample needs n >= 4, got " + std::to_string(n));
    SampledCurve out;
    out.ts = uniform_grid(n);
    out.points.resize(out.ts.size());
    out.derivs.resize(out.ts.size());
    parallel_for(out.ts.size(), [&](std::size_t i) {
        const Jet j = curve.jet(out.ts[i]);
        out.points[i] = j[0];
        out.derivs[i] = {j[1], j[2], j[3]};
    });
    return out;
}

std::vector<Vec> derivatives(const CurveSpec& curve, double t, int order) {
    if (order < 1 || order > 3) {
        throw OrderError("derivative order must be 1..3, got " + std::to_string(order));
    }
    if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("parameter outside [0, 1]");
    const Jet j = curve.jet(t);
    return {j.d.begin() + 1, j.d.begin() + 1 + order};
}

CurveSpec normalize_to_sphere(const CurveSpec& curve, int grid) {
    for (double t : uniform_grid(grid)) {
        if (curve.point(t).norm() < 1e-12) {
            throw ZeroVectorError("curve vanishes at " + describe_t(t));
        }
    }
    return CurveSpec::generator(
        sphere_of(curve.space()),
        [curve](double t) {
            const Jet j = curve.jet(t);
            return j.dot(j).sqrt().reciprocal() * j;
        },
        curve.label().empty() ? std::string{} : "normalize(" + curve.label() + ")");
}

CurveSpec central_projection(const CurveSpec& curve, int grid) {
    for (double t : uniform_grid(grid)) {
        if (!(curve.point(t)[0] > 1e-9)) {
            throw ChartError("first coordinate is not positive at " + describe_t(t));
        }
    }
    return CurveSpec::generator(
        ambient_of(curve.space()),
        [curve](double t) {
            const Jet j = curve.jet(t);
            const ScalarJet first{{j[0][0], j[1][0], j[2][0], j[3][0]}};
            return first.reciprocal() * j;
        },
        curve.label().empty() ? std::string{} : "p(" + curve.label() + ")");
}

CurveSpec reparametrize(const CurveSpec& curve, std::function<ScalarJet(double)> phi,
                        std::string label) {
    return CurveSpec::generator(
        curve.space(),
        [curve, phi = std::move(phi)](double t) {
            const ScalarJet p = phi(t);
            return curve.jet(p[0]).compose(p);
        },
        std::move(label));
}

CurveSpec restrict_to(const CurveSpec& curve, double a, double b) {
    if (!(b > a)) throw PreconditionError("restrict_to needs a < b");
    return reparametrize(
        curve, [a, b](double t) { return ScalarJet{{a + (b - a) * t, b - a, 0.0, 0.0}}; },
        curve.label());
}

CurveSpec scaled(const CurveSpec& curve, std::function<ScalarJet(double)> g) {
    return CurveSpec::generator(ambient_of(curve.space()),
                                [curve, g = std::move(g)](double t) { return g(t) * curve.jet(t); });
}

CurveSpec linear_image(const CurveSpec& curve, const Mat& a) {
    const bool orthogonal = orthogonality_defect(a) < 1e-12 ||
                            (a.transpose() * a - Mat::Identity(a.rows(), a.cols()))
                                    .cwiseAbs()
                                    .maxCoeff() < 1e-12;
    const Space space = orthogonal ? curve.space() : ambient_of(curve.space());
    return CurveSpec::generator(space, [curve, a](double t) {
        Jet j = curve.jet(t);
        for (auto& v : j.d) v = a * v;
        return j;
    });
}

double curve_length(const CurveSpec& curve, int panels) {
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        total += gauss_legendre([&](double t) { return speed_at(curve, t); },
                                static_cast<double>(k) / panels,
                                static_cast<double>(k + 1) / panels);
    }
    return total;
}

namespace {

// Arc-length table plus Newton inversion of s(u) = L tau.
class ArcLength {
public:
    ArcLength(CurveSpec curve, int panels) : curve_(std::move(curve)) {
        u_.resize(static_cast<std::size_t>(panels) + 1);
        s_.resize(u_.size());
        for (int k = 0; k <= panels; ++k) u_[k] = static_cast<double>(k) / panels;
        s_[0] = 0.0;
        for (int k = 0; k < panels; ++k) {
            s_[k + 1] = s_[k] + segment(u_[k], u_[k + 1]);
        }
    }

    double total() const { return s_.back(); }

    double inverse(double target) const {
        const auto it = std::upper_bound(s_.begin(), s_.end(), target);
        const auto k = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(it - s_.begin() - 1, 0, static_cast<std::ptrdiff_t>(s_.size()) - 2));
        double u = u_[k] + (target - s_[k]) / std::max(speed_at(curve_, u_[k]), 1e-300);
        u = std::clamp(u, u_[k], u_[k + 1]);
        for (int iter = 0; iter < 30; ++iter) {
            const double f = s_[k] + segment(u_[k], u) - target;
            const double step = f / speed_at(curve_, u);
            u = std::clamp(u - step, u_[k], u_[k + 1]);
            if (std::abs(step) < 1e-15) break;
        }
        return u;
    }

private:
    double segment(double a, double b) const {
        if (b == a) return 0.0;
        return gauss_legendre([&](double t) { return speed_at(curve_, t); }, a, b);
    }

    CurveSpec curve_;
    std::vector<double> u_;
    std::vector<double> s_;
};

} // namespace

CurveSpec reparametrize_constant_speed(const CurveSpec& curve, int grid) {
    for (double t : uniform_grid(grid)) {
        if (!(speed_at(curve, t) >= 1e-12)) {
            throw ImmersionError("speed vanishes at " + describe_t(t));
        }
    }
    auto arc = std::make_shared<const ArcLength>(curve, std::max(grid, 1024));
    const double length = arc->total();
    auto phi = [arc, curve, length](double tau) {
        const double u = arc->inverse(length * std::clamp(tau, 0.0, 1.0));
        const Jet j = curve.jet(u);
        const double v = j[1].norm();
        const double q1 = 2.0 * j[2].dot(j[1]);
        const double q2 = 2.0 * (j[3].dot(j[1]) + j[2].dot(j[2]));
        const double v1 = q1 / (2.0 * v);
        const double v2 = (q2 - 2.0 * v1 * v1) / (2.0 * v);
        const double p1 = length / v;
        const double p2 = -length * v1 * p1 / (v * v);
        const double p3 =
            -length * (v2 * p1 * p1 / (v * v) + v1 * p2 / (v * v) - 2.0 * v1 * v1 * p1 * p1 / (v * v * v));
        return ScalarJet{{u, p1, p2, p3}};
    };
    return reparametrize(curve, std::move(phi),
                         curve.label().empty() ? std::string{} : "arclength(" + curve.label() + ")");
}

double sphere_residual(const CurveSpec& curve, int grid) {
    double worst = 0.0;
    for (double t : uniform_grid(grid)) worst = std::max(worst, std::abs(curve.point(t).norm() - 1.0));
    return worst;
}

} // namespace spherocurve
