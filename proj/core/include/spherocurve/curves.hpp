#pragma once

#include "spherocurve/jet.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spherocurve {

enum class Space { S2, S3, R3, R4 };

int ambient_dim(Space s);
bool is_sphere(Space s);
/// The sphere of the same ambient dimension.
Space sphere_of(Space s);
Space ambient_of(Space s);
std::string_view to_string(Space s);
Space space_from_string(std::string_view name);

/// Default size of the grids on which "for all t" conditions are checked.
inline constexpr int kVerificationGrid = 512;

/// Catalog origin kept alongside a curve for reporting and JSON export.
struct CatalogRef {
    std::string name;  // "sigma" or "gamma1"
    double c = 0.0;
    double m = 1.0;
};

struct SampledCurve {
    std::vector<double> ts;
    std::vector<Vec> points;
    /// Either empty or one (gamma', gamma'', gamma''') triple per sample.
    std::vector<std::array<Vec, 3>> derivs;

    std::size_t size() const { return ts.size(); }
    bool has_derivatives() const { return !derivs.empty(); }
};

/// A curve [0,1] -> R^{n+1}, either an evaluator returning exact jets or a
/// sample grid whose derivatives come from 5-point local stencils.
class CurveSpec {
public:
    using Generator = std::function<Jet(double)>;

    static CurveSpec generator(Space space, Generator gen, std::string label = {});
    /// Validates the grid (strictly increasing, from 0 to 1) and sphere residency.
    static CurveSpec from_samples(Space space, SampledCurve samples, std::string label = {});

    Space space() const;
    int dim() const { return ambient_dim(space()); }
    bool is_sampled() const;
    const std::string& label() const;
    const SampledCurve* samples() const;

    const std::optional<CatalogRef>& catalog() const;
    CurveSpec with_catalog(CatalogRef ref) const;
    CurveSpec with_label(std::string label) const;

    /// Generators accept any real t; sampled curves interpolate inside [0,1].
    Jet jet(double t) const;
    Vec point(double t) const { return jet(t)[0]; }

private:
    struct Impl;
    explicit CurveSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Uniform grid of n + 1 parameters in [0, 1].
std::vector<double> uniform_grid(int n);

/// n + 1 uniform samples with derivatives (n >= 4).
SampledCurve sample(const CurveSpec& curve, int n);

/// gamma', ..., gamma^(order) at t in [0, 1]; OrderError unless 1 <= order <= 3.
std::vector<Vec> derivatives(const CurveSpec& curve, double t, int order);

/// gamma / |gamma|. ZeroVectorError if a verification sample has norm < 1e-12.
CurveSpec normalize_to_sphere(const CurveSpec& curve, int grid = kVerificationGrid);

/// (1, x2/x1, x3/x1, x4/x1). ChartError names the first t with x1 <= 1e-9.
CurveSpec central_projection(const CurveSpec& curve, int grid = kVerificationGrid);

/// Constant-speed (arc-length proportional) reparametrization on [0, 1].
CurveSpec reparametrize_constant_speed(const CurveSpec& curve, int grid = kVerificationGrid);

/// t -> curve(phi(t)); phi must be increasing.
CurveSpec reparametrize(const CurveSpec& curve, std::function<ScalarJet(double)> phi,
                        std::string label = {});

/// t -> curve(a + (b - a) t).
CurveSpec restrict_to(const CurveSpec& curve, double a, double b);

/// t -> g(t) curve(t) in ambient space.
CurveSpec scaled(const CurveSpec& curve, std::function<ScalarJet(double)> g);

/// t -> A curve(t). Stays on the sphere when A is orthogonal.
CurveSpec linear_image(const CurveSpec& curve, const Mat& a);

/// Total length by composite Gauss-Legendre quadrature.
double curve_length(const CurveSpec& curve, int panels = 2048);

/// max_i | |gamma(t_i)| - 1 | over a uniform grid.
double sphere_residual(const CurveSpec& curve, int grid = kVerificationGrid);

} // namespace spherocurve
