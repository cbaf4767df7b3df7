#pragma once

#include "spherocurve/curves.hpp"

namespace spherocurve {

/// The circle of length c on S^2 starting at e1 with Frenet frame I:
/// cos(rho) u + sin(rho) v(t) with c = 2 pi sin(rho). RangeError unless 0 < c <= 2 pi.
CurveSpec circle_sigma(double c);

/// t -> curve(m t). Sampled curves only admit m <= 1.
CurveSpec iterate(const CurveSpec& curve, double m);

/// sigma_c iterated m times.
CurveSpec sigma(double c, double m = 1.0);

struct Gamma1 {
    CurveSpec curve;
    /// Constant log-derivative of the Frenet frame.
    Eigen::Matrix4d lambda;
};

/// The Veronese cubic of (cos(pi m t / 2), sin(pi m t / 2)) on S^3.
Gamma1 gamma1(double m);

/// Tridiagonal skew matrix with the given positive subdiagonal.
Mat jacobi_matrix(const Vec& subdiagonal);

/// Builds a catalog curve from its reference ("sigma" uses c and m, "gamma1" uses m).
CurveSpec catalog_curve(const CatalogRef& ref);

} // namespace spherocurve
