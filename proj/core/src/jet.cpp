#include "spherocurve/jet.hpp"

#include <cmath>

namespace spherocurve {

ScalarJet ScalarJet::reciprocal() const {
    const double a0 = d[0], a1 = d[1], a2 = d[2], a3 = d[3];
    const double r = 1.0 / a0;
    return {{r, -a1 * r * r, (2.0 * a1 * a1 - a0 * a2) * r * r * r,
             (-6.0 * a1 * a1 * a1 + 6.0 * a0 * a1 * a2 - a0 * a0 * a3) * r * r * r * r}};
}

ScalarJet ScalarJet::sqrt() const {
    // n^2 = q differentiated three times.
    ScalarJet n;
    n[0] = std::sqrt(d[0]);
    n[1] = d[1] / (2.0 * n[0]);
    n[2] = (d[2] - 2.0 * n[1] * n[1]) / (2.0 * n[0]);
    n[3] = (d[3] - 6.0 * n[1] * n[2]) / (2.0 * n[0]);
    return n;
}

ScalarJet operator*(const ScalarJet& x, const ScalarJet& y) {
    return {{x[0] * y[0], x[1] * y[0] + x[0] * y[1],
             x[2] * y[0] + 2.0 * x[1] * y[1] + x[0] * y[2],
             x[3] * y[0] + 3.0 * x[2] * y[1] + 3.0 * x[1] * y[2] + x[0] * y[3]}};
}

Mat Jet::columns(int order) const {
    Mat m(dim(), order + 1);
    for (int k = 0; k <= order; ++k) m.col(k) = d[k];
    return m;
}

ScalarJet Jet::dot(const Jet& o) const {
    const auto& x = d;
    const auto& y = o.d;
    return {{x[0].dot(y[0]), x[1].dot(y[0]) + x[0].dot(y[1]),
             x[2].dot(y[0]) + 2.0 * x[1].dot(y[1]) + x[0].dot(y[2]),
             x[3].dot(y[0]) + 3.0 * x[2].dot(y[1]) + 3.0 * x[1].dot(y[2]) + x[0].dot(y[3])}};
}

Jet operator*(const ScalarJet& g, const Jet& x) {
    return {{g[0] * x[0], g[1] * x[0] + g[0] * x[1],
             g[2] * x[0] + 2.0 * g[1] * x[1] + g[0] * x[2],
             g[3] * x[0] + 3.0 * g[2] * x[1] + 3.0 * g[1] * x[2] + g[0] * x[3]}};
}

Jet Jet::compose(const ScalarJet& phi) const {
    const double p1 = phi[1], p2 = phi[2], p3 = phi[3];
    return {{d[0], p1 * d[1], p1 * p1 * d[2] + p2 * d[1],
             p1 * p1 * p1 * d[3] + 3.0 * p1 * p2 * d[2] + p3 * d[1]}};
}

} // namespace spherocurve
