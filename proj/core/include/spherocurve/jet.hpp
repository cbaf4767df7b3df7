#pragma once

#include "spherocurve/numeric.hpp"

#include <array>

namespace spherocurve {

/// Value and first three derivatives of a scalar function at one parameter.
struct ScalarJet {
    std::array<double, 4> d{};

    double operator[](int k) const { return d[k]; }
    double& operator[](int k) { return d[k]; }

    static ScalarJet constant(double v) { return {{v, 0.0, 0.0, 0.0}}; }

    ScalarJet reciprocal() const;
    ScalarJet sqrt() const;
    friend ScalarJet operator*(const ScalarJet& x, const ScalarJet& y);
};

/// Value and first three derivatives of a vector-valued curve at one parameter.
struct Jet {
    std::array<Vec, 4> d;

    const Vec& operator[](int k) const { return d[k]; }
    Vec& operator[](int k) { return d[k]; }
    Eigen::Index dim() const { return d[0].size(); }

    /// Columns gamma, gamma', ..., gamma^(order).
    Mat columns(int order) const;

    ScalarJet dot(const Jet& o) const;
    friend Jet operator*(const ScalarJet& g, const Jet& x);

    /// Jet of t -> x(phi(t)) given the jet of x at phi(t) and the jet of phi.
    Jet compose(const ScalarJet& phi) const;
};

} // namespace spherocurve
