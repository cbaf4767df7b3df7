#include "oracles.hpp"

#include "spherocurve/catalog.hpp"
#include "spherocurve/errors.hpp"
#include "spherocurve/frenet.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spherocurve;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("catalog") {

TEST_CASE("circles start at e1 with the identity frame") {
    for (double c : {0.5, pi / 2, pi, 3 * pi / 2, 2 * pi}) {
        const auto s = sigma(c);
        CHECK((s.point(0) - Eigen::Vector3d::UnitX()).norm() < 1e-15);
        CHECK((frenet_frame(s, 0.0).frame - Mat::Identity(3, 3)).norm() < 1e-12);
        CHECK(s.jet(0.4)[1].norm() == doctest::Approx(c).epsilon(1e-12));
        CHECK(sphere_residual(s) < 1e-15);
        // Closed: sigma_c(1) = sigma_c(0).
        CHECK((s.point(1) - s.point(0)).norm() < 1e-12);
    }
}

TEST_CASE("circle curvatures") {
    CHECK(curvature_s2(sigma(pi), 0.3) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(std::abs(curvature_s2(sigma(2 * pi), 0.7)) < 1e-12);
    for (double c : {pi / 2, 3 * pi / 2}) {
        const double rho = std::asin(c / (2 * pi));
        CHECK(curvature_s2(sigma(c), 0.2) == doctest::Approx(1 / std::tan(rho)).epsilon(1e-10));
    }
}

TEST_CASE("circle length range") {
    CHECK_THROWS_AS(sigma(0.0), RangeError);
    CHECK_THROWS_AS(sigma(-1.0), RangeError);
    CHECK_THROWS_AS(sigma(7.0), RangeError);
    CHECK_NOTHROW(sigma(2 * pi));
}

TEST_CASE("iteration") {
    CHECK(curve_length(sigma(2 * pi, 0.5)) == doctest::Approx(pi).epsilon(1e-10));
    CHECK(oracle::arc_length(sigma(2 * pi, 0.5)) == doctest::Approx(pi).epsilon(1e-7));
    CHECK(sigma(pi, 5).jet(0.1)[1].norm() == doctest::Approx(5 * pi).epsilon(1e-12));
    const auto once = iterate(sigma(pi), 1.0);
    CHECK((once.point(0.37) - sigma(pi).point(0.37)).norm() < 1e-15);
    CHECK_THROWS_AS(iterate(sigma(pi), 0.0), PreconditionError);
    const auto ref = sigma(pi, 2).catalog();
    REQUIRE(ref.has_value());
    CHECK(ref->name == "sigma");
    CHECK(ref->m == 2.0);
}

TEST_CASE("gamma1 endpoints and closed form") {
    CHECK((gamma1(1).curve.point(0) - Eigen::Vector4d::UnitX()).norm() < 1e-15);
    CHECK((gamma1(1).curve.point(1) - Eigen::Vector4d::UnitW()).norm() < 1e-15);
    CHECK((gamma1(2).curve.point(1) + Eigen::Vector4d::UnitX()).norm() < 1e-15);
    for (double m : {1.0, 2.0, 5.0}) {
        const auto g = gamma1(m);
        CHECK(sphere_residual(g.curve) < 1e-14);
        for (int i = 0; i <= 10; ++i) {
            const double t = i / 10.0;
            CHECK((g.curve.point(t) - oracle::veronese(m, t)).norm() < 1e-14);
            const Vec viaexp = oracle::expm(t * Mat(g.lambda)).col(0);
            CHECK((g.curve.point(t) - viaexp).norm() < 1e-12);
        }
    }
    CHECK_THROWS_AS(gamma1(0), PreconditionError);
}

TEST_CASE("gamma1 log-derivative entries") {
    const auto l = gamma1(2).lambda;
    const double r3 = std::sqrt(3.0);
    CHECK(l(1, 0) == doctest::Approx(pi * r3).epsilon(1e-14));
    CHECK(l(2, 1) == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(l(3, 2) == doctest::Approx(pi * r3).epsilon(1e-14));
    CHECK((l + l.transpose()).norm() == 0.0);
    CHECK(l(2, 0) == 0.0);
    CHECK(l(3, 0) == 0.0);
}

TEST_CASE("jacobi matrix layout") {
    const Mat j = jacobi_matrix(Eigen::Vector3d(1, 2, 3));
    CHECK(j(1, 0) == 1);
    CHECK(j(0, 1) == -1);
    CHECK(j(3, 2) == 3);
    CHECK(j(2, 3) == -3);
    CHECK(j.diagonal().norm() == 0);
}

TEST_CASE("catalog references") {
    const auto s = catalog_curve({"sigma", pi, 2});
    CHECK((s.point(0.3) - sigma(pi, 2).point(0.3)).norm() == 0.0);
    const auto g = catalog_curve({"gamma1", 0, 5});
    CHECK((g.point(0.3) - gamma1(5).curve.point(0.3)).norm() == 0.0);
    CHECK_THROWS_AS(catalog_curve({"trefoil", 1, 1}), SchemaError);
}

} // TEST_SUITE
