#include "oracles.hpp"

#include "spherocurve/catalog.hpp"
#include "spherocurve/errors.hpp"
#include "spherocurve/frenet.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

using namespace spherocurve;

namespace {

constexpr double pi = std::numbers::pi;

CurveSpec great_circle_s3() {
    return CurveSpec::generator(Space::S3, [](double t) {
        const double a = 2 * pi * t, w = 2 * pi;
        Jet j;
        j[0] = Eigen::Vector4d(std::cos(a), std::sin(a), 0, 0);
        j[1] = w * Eigen::Vector4d(-std::sin(a), std::cos(a), 0, 0);
        j[2] = -w * w * j[0];
        j[3] = -w * w * j[1];
        return j;
    });
}

// gamma1(1) with the last coordinate flipped: torsion -1.
CurveSpec mirrored_gamma1() {
    const Eigen::Matrix4d flip = Eigen::Vector4d(1, 1, 1, -1).asDiagonal();
    return linear_image(gamma1(1).curve, flip);
}

Eigen::Matrix3d rot_z(double a) {
    return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

} // namespace

TEST_SUITE("frenet") {

TEST_CASE("meridian frame is a rotation about e3") {
    const auto s = sigma(2 * pi);
    for (double t : {0.0, 0.2, 0.5, 0.9})
        CHECK((frenet_frame(s, t).frame - rot_z(2 * pi * t)).norm() < 1e-12);
}

TEST_CASE("frame factorization is exact") {
    for (const auto& c : {gamma1(1).curve, gamma1(5).curve, mirrored_gamma1()}) {
        for (double t : {0.05, 0.5, 0.95}) {
            const auto f = frenet_frame(c, t);
            const Mat d = c.jet(t).columns(3);
            CHECK((d - f.frame * f.remainder).norm() / d.norm() < 1e-12);
            CHECK(orthogonality_defect(f.frame) < 1e-12);
            CHECK(f.remainder.determinant() == doctest::Approx(d.determinant()).epsilon(1e-10));
            CHECK(Mat(f.remainder.triangularView<Eigen::StrictlyLower>()).norm() == 0.0);
        }
    }
}

TEST_CASE("degenerate curves") {
    CHECK_THROWS_AS(frenet_frame(great_circle_s3(), 0.3), DegeneracyError);
    CHECK_THROWS_AS(curvature_torsion_s3(great_circle_s3(), 0.3), DegeneracyError);
    const auto stopped = reparametrize(sigma(pi), [](double t) {
        return ScalarJet{{t * t, 2 * t, 2, 0}};
    });
    CHECK_THROWS_AS(curvature_s2(stopped, 0.0), ImmersionError);
}

TEST_CASE("curvature and torsion of gamma1") {
    for (double m : {1.0, 2.0, 5.0}) {
        for (double t : {0.0, 0.33, 1.0}) {
            const auto ct = curvature_torsion_s3(gamma1(m).curve, t);
            CHECK(ct.speed == doctest::Approx(m * pi * std::sqrt(3.0) / 2).epsilon(1e-12));
            CHECK(ct.kappa == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-12));
            CHECK(ct.tau == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(curvature_torsion_s3(mirrored_gamma1(), 0.4).tau == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("torsion agrees with the binormal derivative") {
    CHECK(oracle::torsion_from_binormal(gamma1(2).curve, 0.4) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(oracle::torsion_from_binormal(mirrored_gamma1(), 0.4) ==
          doctest::Approx(-1.0).epsilon(1e-7));
    // A curve with varying torsion.
    const auto g = normalize_to_sphere(scaled(gamma1(1).curve, [](double t) {
        return ScalarJet{{1 + 0.3 * t * t, 0.6 * t, 0.6, 0}};
    }));
    const auto warped = linear_image(g, Eigen::Vector4d(1, 1.2, 0.9, 1.1).asDiagonal());
    const auto w = normalize_to_sphere(warped);
    for (double t : {0.2, 0.5, 0.8})
        CHECK(oracle::torsion_from_binormal(w, t) ==
              doctest::Approx(curvature_torsion_s3(w, t).tau).epsilon(1e-6));
}

TEST_CASE("local convexity") {
    const auto lc = local_convexity_check(gamma1(2).curve);
    CHECK(lc.locally_convex);
    CHECK(lc.min_normalized_det == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(local_convexity_check(sigma(pi)).locally_convex);
    CHECK_FALSE(local_convexity_check(sigma(2 * pi)).locally_convex);
    CHECK_FALSE(local_convexity_check(mirrored_gamma1()).locally_convex);
}

TEST_CASE("frame curves") {
    const auto fc = frame_curve(gamma1(2).curve, 64);
    REQUIRE(fc.size() == 65);
    CHECK(fc.dim() == 4);
    const double s = 2 * pi * std::sqrt(3.0) / 2;
    for (std::size_t i = 0; i < fc.size(); i += 8) {
        CHECK(fc.speed(i) == doctest::Approx(s).epsilon(1e-12));
        CHECK(fc.kappa(i) == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(fc.tau(i) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fc.det(i) == doctest::Approx(std::pow(s, 6) * 4.0 / 3.0).epsilon(1e-10));
    }
}

TEST_CASE("frame curves do not depend on the thread count") {
    const auto g = gamma1(5).curve;
    ::setenv("SPHEROCURVE_THREADS", "1", 1);
    const auto a = frame_curve(g, 300);
    ::setenv("SPHEROCURVE_THREADS", "4", 1);
    const auto b = frame_curve(g, 300);
    ::unsetenv("SPHEROCURVE_THREADS");
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a.frames[i] - b.frames[i]).norm() == 0.0);
}

TEST_CASE("log-derivative of gamma1 is its constant Jacobi matrix") {
    for (double m : {1.0, 2.0, 5.0}) {
        const auto g = gamma1(m);
        const auto lam = log_derivative(frame_curve(g.curve, 1024));
        for (std::size_t i = 0; i < lam.size(); i += 97) {
            CHECK((lam[i] + lam[i].transpose()).norm() < 1e-14);
            CHECK((lam[i] - Mat(g.lambda)).cwiseAbs().maxCoeff() < 1e-5 * m * m);
        }
    }
}

TEST_CASE("log-derivative of a constant frame path vanishes") {
    FrameCurve fc;
    for (int i = 0; i <= 10; ++i) {
        fc.ts.push_back(i / 10.0);
        fc.frames.push_back(Mat::Identity(3, 3));
        fc.remainders.push_back(Mat::Identity(3, 3));
    }
    for (const auto& l : log_derivative(fc)) CHECK(l.norm() == 0.0);
}

TEST_CASE("sparse frames are rejected") {
    CHECK_THROWS_AS(log_derivative(frame_curve(gamma1(5).curve, 6)), DensityError);
}

TEST_CASE("integration reproduces gamma1") {
    const auto g = gamma1(2);
    const Mat lam = g.lambda;
    const auto out = integrate_jacobian([&](double) { return lam; }, 1024);
    CHECK((out.curve.point(1.0) + Eigen::Vector4d::UnitX()).norm() < 1e-6);
    for (int i = 0; i <= 16; ++i) {
        const double t = i / 16.0;
        CHECK((out.curve.point(t) - g.curve.point(t)).norm() < 1e-6);
        CHECK((out.curve.jet(t)[3] - g.curve.jet(t)[3]).norm() / g.curve.jet(t)[3].norm() < 1e-6);
    }
}

TEST_CASE("integrator is fourth order") {
    const auto g = gamma1(5);
    const Mat lam = g.lambda;
    auto err = [&](int steps) {
        const auto out = integrate_frame([&](double) { return lam; }, 4, steps);
        return (out.frames.frames.back() - oracle::expm(lam)).norm();
    };
    const double ratio = err(64) / err(128);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("integration rejects non-Jacobi generators") {
    const auto zero = [](double) { return jacobi_matrix(Eigen::Vector3d(1.0, 0.0, 1.0)); };
    CHECK_THROWS_AS(integrate_jacobian(zero, 64), JacobiError);
    const auto late = [](double t) { return jacobi_matrix(Eigen::Vector3d(1.0, 0.5 - t, 1.0)); };
    CHECK_THROWS_AS(integrate_jacobian(late, 64), JacobiError);
}

TEST_CASE("integrate then differentiate recovers the profile") {
    std::mt19937_64 rng(21);
    const auto s = oracle::Wave::random(rng, 2, 4);
    const auto k = oracle::Wave::random(rng, 1, 2);
    const auto tau = oracle::Wave::random(rng, 0.5, 1.5);
    const auto lam = [&](double t) {
        return jacobi_matrix(Eigen::Vector3d(s(t), s(t) * k(t), s(t) * tau(t)));
    };
    const auto out = integrate_jacobian(lam, 2048);
    const auto prof = jacobi_profile(frame_curve(out.curve, 512));
    for (std::size_t i = 0; i < prof.ts.size(); i += 51) {
        const double t = prof.ts[i];
        CHECK(prof.speed[i] == doctest::Approx(s(t)).epsilon(1e-6));
        CHECK(prof.kappa[i] == doctest::Approx(k(t)).epsilon(1e-5));
        CHECK(prof.tau[i] == doctest::Approx(tau(t)).epsilon(1e-5));
    }
    const auto lg = log_derivative(frame_curve(out.curve, 1024));
    for (std::size_t i = 0; i < lg.size(); i += 100) {
        const double t = i / 1024.0;
        CHECK((lg[i] - lam(t)).cwiseAbs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("frame angle") {
    CHECK(frame_angle(rot_z(0.0), rot_z(0.7)) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(frame_angle(Mat::Identity(4, 4), Mat::Identity(4, 4)) == doctest::Approx(0.0));
}

TEST_CASE("csv output") {
    std::ostringstream os;
    write_frame_csv(os, frame_curve(gamma1(2).curve, 4));
    const std::string text = os.str();
    CHECK(text.rfind("t,f11,", 0) == 0);
    CHECK(text.find("kappa,tau,det") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}

} // TEST_SUITE
