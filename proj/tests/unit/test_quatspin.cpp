#include "oracles.hpp"

#include "spherocurve/errors.hpp"
#include "spherocurve/quatspin.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spherocurve;

namespace {

constexpr double pi = std::numbers::pi;

double qdist(const Quaternion& x, const Quaternion& y) { return (x - y).norm(); }

Eigen::Matrix3d rot_z(double a) {
    return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

} // namespace

TEST_SUITE("quatspin") {

TEST_CASE("product agrees with the basis table") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int n = 0; n < 200; ++n) {
        Quaternion x{g(rng), g(rng), g(rng), g(rng)};
        Quaternion y{g(rng), g(rng), g(rng), g(rng)};
        CHECK(qdist(x * y, oracle::table_mul(x, y)) < 1e-12);
    }
    CHECK(Quaternion::i() * Quaternion::j() == Quaternion::k());
    CHECK(Quaternion::j() * Quaternion::i() == -Quaternion::k());
    const Quaternion ijk = Quaternion::i() * Quaternion::j() * Quaternion::k();
    CHECK(ijk == -Quaternion::one());
}

TEST_CASE("unit quaternion rejects non-unit input") {
    CHECK_THROWS_AS(UnitQuaternion(Quaternion{2, 0, 0, 0}), PreconditionError);
    CHECK_NOTHROW(UnitQuaternion(Quaternion{0, 0, 0, 1}));
    CHECK_THROWS_AS(UnitQuaternion::normalized(Quaternion{}), ZeroVectorError);
}

TEST_CASE("rotation validates membership in SO_n") {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = -1;
    CHECK_THROWS_AS(Rotation3{m}, CoverError);
    m(0, 0) = 1.0 + 1e-6;
    CHECK_THROWS_AS(Rotation3{m}, CoverError);
    CHECK_NOTHROW(Rotation3{rot_z(0.3)});
}

TEST_CASE("projection of k to SO3 and to SO4") {
    const UnitQuaternion k(Quaternion::k());
    const Eigen::Matrix3d d3 = Eigen::Vector3d(-1, -1, 1).asDiagonal();
    CHECK((project_spin3(k).matrix() - d3).norm() < 1e-12);
    const Eigen::Matrix4d d4 = Eigen::Vector4d(1, -1, -1, 1).asDiagonal();
    CHECK((project_spin4({k, k}).matrix() - d4).norm() < 1e-12);
}

TEST_CASE("projection matches the Rodrigues formula") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 100; ++n) {
        const auto z = oracle::random_unit_quaternion(rng);
        CHECK((project_spin3(z).matrix() - oracle::rodrigues(z)).norm() < 1e-12);
    }
}

TEST_CASE("projections are homomorphisms with kernel +-1") {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 200; ++n) {
        const auto z = oracle::random_unit_quaternion(rng);
        const auto w = oracle::random_unit_quaternion(rng);
        const auto p3 = project_spin3(z * w).matrix();
        CHECK((p3 - project_spin3(z).matrix() * project_spin3(w).matrix()).norm() < 1e-12);
        CHECK((project_spin3(-z).matrix() - project_spin3(z).matrix()).norm() < 1e-14);
        const SpinPair a{z, w};
        const SpinPair b{oracle::random_unit_quaternion(rng), oracle::random_unit_quaternion(rng)};
        const auto p4 = project_spin4(a * b).matrix();
        CHECK((p4 - project_spin4(a).matrix() * project_spin4(b).matrix()).norm() < 1e-12);
        CHECK((project_spin4(-a).matrix() - project_spin4(a).matrix()).norm() < 1e-14);
    }
    // (1, -1) acts as -I, a different element from the identity.
    const SpinPair mixed{UnitQuaternion{}, -UnitQuaternion{}};
    CHECK((project_spin4(mixed).matrix() + Eigen::Matrix4d::Identity()).norm() < 1e-14);
}

TEST_CASE("preimages project back") {
    std::mt19937_64 rng(9);
    for (int n = 0; n < 100; ++n) {
        const Rotation3 r(oracle::random_rotation(3, rng));
        const auto z = spin3_preimage(r);
        CHECK((project_spin3(z).matrix() - r.matrix()).norm() < 1e-12);
        const Rotation4 r4(oracle::random_rotation(4, rng));
        const auto p = spin4_preimage(r4);
        CHECK((project_spin4(p).matrix() - r4.matrix()).norm() < 1e-12);
    }
    // Rotations by pi have a vanishing real part in their preimage.
    const auto z = spin3_preimage(Rotation3(rot_z(pi)));
    CHECK((project_spin3(z).matrix() - rot_z(pi)).norm() < 1e-12);
}

TEST_CASE("exponential of imaginary quaternions") {
    const auto z = quat_exp(Quaternion{0, 0, 0, pi / 2});
    CHECK(qdist(z.quaternion(), Quaternion::k()) < 1e-15);
    CHECK(qdist(quat_exp(Quaternion{}).quaternion(), Quaternion::one()) == 0.0);
    CHECK_THROWS_AS(quat_exp(Quaternion{1, 0, 0, 0}), PreconditionError);
    // Pi_3(exp(w)) is the rotation by 2|w| about w.
    const Eigen::Vector3d w(0.3, -0.2, 0.5);
    const auto e = quat_exp(Quaternion::imaginary(w));
    const Eigen::Matrix3d expected =
        Eigen::AngleAxisd(2 * w.norm(), w.normalized()).toRotationMatrix();
    CHECK((project_spin3(e).matrix() - expected).norm() < 1e-12);
}

TEST_CASE("lift of a full turn ends at -1") {
    std::vector<Rotation3> frames;
    for (int i = 0; i < 64; ++i) frames.emplace_back(rot_z(2 * pi * i / 63.0));
    const auto lift = lift_path_spin3(frames);
    REQUIRE(lift.size() == frames.size());
    for (int i = 0; i < 64; ++i) {
        const double half = pi * i / 63.0;
        const Quaternion expected{std::cos(half), 0, 0, std::sin(half)};
        CHECK(qdist(lift[i].quaternion(), expected) < 1e-12);
    }
    CHECK(lift.back().distance(-UnitQuaternion{}) < 1e-12);
}

TEST_CASE("lift of a double turn returns to 1") {
    std::vector<Rotation3> frames;
    for (int i = 0; i < 128; ++i) frames.emplace_back(rot_z(4 * pi * i / 127.0));
    CHECK(lift_path_spin3(frames).back().distance(UnitQuaternion{}) < 1e-12);
}

TEST_CASE("sparse frame paths are rejected") {
    std::vector<Rotation3> frames{Rotation3(rot_z(0.0)), Rotation3(rot_z(2.0))};
    CHECK_THROWS_AS(lift_path_spin3(frames), DensityError);
}

TEST_CASE("spin4 lift follows a left-isoclinic loop") {
    // Left multiplication by exp(theta i) traces a loop in SO4 lifting to (exp(theta i), 1).
    std::vector<Rotation4> frames;
    const int n = 200;
    for (int s = 0; s < n; ++s) {
        const double th = pi * s / (n - 1);
        const SpinPair p{quat_exp(Quaternion{0, th, 0, 0}), UnitQuaternion{}};
        frames.push_back(project_spin4(p));
    }
    const auto lift = lift_path_spin4(frames);
    CHECK(lift.back().distance({-UnitQuaternion{}, UnitQuaternion{}}) < 1e-10);
}

TEST_CASE("multiplication matrices") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const Quaternion q{g(rng), g(rng), g(rng), g(rng)};
    const Quaternion x{g(rng), g(rng), g(rng), g(rng)};
    CHECK((left_mult_matrix(q) * x.vector() - (q * x).vector()).norm() < 1e-12);
    CHECK((right_mult_matrix(q) * x.vector() - (x * q).vector()).norm() < 1e-12);
}

} // TEST_SUITE
