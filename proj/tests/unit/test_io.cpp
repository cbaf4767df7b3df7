#include "spherocurve/catalog.hpp"
#include "spherocurve/errors.hpp"
#include "spherocurve/io.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spherocurve;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("io") {

TEST_CASE("malformed text") {
    CHECK_THROWS_AS(parse_json("{\"space\": "), SchemaError);
    CHECK_NOTHROW(parse_json("{}"));
}

TEST_CASE("catalog curves round-trip") {
    const auto j = curve_to_json(gamma1(2).curve);
    CHECK(j["kind"] == "catalog");
    const auto back = curve_from_json(j);
    CHECK((back.point(0.4) - gamma1(2).curve.point(0.4)).norm() == 0.0);
    const auto s = curve_from_json(parse_json(
        R"({"space": "S2", "kind": "catalog", "catalog": {"name": "sigma", "c": 3.14159, "m": 1}})"));
    CHECK(s.jet(0.2)[1].norm() == doctest::Approx(3.14159));
}

TEST_CASE("sampled curves round-trip") {
    const auto src = restrict_to(sigma(pi), 0.0, 1.0);
    const auto j = curve_to_json(src, 64);
    CHECK(j["kind"] == "samples");
    CHECK(j["samples"].size() == 65);
    const auto back = curve_from_json(j);
    CHECK(back.is_sampled());
    for (double t : {0.0, 0.25, 1.0}) CHECK((back.point(t) - src.point(t)).norm() < 1e-14);
    const auto again = curve_to_json(back);
    CHECK(again == j);
}

TEST_CASE("schema violations") {
    CHECK_THROWS_AS(curve_from_json(parse_json(R"({"kind": "catalog"})")), SchemaError);
    CHECK_THROWS_AS(curve_from_json(parse_json(R"({"space": "S7", "kind": "catalog"})")), SchemaError);
    CHECK_THROWS_AS(curve_from_json(parse_json(R"({"space": "S2", "kind": "spline"})")), SchemaError);
    CHECK_THROWS_AS(curve_from_json(parse_json(
                        R"({"space": "S2", "kind": "catalog", "catalog": {"name": "knot"}})")),
                    SchemaError);
    CHECK_THROWS_AS(curve_from_json(parse_json(
                        R"({"space": "S3", "kind": "catalog", "catalog": {"name": "sigma", "c": 1}})")),
                    SchemaError);
    // Too few samples, off-sphere points and wrong dimensions are schema errors at this layer.
    auto j = curve_to_json(restrict_to(sigma(pi), 0, 1), 8);
    j["samples"][3]["x"] = {2.0, 0.0, 0.0};
    CHECK_THROWS_AS(curve_from_json(j), SchemaError);
    j = curve_to_json(restrict_to(sigma(pi), 0, 1), 8);
    j["samples"][3]["x"] = {1.0, 0.0};
    CHECK_THROWS_AS(curve_from_json(j), SchemaError);
    j = curve_to_json(restrict_to(sigma(pi), 0, 1), 8);
    j["samples"][3].erase("d");
    CHECK_THROWS_AS(curve_from_json(j), SchemaError);
}

TEST_CASE("pairs round-trip") {
    const PairCurve p{sigma(pi, 2), sigma(2 * pi, 1), uniform_grid(128)};
    const auto j = pair_to_json(p);
    CHECK(j["grid"]["samples"] == 128);
    const auto back = pair_from_json(j);
    CHECK(back.ts.size() == 129);
    CHECK((back.left.point(0.3) - p.left.point(0.3)).norm() == 0.0);
    auto bad = j;
    bad["left"] = curve_to_json(gamma1(1).curve);
    CHECK_THROWS_AS(pair_from_json(bad), SchemaError);
    bad = j;
    bad["grid"] = {{"samples", 2}};
    CHECK_THROWS_AS(pair_from_json(bad), SchemaError);
}

TEST_CASE("circle identification") {
    const auto a = identify_circle(restrict_to(sigma(pi, 3), 0, 1));
    REQUIRE(a.has_value());
    CHECK(a->c == doctest::Approx(pi).epsilon(1e-9));
    CHECK(a->m == doctest::Approx(3.0).epsilon(1e-9));
    const auto b = identify_circle(sigma(2 * pi, 0.5));
    REQUIRE(b.has_value());
    CHECK(b->c == doctest::Approx(2 * pi).epsilon(1e-9));
    CHECK(b->m == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_FALSE(identify_circle(gamma1(1).curve).has_value());
}

TEST_CASE("report serialization") {
    const auto q = to_json(Quaternion{1, 2, 3, 4});
    CHECK(q.size() == 4);
    ConditionLReport r;
    r.pass = true;
    CHECK(to_json(r)["pass"] == true);
}

} // TEST_SUITE
