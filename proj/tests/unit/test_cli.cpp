#include "commands.hpp"

#include "spherocurve/catalog.hpp"
#include "spherocurve/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace spherocurve;

namespace {

constexpr double pi = std::numbers::pi;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "spherocurve");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("spherocurve_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
}

// Values of one CSV column, by header name.
std::vector<double> csv_column(const std::string& csv, const std::string& name) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    int col = -1, k = 0;
    std::istringstream header(line);
    for (std::string cell; std::getline(header, cell, ','); ++k)
        if (cell == name) col = k;
    std::vector<double> out;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        for (int i = 0; i <= col; ++i) std::getline(row, cell, ',');
        out.push_back(std::stod(cell));
    }
    return out;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("frame csv for gamma1 squared") {
    const auto r = run_args({"frame", "--catalog", "gamma1", "--m", "2", "--format", "csv", "--samples", "32"});
    REQUIRE(r.code == 0);
    const auto kappa = csv_column(r.out, "kappa");
    const auto tau = csv_column(r.out, "tau");
    REQUIRE(kappa.size() == 33);
    for (double k : kappa) CHECK(k == doctest::Approx(1.1547).epsilon(1e-4));
    for (double t : tau) CHECK(t == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("frame json for a circle") {
    const auto r = run_args({"frame", "--catalog", "sigma", "--c", "3.14159", "--samples", "16"});
    REQUIRE(r.code == 0);
    const auto j = parse_json(r.out);
    CHECK(j["locally_convex"] == true);
    CHECK(j["frames"]["samples"].size() == 17);
    const auto csv = run_args({"frame", "--catalog", "sigma", "--c", "3.14159", "--format", "csv", "--samples", "16"});
    for (double k : csv_column(csv.out, "kappa")) CHECK(k == doctest::Approx(1.7320).epsilon(1e-4));
}

TEST_CASE("malformed input is a schema error") {
    const auto path = temp_file("bad.json", "{\"space\": \"S2\", ");
    const auto r = run_args({"frame", "--input", path});
    CHECK(r.code == cli::kSchema);
    CHECK(r.err.rfind("SchemaError:", 0) == 0);
}

TEST_CASE("usage errors") {
    CHECK(run_args({}).code == cli::kUsage);
    CHECK(run_args({"frame"}).code == cli::kUsage);
    CHECK(run_args({"frame", "--catalog", "trefoil"}).code == cli::kUsage);
    CHECK(run_args({"frame", "--catalog", "sigma"}).code == cli::kUsage);
    CHECK(run_args({"frame", "--catalog", "gamma1", "--samples", "8"}).code == cli::kUsage);
    CHECK(run_args({"convexity", "--catalog", "gamma1", "--format", "csv"}).code == cli::kUsage);
    CHECK(run_args({"frame", "--catalog", "gamma1", "--bogus"}).code == cli::kUsage);
    CHECK(run_args({"--help"}).code == 0);
}

TEST_CASE("geometric errors") {
    const auto r = run_args({"frame", "--catalog", "sigma", "--c", "7"});
    CHECK(r.code == cli::kGeometry);
    CHECK(r.err.rfind("RangeError:", 0) == 0);
}

TEST_CASE("decompose gamma1") {
    const auto r = run_args({"decompose", "--catalog", "gamma1", "--m", "1", "--samples", "256"});
    REQUIRE(r.code == 0);
    const auto j = parse_json(r.out);
    CHECK(j["circles"]["left"]["c"].get<double>() == doctest::Approx(pi).epsilon(1e-6));
    CHECK(j["circles"]["left"]["m"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(j["circles"]["right"]["c"].get<double>() == doctest::Approx(2 * pi).epsilon(1e-6));
    CHECK(j["circles"]["right"]["m"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(j["condition_L"]["pass"] == true);
}

TEST_CASE("compose pairs") {
    const auto r = run_args({"compose", "--catalog", "gamma1", "--m", "1"});
    REQUIRE(r.code == 0);
    const auto j = parse_json(r.out);
    const auto e = j["endpoint"];
    CHECK(e["left"][0].get<double>() == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(e["right"][3].get<double>() == doctest::Approx(1.0).epsilon(1e-5));

    const PairCurve bad{sigma(pi), sigma(pi), uniform_grid(64)};
    const auto path = temp_file("pair.json", pair_to_json(bad).dump());
    const auto f = run_args({"compose", "--input", path});
    CHECK(f.code == cli::kCondition);
    CHECK(f.err.rfind("ConditionLError:", 0) == 0);
}

TEST_CASE("convexity verdicts") {
    const auto v = [](const char* m) {
        const auto r = run_args({"convexity", "--catalog", "gamma1", "--m", m, "--budget", "2000"});
        REQUIRE(r.code == 0);
        return parse_json(r.out)["verdict"].get<std::string>();
    };
    CHECK(v("1") == "convex-certified");
    CHECK(v("2") == "convex-certified");
    CHECK(v("5") == "nonconvex-witness");
}

TEST_CASE("rotation reports") {
    const auto r = run_args({"rotation", "--catalog", "sigma", "--c", "3.141592653589793", "--m", "2"});
    REQUIRE(r.code == 0);
    const auto j = parse_json(r.out);
    CHECK(j["hemisphere"]["classification"] == "hemispherical");
    CHECK(j["rotation"] == 2);
    const auto b = parse_json(run_args({"rotation", "--catalog", "sigma", "--c", "6.283185307179586"}).out);
    CHECK(b["hemisphere"]["classification"] == "borderline");
    const auto t = run_args({"rotation", "--catalog", "gamma1", "--m", "2"});
    REQUIRE(t.code == 0);
    CHECK(parse_json(t.out)["verdict"] == "pass");
    const auto svg = run_args({"rotation", "--catalog", "sigma", "--c", "3.14159", "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.find("<svg") != std::string::npos);
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"convexity", "--catalog", "gamma1", "--m", "1", "--budget", "500"};
    CHECK(run_args(args).out == run_args(args).out);
}

TEST_CASE("output file") {
    const auto path = (std::filesystem::temp_directory_path() / "spherocurve_cli_out.json").string();
    const auto r = run_args({"frame", "--catalog", "gamma1", "--samples", "16", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(parse_json(text.str())["space"] == "S3");
}

} // TEST_SUITE
