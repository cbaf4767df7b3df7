#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace spherocurve::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kSchema = 2;
inline constexpr int kGeometry = 3;
inline constexpr int kCondition = 4;

struct RunConfig {
    std::string command;
    std::optional<std::string> input;
    std::optional<std::string> catalog;
    std::optional<double> c;
    double m = 1.0;
    int samples = 512;
    std::optional<double> tol;
    std::string format = "json";
    std::uint64_t seed = 1;
    long budget = 20000;
    std::optional<std::string> out;
};

/// Runs one command; errors go to `err` as "<ErrorName>: message".
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace spherocurve::cli
