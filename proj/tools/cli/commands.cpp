#include "commands.hpp"

#include "spherocurve/catalog.hpp"
#include "spherocurve/errors.hpp"
#include "spherocurve/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <numbers>
#include <sstream>

namespace spherocurve::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_json(text.str());
}

CurveSpec load_curve(const RunConfig& cfg) {
    if (cfg.input && cfg.catalog) throw UsageError("--input and --catalog are exclusive");
    if (cfg.input) return curve_from_json(read_json_file(*cfg.input));
    if (!cfg.catalog) throw UsageError("one of --input or --catalog is required");
    CatalogRef ref{*cfg.catalog, 0.0, cfg.m};
    if (ref.name == "sigma") {
        if (!cfg.c) throw UsageError("--catalog sigma needs --c");
        ref.c = *cfg.c;
    } else if (ref.name != "gamma1") {
        throw UsageError("unknown catalog curve '" + ref.name + "' (sigma, gamma1)");
    }
    return catalog_curve(ref);
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed) {
        if (cfg.format == f) return;
    }
    throw UsageError("format '" + cfg.format + "' is not available for " + cfg.command);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string cmd_frame(const RunConfig& cfg) {
    require_format(cfg, {"json", "csv"});
    const CurveSpec curve = load_curve(cfg);
    const FrameCurve fc = frame_curve(curve, cfg.samples);
    if (cfg.format == "csv") {
        std::ostringstream os;
        write_frame_csv(os, fc);
        return os.str();
    }
    const LocalConvexity lc = local_convexity_check(curve, cfg.samples, cfg.tol.value_or(1e-10));
    json j{{"space", std::string(to_string(curve.space()))},
           {"label", curve.label()},
           {"locally_convex", lc.locally_convex},
           {"min_det", lc.min_det},
           {"min_normalized_det", lc.min_normalized_det}};
    j["frames"] = to_json(fc);
    return dump(j);
}

std::string cmd_decompose(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    const CurveSpec curve = load_curve(cfg);
    const Decomposition d = decompose_full(curve, cfg.samples);
    json j = pair_to_json(d.pair);
    json parts;
    for (const auto& [name, part] : {std::pair{"left", &d.pair.left}, std::pair{"right", &d.pair.right}}) {
        const auto circle = identify_circle(*part);
        parts[name] = circle ? json{{"name", "sigma"}, {"c", circle->c}, {"m", circle->m}} : json(nullptr);
    }
    j["circles"] = std::move(parts);
    j["condition_L"] = to_json(condition_L_report(d.pair, cfg.samples));
    j["endpoint"] = to_json(d.lift.back());
    return dump(j);
}

std::string cmd_compose(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    PairCurve pair = [&] {
        if (cfg.input && cfg.catalog) throw UsageError("--input and --catalog are exclusive");
        if (cfg.input) return pair_from_json(read_json_file(*cfg.input));
        if (cfg.catalog == "gamma1") {
            return PairCurve{sigma(std::numbers::pi, cfg.m), sigma(2.0 * std::numbers::pi, cfg.m / 2.0),
                             uniform_grid(cfg.samples)};
        }
        throw UsageError("compose needs --input <pair.json> or --catalog gamma1");
    }();
    const ConditionLReport rep = condition_L_report(pair, cfg.samples);
    const CurveSpec curve = compose(pair, cfg.samples);
    json j{{"curve", curve_to_json(curve)},
           {"condition_L", to_json(rep)},
           {"endpoint", to_json(lifted_endpoint(curve, cfg.samples))}};
    return dump(j);
}

std::string cmd_convexity(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    const CurveSpec curve = load_curve(cfg);
    ConvexityOptions opt;
    opt.samples = cfg.samples;
    opt.budget = cfg.budget;
    opt.seed = cfg.seed;
    if (cfg.tol) opt.root_tol = *cfg.tol;
    return dump(to_json(analyze_convexity(curve, opt)));
}

std::string cmd_rotation(const RunConfig& cfg) {
    require_format(cfg, {"json", "svg"});
    const CurveSpec curve = load_curve(cfg);
    CurveSpec planar_source = curve;
    json report;
    std::optional<Eigen::Vector3d> h;
    if (curve.dim() == 4) {
        const NecessaryConditionReport rep = thm3_necessary_condition(curve, cfg.samples);
        report = to_json(rep);
        planar_source = decompose(curve, cfg.samples).left;
        h = rep.left.distinguished;
    } else {
        const RotationReport rep = analyze_rotation(curve, cfg.samples);
        report = to_json(rep);
        h = rep.distinguished;
    }
    if (cfg.format == "json") return dump(report);
    if (!h) throw EmptyFeasibleError("no hemisphere to project from");
    std::ostringstream os;
    write_svg(os, stereographic_project(planar_source, *h, cfg.samples));
    return os.str();
}

int emit(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
    if (!cfg.out) {
        out << text;
        return kOk;
    }
    std::ofstream file(*cfg.out);
    if (!file) {
        err << "UsageError: cannot write '" << *cfg.out << "'\n";
        return kUsage;
    }
    file << text;
    return kOk;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.samples < 16) throw UsageError("--samples must be at least 16");
        if (cfg.tol && !(*cfg.tol > 0.0)) throw UsageError("--tol must be positive");
        if (cfg.budget < 1) throw UsageError("--budget must be positive");
        std::string text;
        if (cfg.command == "frame") {
            text = cmd_frame(cfg);
        } else if (cfg.command == "decompose") {
            text = cmd_decompose(cfg);
        } else if (cfg.command == "compose") {
            text = cmd_compose(cfg);
        } else if (cfg.command == "convexity") {
            text = cmd_convexity(cfg);
        } else if (cfg.command == "rotation") {
            text = cmd_rotation(cfg);
        } else {
            throw UsageError("unknown command '" + cfg.command + "'");
        }
        return emit(cfg, text, out, err);
    } catch (const UsageError& e) {
        err << "UsageError: " << e.what() << '\n';
        return kUsage;
    } catch (const SchemaError& e) {
        err << e.what() << '\n';
        return kSchema;
    } catch (const ConditionLError& e) {
        err << e.what() << '\n';
        return kCondition;
    } catch (const ConvexityError& e) {
        err << e.what() << '\n';
        return kCondition;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kGeometry;
    } catch (const std::exception& e) {
        err << "InternalError: " << e.what() << '\n';
        return kGeometry;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Locally convex curves on S^2 and S^3: frames, spin decomposition, convexity, rotation numbers"};
    app.require_subcommand(1);
    RunConfig cfg;

    const std::pair<const char*, const char*> commands[] = {
        {"frame", "Frenet frames, curvature, torsion and determinant per sample"},
        {"decompose", "Split an S^3 curve into its left and right S^2 parts"},
        {"compose", "Build the S^3 curve of a pair satisfying condition (L)"},
        {"convexity", "Certify convexity or find a hyperplane witness"},
        {"rotation", "Hemisphere classification and rotation number (S^3: necessary condition for (1,-1))"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--input", cfg.input, "Curve (or pair) JSON file");
        sub->add_option("--catalog", cfg.catalog, "Catalog curve: sigma | gamma1");
        sub->add_option("--c", cfg.c, "Circle length for sigma, 0 < c <= 2 pi");
        sub->add_option("--m", cfg.m, "Iteration count")->capture_default_str();
        sub->add_option("--samples", cfg.samples, "Grid size (>= 16)")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "Tolerance override");
        sub->add_option("--format", cfg.format, "json | csv | svg")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Seed for randomized checks")->capture_default_str();
        sub->add_option("--budget", cfg.budget, "Witness search budget in tuples")->capture_default_str();
        sub->add_option("--out", cfg.out, "Output file (default stdout)");
        sub->callback([&cfg, n = std::string(name)] { cfg.command = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help requests exit 0 and print the relevant subcommand's help.
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }
    return run(cfg, out, err);
}

} // namespace spherocurve::cli
