#include "spherocurve/io.hpp"

#include "spherocurve/catalog.hpp"
#include "spherocurve/errors.hpp"

#include <cmath>
#include <numbers>

namespace spherocurve {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw SchemaError("expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(std::string(what) + " must be finite");
    return v;
}

Vec vector(const json& j, int dim, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw SchemaError(std::string(what) + " must be an array of " + std::to_string(dim) + " numbers");
    }
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = number(j[i], what);
    return v;
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json matrix_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
    return rows;
}

json optional_t(const std::optional<double>& t) { return t ? json(*t) : json(nullptr); }

} // namespace

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
}

CurveSpec curve_from_json(const json& j) {
    const json& space_j = field(j, "space");
    if (!space_j.is_string()) throw SchemaError("'space' must be a string");
    const Space space = space_from_string(space_j.get<std::string>());
    const json& kind_j = field(j, "kind");
    if (!kind_j.is_string()) throw SchemaError("'kind' must be a string");
    const std::string kind = kind_j.get<std::string>();

    if (kind == "catalog") {
        const json& cat = field(j, "catalog");
        CatalogRef ref;
        const json& name = field(cat, "name");
        if (!name.is_string()) throw SchemaError("catalog 'name' must be a string");
        ref.name = name.get<std::string>();
        if (cat.contains("c")) ref.c = number(cat["c"], "catalog 'c'");
        if (cat.contains("m")) ref.m = number(cat["m"], "catalog 'm'");
        CurveSpec curve = catalog_curve(ref);
        if (curve.space() != space) throw SchemaError("catalog curve does not live in " + space_j.get<std::string>());
        return curve;
    }
    if (kind != "samples") throw SchemaError("unknown kind '" + kind + "'");

    const json& samples = field(j, "samples");
    if (!samples.is_array()) throw SchemaError("'samples' must be an array");
    const int dim = ambient_dim(space);
    SampledCurve sc;
    bool with_derivs = !samples.empty() && samples.front().is_object() && samples.front().contains("d");
    for (const json& s : samples) {
        sc.ts.push_back(number(field(s, "t"), "sample 't'"));
        sc.points.push_back(vector(field(s, "x"), dim, "sample 'x'"));
        if (s.contains("d") != with_derivs) throw SchemaError("either every sample has 'd' or none");
        if (with_derivs) {
            const json& d = s["d"];
            if (!d.is_array() || d.size() != 3) throw SchemaError("'d' must hold three derivative vectors");
            sc.derivs.push_back({vector(d[0], dim, "derivative"), vector(d[1], dim, "derivative"),
                                 vector(d[2], dim, "derivative")});
        }
    }
    try {
        return CurveSpec::from_samples(space, std::move(sc), "samples");
    } catch (const PreconditionError& e) {
        throw SchemaError(std::string(e.what()).substr(std::string("PreconditionError: ").size()));
    }
}

json curve_to_json(const CurveSpec& curve, int samples) {
    json j;
    j["space"] = std::string(to_string(curve.space()));
    if (const auto& ref = curve.catalog()) {
        j["kind"] = "catalog";
        j["catalog"] = {{"name", ref->name}, {"c", ref->c}, {"m", ref->m}};
        return j;
    }
    j["kind"] = "samples";
    json arr = json::array();
    if (const SampledCurve* s = curve.samples()) {
        for (std::size_t i = 0; i < s->size(); ++i) {
            const Jet jet = curve.jet(s->ts[i]);
            arr.push_back({{"t", s->ts[i]},
                           {"x", vec_json(s->points[i])},
                           {"d", {vec_json(jet[1]), vec_json(jet[2]), vec_json(jet[3])}}});
        }
    } else {
        const SampledCurve grid = sample(curve, samples);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            arr.push_back({{"t", grid.ts[i]},
                           {"x", vec_json(grid.points[i])},
                           {"d", {vec_json(grid.derivs[i][0]), vec_json(grid.derivs[i][1]),
                                  vec_json(grid.derivs[i][2])}}});
        }
    }
    j["samples"] = std::move(arr);
    return j;
}

PairCurve pair_from_json(const json& j) {
    PairCurve pair{curve_from_json(field(j, "left")), curve_from_json(field(j, "right")), {}};
    if (pair.left.dim() != 3 || pair.right.dim() != 3) throw SchemaError("pair parts must be S2 curves");
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (g.contains("ts")) {
            if (!g["ts"].is_array()) throw SchemaError("grid 'ts' must be an array");
            for (const json& t : g["ts"]) pair.ts.push_back(number(t, "grid 't'"));
        } else {
            const double n = number(field(g, "samples"), "grid 'samples'");
            if (n < 4 || n != std::floor(n)) throw SchemaError("grid 'samples' must be an integer >= 4");
            pair.ts = uniform_grid(static_cast<int>(n));
        }
    }
    if (pair.ts.empty()) pair.ts = uniform_grid(kVerificationGrid);
    return pair;
}

json pair_to_json(const PairCurve& pair) {
    const int n = static_cast<int>(pair.ts.size()) - 1;
    json j{{"left", curve_to_json(pair.left, n)}, {"right", curve_to_json(pair.right, n)}};
    const auto uniform = uniform_grid(n);
    bool is_uniform = true;
    for (std::size_t i = 0; i < uniform.size(); ++i) is_uniform = is_uniform && std::abs(uniform[i] - pair.ts[i]) < 1e-15;
    if (is_uniform) {
        j["grid"] = {{"samples", n}};
    } else {
        j["grid"] = {{"ts", pair.ts}};
    }
    return j;
}

std::optional<CatalogRef> identify_circle(const CurveSpec& curve, int grid) {
    if (curve.dim() != 3) return std::nullopt;
    double vmin = INFINITY, vmax = 0.0, kmin = INFINITY, kmax = -INFINITY;
    for (double t : uniform_grid(grid)) {
        const Jet j = curve.jet(t);
        const double v = j[1].norm();
        const double k = j.columns(2).determinant() / (v * v * v);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    if (vmax - vmin > 1e-6 * vmax || kmax - kmin > 1e-6 * std::max(1.0, std::abs(kmax)) || kmin < -1e-9) {
        return std::nullopt;
    }
    const double kappa = std::max(0.0, 0.5 * (kmin + kmax));
    const double c = 2.0 * std::numbers::pi / std::sqrt(1.0 + kappa * kappa);
    return CatalogRef{"sigma", c, 0.5 * (vmin + vmax) / c};
}

json to_json(const Quaternion& q) { return json::array({q.a, q.b, q.c, q.d}); }

json to_json(const SpinPair& p) {
    return {{"left", to_json(p.left.quaternion())}, {"right", to_json(p.right.quaternion())}};
}

json to_json(const ConditionLReport& r) {
    return {{"speed_mismatch", r.speed_mismatch},
            {"margin", r.margin},
            {"margin_t", r.margin_t},
            {"pass", r.pass}};
}

json to_json(const MonitorReport& r) {
    const auto in_cell = std::count(r.in_top_cell.begin(), r.in_top_cell.end(), true);
    const auto pattern = std::count(r.pattern_ok.begin(), r.pattern_ok.end(), true);
    return {{"samples", r.ts.size()},
            {"in_top_cell", in_cell},
            {"sign_pattern_ok", pattern},
            {"all_in_top_cell", r.all_in_top_cell},
            {"pattern_holds", r.sign_pattern_ok},
            {"h_increasing", r.h_increasing},
            {"passes", r.passes()},
            {"first_failure_t", optional_t(r.first_failure_t)}};
}

json to_json(const ConvexityReport& r) {
    json j{{"verdict", std::string(to_string(r.verdict))}, {"monitor", to_json(r.monitor)}};
    if (r.certificate) {
        const MomentCertificate& c = *r.certificate;
        j["certificate"] = {{"certified", c.certified},
                            {"chart_axis", c.chart_axis + 1},
                            {"chart_sign", c.chart_sign},
                            {"parameter_axis", c.parameter_axis + 1},
                            {"fit_residual", c.fit_residual},
                            {"coefficient_det", c.coefficient_det},
                            {"min_derivative_det", c.min_derivative_det},
                            {"max_random_hits", c.max_random_hits},
                            {"reason", c.reason}};
    } else {
        j["certificate"] = {{"certified", false}, {"reason", r.certificate_error}};
    }
    if (r.witness) {
        j["search"] = {{"tuples_tried", r.witness->tuples_tried}};
        if (r.witness->witness) {
            j["witness"] = vec_json(r.witness->witness->normal());
            json hits = json::array();
            for (const auto& h : r.witness->report.hits) {
                hits.push_back({{"t", h.t}, {"multiplicity", h.multiplicity}, {"crossing", h.crossing}});
            }
            j["hits"] = std::move(hits);
        }
    }
    return j;
}

json to_json(const HemisphereReport& r) {
    return {{"classification", std::string(to_string(r.classification))},
            {"witness", vec_json(r.witness)},
            {"margin", r.margin}};
}

json to_json(const RotationReport& r) {
    json j{{"hemisphere", to_json(r.hemisphere)}};
    j["distinguished"] = r.distinguished ? vec_json(*r.distinguished) : json(nullptr);
    j["rotation"] = r.rotation ? json(*r.rotation) : json("undefined");
    return j;
}

json to_json(const NecessaryConditionReport& r) {
    return {{"verdict", r.pass ? "pass" : "fail"}, {"endpoint", to_json(r.endpoint)}, {"left", to_json(r.left)}};
}

json to_json(const FrameCurve& fc) {
    json rows = json::array();
    for (std::size_t i = 0; i < fc.size(); ++i) {
        json row{{"t", fc.ts[i]}, {"frame", matrix_json(fc.frames[i])}, {"kappa", fc.kappa(i)}, {"det", fc.det(i)}};
        if (fc.dim() == 4) row["tau"] = fc.tau(i);
        rows.push_back(std::move(row));
    }
    return {{"dim", fc.dim()}, {"samples", std::move(rows)}};
}

} // namespace spherocurve
