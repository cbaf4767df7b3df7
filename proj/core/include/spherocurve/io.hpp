#pragma once

#include "spherocurve/convexity.hpp"
#include "spherocurve/decomp.hpp"
#include "spherocurve/frenet.hpp"
#include "spherocurve/sphere2.hpp"

#include <nlohmann/json.hpp>

#include <string_view>

namespace spherocurve {

using nlohmann::json;

/// Parses text; SchemaError on malformed JSON.
json parse_json(std::string_view text);

/// {"space", "kind": "catalog"|"samples", "catalog": {"name", "c", "m"},
///  "samples": [{"t", "x": [...], "d": [[...], [...], [...]]}]}; "d" is optional.
CurveSpec curve_from_json(const json& j);
/// Catalog curves keep their reference; others are written as n + 1 samples with derivatives.
json curve_to_json(const CurveSpec& curve, int samples = kVerificationGrid);

/// {"left": curve, "right": curve, "grid": {"samples": n} | {"ts": [...]}}.
PairCurve pair_from_json(const json& j);
json pair_to_json(const PairCurve& pair);

/// Circle parameters (c, m) of a curve with constant speed and geodesic curvature.
std::optional<CatalogRef> identify_circle(const CurveSpec& curve, int grid = 64);

json to_json(const SpinPair& p);
json to_json(const Quaternion& q);
json to_json(const ConditionLReport& r);
json to_json(const MonitorReport& r);
json to_json(const ConvexityReport& r);
json to_json(const HemisphereReport& r);
json to_json(const RotationReport& r);
json to_json(const NecessaryConditionReport& r);
/// Per-sample frame entries, kappa, tau (S^3) and det.
json to_json(const FrameCurve& fc);

} // namespace spherocurve
