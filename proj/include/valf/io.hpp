#pragma once

#include <json.hpp>
#include <string>

#include "valf/even3d.hpp"
#include "valf/functorial.hpp"
#include "valf/valuation2.hpp"

namespace valf::io {

using nlohmann::json;

/// {"N": n, "a": [a₀..a_N], "b": [b₁..b_N]}
json to_json(const TrigPoly& f);
TrigPoly trig_poly_from_json(const json& j);

/// {"c0": x, "f": {...}, "c2": y}
json to_json(const Valuation2& phi);
Valuation2 valuation2_from_json(const json& j);

/// {"type": "support", "N", "a", "b"} or {"type": "polygon", "vertices": [[x, y], ...]}
json to_json(const PlanarBody& body);
PlanarBody planar_body_from_json(const json& j);

/// {"rows": m, "cols": n, "data": [row-major entries]}
json to_json(const LinearMap& f);
LinearMap linear_map_from_json(const json& j);

/// {"dim": d, "points": [[...], ...]}
json to_json(const Polytope& p);
Polytope polytope_from_json(const json& j);

/// {"dim": d, "terms": [{"c": c, "body": polytope or planar body}, ...]}
json to_json(const MeasureValuation& phi);
MeasureValuation measure_valuation_from_json(const json& j);

/// {"points": [[x, y, z], ...], "radius": r}
json to_json(const Body3& k);
Body3 body3_from_json(const json& j);

/// {"type": "intrinsic", "alpha": [α₀..α₃]}, {"type": "brightness", "body": ...}
/// or {"type": "mixed_quadratic", "body": ...}. Black boxes other than these
/// have no serialized form.
EvenValuation3 even_valuation3_from_json(const json& j);
json to_json(const EvenValuation3& phi);

/// {"gr": 1|2, "grid": "ico4", "values": [...]}
json to_json(const KlainFunction& k);
KlainFunction klain_from_json(const json& j);

/// Throws std::runtime_error naming the path on failure.
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace valf::io
