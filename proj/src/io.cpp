#include "valf/io.hpp"

#include <fstream>
#include <stdexcept>

namespace valf::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw std::invalid_argument("malformed JSON: " + what); }

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string(what) + " needs \"" + key + "\"");
  return j.at(key);
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) malformed(std::string(what) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<VecX> point_list(const json& j, int dim, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array of points");
  std::vector<VecX> out;
  for (const auto& p : j) {
    const auto c = numbers(p, what);
    if (static_cast<int>(c.size()) != dim) malformed(std::string(what) + ": point of wrong dimension");
    out.push_back(Eigen::Map<const VecX>(c.data(), dim));
  }
  return out;
}

json point_json(const VecX& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Body3 body_field(const json& j) { return body3_from_json(field(j, "body", "valuation")); }

}  // namespace

json to_json(const TrigPoly& f) { return {{"N", f.band_limit()}, {"a", f.a_coeffs()}, {"b", f.b_coeffs()}}; }

TrigPoly trig_poly_from_json(const json& j) {
  const int n = field(j, "N", "trig polynomial").get<int>();
  auto a = numbers(field(j, "a", "trig polynomial"), "a");
  auto b = numbers(field(j, "b", "trig polynomial"), "b");
  if (n < 0 || static_cast<int>(a.size()) != n + 1 || static_cast<int>(b.size()) != n)
    malformed("trig polynomial with N = " + std::to_string(n) + " needs N+1 values in a and N in b");
  return TrigPoly(std::move(a), std::move(b));
}

json to_json(const Valuation2& phi) { return {{"c0", phi.c0()}, {"f", to_json(phi.f())}, {"c2", phi.c2()}}; }

Valuation2 valuation2_from_json(const json& j) {
  return Valuation2(field(j, "c0", "valuation").get<double>(), trig_poly_from_json(field(j, "f", "valuation")),
                    field(j, "c2", "valuation").get<double>());
}

json to_json(const PlanarBody& body) {
  if (body.is_support()) {
    json j = to_json(body.support_fn());
    j["type"] = "support";
    return j;
  }
  json verts = json::array();
  for (const auto& v : body.vertices()) verts.push_back({v.x, v.y});
  return {{"type", "polygon"}, {"vertices", verts}};
}

PlanarBody planar_body_from_json(const json& j) {
  const auto type = field(j, "type", "body").get<std::string>();
  if (type == "support") return PlanarBody::support(trig_poly_from_json(j));
  if (type == "polygon") {
    std::vector<Vec2> pts;
    for (const auto& p : point_list(field(j, "vertices", "polygon"), 2, "vertices")) pts.push_back({p(0), p(1)});
    return PlanarBody::hull(std::move(pts));
  }
  malformed("unknown body type \"" + type + "\"");
}

json to_json(const LinearMap& f) {
  std::vector<double> data;
  for (int i = 0; i < f.rows(); ++i)
    for (int k = 0; k < f.cols(); ++k) data.push_back(f.matrix()(i, k));
  return {{"rows", f.rows()}, {"cols", f.cols()}, {"data", data}};
}

LinearMap linear_map_from_json(const json& j) {
  const int rows = field(j, "rows", "map").get<int>();
  const int cols = field(j, "cols", "map").get<int>();
  const auto data = numbers(field(j, "data", "map"), "data");
  if (rows <= 0 || cols <= 0 || static_cast<int>(data.size()) != rows * cols)
    malformed("map data must hold rows·cols entries");
  return LinearMap::from_rows(rows, cols, data);
}

json to_json(const Polytope& p) {
  json pts = json::array();
  for (const auto& v : p.vertices()) pts.push_back(point_json(v));
  return {{"dim", p.dim()}, {"points", pts}};
}

Polytope polytope_from_json(const json& j) {
  const int dim = field(j, "dim", "polytope").get<int>();
  if (dim < 1 || dim > 3) malformed("polytope dimension must be 1..3");
  return Polytope(dim, point_list(field(j, "points", "polytope"), dim, "points"));
}

json to_json(const MeasureValuation& phi) {
  json terms = json::array();
  for (const auto& t : phi.terms()) {
    json body = std::visit([](const auto& b) { return to_json(b); }, t.body);
    terms.push_back({{"c", t.c}, {"body", body}});
  }
  return {{"dim", phi.dim()}, {"terms", terms}};
}

MeasureValuation measure_valuation_from_json(const json& j) {
  const int dim = field(j, "dim", "measure valuation").get<int>();
  std::vector<MeasureTerm> terms;
  for (const auto& t : field(j, "terms", "measure valuation")) {
    const double c = field(t, "c", "term").get<double>();
    const json& body = field(t, "body", "term");
    if (body.contains("type"))
      terms.push_back({c, planar_body_from_json(body)});
    else
      terms.push_back({c, polytope_from_json(body)});
  }
  return MeasureValuation(dim, std::move(terms));
}

json to_json(const Body3& k) {
  json pts = json::array();
  for (const auto& v : k.poly.vertices()) pts.push_back(point_json(v));
  return {{"points", pts}, {"radius", k.radius}};
}

Body3 body3_from_json(const json& j) {
  Body3 k{Polytope(3, point_list(field(j, "points", "body"), 3, "points")), j.value("radius", 0.0)};
  if (k.poly.empty()) malformed("body needs at least one point");
  if (k.radius < 0) malformed("body radius must be nonnegative");
  return k;
}

EvenValuation3 even_valuation3_from_json(const json& j) {
  const auto type = field(j, "type", "valuation").get<std::string>();
  if (type == "intrinsic") {
    const auto alpha = numbers(field(j, "alpha", "intrinsic combination"), "alpha");
    if (alpha.size() != 4) malformed("alpha must hold the four coefficients of V0..V3");
    return EvenValuation3::combo({alpha[0], alpha[1], alpha[2], alpha[3]});
  }
  if (type == "brightness") return EvenValuation3::brightness(body_field(j));
  if (type == "mixed_quadratic") return EvenValuation3::mixed_quadratic(body_field(j));
  malformed("unknown valuation type \"" + type + "\"");
}

json to_json(const EvenValuation3& phi) {
  if (const auto* c = std::get_if<IntrinsicCombo>(&phi.rep())) return {{"type", "intrinsic"}, {"alpha", c->alpha}};
  if (const auto* b = std::get_if<Brightness>(&phi.rep())) return {{"type", "brightness"}, {"body", to_json(b->a)}};
  throw std::invalid_argument("to_json: black-box valuations have no serialized form");
}

json to_json(const KlainFunction& k) { return {{"gr", k.gr}, {"grid", "ico4"}, {"values", k.values}}; }

KlainFunction klain_from_json(const json& j) {
  KlainFunction k;
  k.gr = field(j, "gr", "Klain function").get<int>();
  if (k.gr != 1 && k.gr != 2) malformed("gr must be 1 or 2");
  if (field(j, "grid", "Klain function").get<std::string>() != "ico4") malformed("only the ico4 grid is supported");
  k.values = numbers(field(j, "values", "Klain function"), "values");
  if (k.values.size() != SphereGrid::ico4().size()) malformed("ico4 Klain functions have 2562 values");
  return k;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace valf::io
