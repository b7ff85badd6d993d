#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <random>

#include "valf/io.hpp"
#include "valf/verify.hpp"

using namespace valf;
using io::json;

namespace {

auto fake_env(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const char* name) -> const char* {
    auto it = vars.find(name);
    return it == vars.end() ? nullptr : it->second.c_str();
  };
}

auto no_env() { return fake_env({}); }

}  // namespace

TEST_CASE("config precedence: flags over env over file over defaults") {
  const VerifyConfig d = resolve_config({}, json(), no_env());
  CHECK(d.band_limit == 16);
  CHECK(d.grid == 512);
  CHECK(d.seed == 1u);
  CHECK(d.tol_exact == 1e-12);
  CHECK(d.tol_quad == 1e-8);
  CHECK(d.suite == "all");

  const json file = {{"band_limit", 8}, {"seed", 5}, {"grid", 64}, {"suite", "fourier2d"}};
  const auto f = resolve_config({}, file, no_env());
  CHECK(f.band_limit == 8);
  CHECK(f.seed == 5u);
  CHECK(f.grid == 64);
  CHECK(f.suite == "fourier2d");

  const auto env = fake_env({{"VALF_SEED", "9"}, {"VALF_TOL_QUAD", "1e-6"}, {"VALF_GRID", "128"}});
  const auto e = resolve_config({}, file, env);
  CHECK(e.seed == 9u);
  CHECK(e.tol_quad == 1e-6);
  CHECK(e.grid == 128);
  CHECK(e.band_limit == 8);

  ConfigOverrides flags;
  flags.seed = 11;
  flags.band_limit = 4;
  const auto all = resolve_config(flags, file, env);
  CHECK(all.seed == 11u);
  CHECK(all.band_limit == 4);
  CHECK(all.grid == 128);
  CHECK(all.suite == "fourier2d");
}

TEST_CASE("malformed configuration is rejected") {
  CHECK_THROWS_AS(resolve_config({}, json{{"bandlimit", 3}}, no_env()), std::invalid_argument);
  CHECK_THROWS_AS(resolve_config({}, json{{"seed", "x"}}, no_env()), std::invalid_argument);
  CHECK_THROWS_AS(resolve_config({}, json::array(), no_env()), std::invalid_argument);
  CHECK_THROWS_AS(resolve_config({}, json(), fake_env({{"VALF_SEED", "12abc"}})), std::invalid_argument);
  CHECK_THROWS_AS(resolve_config({}, json{{"band_limit", 0}}, no_env()), std::invalid_argument);
  CHECK_THROWS_AS(verify("nonsense", VerifyConfig{}), std::invalid_argument);
}

TEST_CASE("json round trips") {
  std::mt19937_64 rng(3);
  const auto phi = random_valuation(rng, 6);
  CHECK(io::valuation2_from_json(io::to_json(phi)).max_coeff_diff(phi) == 0.0);

  const auto poly = random_polytope(rng, 3);
  const auto back = io::polytope_from_json(io::to_json(poly));
  CHECK(back.vertices().size() == poly.vertices().size());
  CHECK(std::abs(back.volume() - poly.volume()) <= 1e-12 * poly.volume());

  const auto g = LinearMap::from_rows(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK((io::linear_map_from_json(io::to_json(g)).matrix() - g.matrix()).norm() == 0.0);

  const auto smooth = random_smooth_body(rng, 5);
  CHECK(area(io::planar_body_from_json(io::to_json(smooth))) == doctest::Approx(area(smooth)).epsilon(1e-14));
  const auto poly2 = random_polygon(rng);
  CHECK(area(io::planar_body_from_json(io::to_json(poly2))) == doctest::Approx(area(poly2)).epsilon(1e-14));

  const auto mv = MeasureValuation::of_body(poly, 2.5) + MeasureValuation::of_body(random_polytope(rng, 3), -1.0);
  const auto mv2 = io::measure_valuation_from_json(io::to_json(mv));
  const auto probe = random_polytope(rng, 3);
  CHECK(mv2(probe) == doctest::Approx(mv(probe)).epsilon(1e-12));

  const auto b = EvenValuation3::brightness(Body3::cube());
  const auto b2 = io::even_valuation3_from_json(io::to_json(b));
  const auto k = Body3::from_polytope(random_polytope(rng, 3));
  CHECK(b2(k) == doctest::Approx(b(k)).epsilon(1e-14));

  const auto kf = klain_function(EvenValuation3::intrinsic(1), 1);
  CHECK(io::klain_from_json(io::to_json(kf)).values == kf.values);
}

TEST_CASE("malformed inputs name the problem") {
  CHECK_THROWS_WITH_AS(io::valuation2_from_json(json{{"c0", 1}}), doctest::Contains("malformed JSON"),
                       std::invalid_argument);
  CHECK_THROWS_AS(io::trig_poly_from_json(json{{"N", 2}, {"a", {1, 2}}, {"b", {1, 2}}}), std::invalid_argument);
  CHECK_THROWS_AS(io::linear_map_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3}}}), std::invalid_argument);
  CHECK_THROWS_AS(io::klain_from_json(json{{"gr", 1}, {"grid", "ico4"}, {"values", {1, 2}}}), std::invalid_argument);
  CHECK_THROWS_AS(io::even_valuation3_from_json(json{{"type", "mystery"}}), std::invalid_argument);
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/valf.json"), std::runtime_error);
}

TEST_CASE("suite reports are reproducible for a fixed seed") {
  VerifyConfig cfg;
  cfg.band_limit = 8;
  const auto a = to_json(verify("fourier2d", cfg));
  const auto b = to_json(verify("fourier2d", cfg));
  CHECK(a["cases_digest"] == b["cases_digest"]);
  CHECK(a["cases"].size() == 6);
  cfg.seed = 2;
  const auto c = to_json(verify("algebra2d", cfg));
  for (const auto& x : c["cases"]) CHECK(x["pass"].get<bool>());
}
