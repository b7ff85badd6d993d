// valf: verification suites and operators on serialized valuations.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "valf/io.hpp"
#include "valf/verify.hpp"

using namespace valf;
using io::json;

namespace {

struct CommonOptions {
  ConfigOverrides flags;
  std::string config_file;
};

void add_config_options(CLI::App* app, CommonOptions& o) {
  app->add_option("--band-limit", o.flags.band_limit, "Band limit of random planar valuations and bodies");
  app->add_option("--grid", o.flags.grid, "Circle samples for tabulated densities");
  app->add_option("--seed", o.flags.seed, "Seed of all random instances");
  app->add_option("--tol-exact", o.flags.tol_exact, "Tolerance of coefficient-exact identities");
  app->add_option("--tol-quad", o.flags.tol_quad, "Tolerance of fiber-quadrature branches");
  app->add_option("--out", o.flags.out, "Output file (default: stdout)");
  app->add_option("--config", o.config_file, "JSON config file")->envname("VALF_CONFIG");
}

VerifyConfig resolve(const CommonOptions& o) {
  const json file = o.config_file.empty() ? json() : io::read_json_file(o.config_file);
  return resolve_config(o.flags, file, [](const char* name) { return std::getenv(name); });
}

/// Writes `j` to `out`, or to stdout when `out` is empty. Returns the stream
/// for human-readable notes: stdout when the JSON went to a file.
std::ostream& emit_json(const std::string& out, const json& j) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return std::cerr;
  }
  io::write_json_file(out, j);
  return std::cout;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void print_table(std::ostream& os, const SuiteReport& r) {
  for (const auto& c : r.cases)
    os << (c.pass ? "PASS " : "FAIL ") << c.id << "  residual " << fmt(c.residual) << " <= " << fmt(c.tolerance) << "  ("
       << c.instances << " instances, " << fmt(c.seconds) << " s)\n";
  os << r.suite << ": " << (r.passed() ? "all cases pass" : "FAILED") << " in " << fmt(r.wall_seconds) << " s\n";
}

// ---------------------------------------------------------------------------

void summarize(std::ostream& os, const Valuation2& phi) {
  double even = 0.0, odd = 0.0;
  for (int k = 0; k <= phi.f().band_limit(); ++k) {
    const double m = std::hypot(phi.f().a(k), phi.f().b(k));
    (k % 2 ? odd : even) = std::max(k % 2 ? odd : even, m);
  }
  os << "degree 0: " << phi.c0() << " chi\n"
     << "degree 1: density with band limit " << phi.f().band_limit() << ", max even harmonic " << even
     << ", max odd harmonic " << odd << "\n"
     << "degree 2: " << phi.c2() << " vol\n";
}

void summarize(std::ostream& os, const MeasureValuation& phi) {
  double total = 0.0;
  for (const auto& t : phi.terms()) total += t.c;
  os << "measure valuation on R^" << phi.dim() << " with " << phi.terms().size()
     << " terms; degree " << phi.dim() << " part " << total << " vol, lower degrees from the term bodies\n";
}

MeasureValuation pullback_measure(const LinearMap& g, const MeasureValuation& phi) {
  if (g.cols() != phi.dim() || g.rows() != phi.dim())
    throw std::invalid_argument("pullback: map R^" + std::to_string(g.cols()) + " -> R^" + std::to_string(g.rows()) +
                                " cannot pull back a valuation on R^" + std::to_string(phi.dim()));
  if (g.rank() != phi.dim())
    throw std::invalid_argument(
        "pullback: only invertible maps keep vol(.+A) terms of top degree " + std::to_string(phi.dim()) +
        "; a singular map drops the degree and has no closed form here");
  // c·vol(gK + A) = c·|det g|·vol(K + g⁻¹A)
  const MatX inv = g.matrix().inverse();
  const double det = std::abs(g.matrix().determinant());
  std::vector<MeasureTerm> terms;
  for (const auto& t : phi.terms()) {
    if (const auto* p = std::get_if<Polytope>(&t.body))
      terms.push_back({t.c * det, linear_image(*p, inv)});
    else
      terms.push_back({t.c * det, transform_body(std::get<PlanarBody>(t.body), {inv(0, 0), inv(0, 1), inv(1, 0), inv(1, 1)})});
  }
  return MeasureValuation(phi.dim(), std::move(terms));
}

int run_apply(const std::string& op, const std::vector<std::string>& inputs, const std::string& map_file,
              const VerifyConfig& cfg) {
  auto need = [&](std::size_t n) {
    if (inputs.size() != n)
      throw std::invalid_argument("apply " + op + ": expected " + std::to_string(n) + " input file(s)");
  };
  auto val2 = [&](std::size_t i) { return io::valuation2_from_json(io::read_json_file(inputs[i])); };

  if (op == "product" || op == "convolve") {
    need(2);
    const auto r = op == "product" ? product(val2(0), val2(1)) : convolve(val2(0), val2(1));
    summarize(emit_json(cfg.out, io::to_json(r)), r);
    return 0;
  }
  if (op == "fourier" || op == "euler" || op == "lambda") {
    need(1);
    const auto x = val2(0);
    const auto r = op == "fourier" ? fourier(x) : op == "euler" ? euler(x) : lambda_op(x);
    summarize(emit_json(cfg.out, io::to_json(r)), r);
    return 0;
  }
  if (op == "pushforward" || op == "pullback") {
    need(1);
    if (map_file.empty()) throw std::invalid_argument("apply " + op + ": --map is required");
    const auto f = io::linear_map_from_json(io::read_json_file(map_file));
    const auto phi = io::measure_valuation_from_json(io::read_json_file(inputs[0]));
    MeasureValuation r(1);
    if (op == "pushforward") {
      if (f.cols() != phi.dim())
        throw std::invalid_argument("pushforward: map R^" + std::to_string(f.cols()) + " -> R^" + std::to_string(f.rows()) +
                                    " cannot push forward a valuation on R^" + std::to_string(phi.dim()));
      if (!f.is_surjective())
        throw std::invalid_argument("pushforward: only surjective maps have a closed form on vol(.+A) terms; this map has rank " +
                                    std::to_string(f.rank()) + " < " + std::to_string(f.rows()));
      r = pushforward_symbolic(f, phi);
    } else {
      r = pullback_measure(f, phi);
    }
    summarize(emit_json(cfg.out, io::to_json(r)), r);
    return 0;
  }
  throw std::invalid_argument("apply: unknown operation \"" + op + "\"");
}

int run_klain(const std::string& input, int gr, const VerifyConfig& cfg) {
  const auto phi = io::even_valuation3_from_json(io::read_json_file(input));
  const auto k = klain_function(phi, gr);
  double lo = *std::min_element(k.values.begin(), k.values.end());
  double hi = *std::max_element(k.values.begin(), k.values.end());
  emit_json(cfg.out, io::to_json(k)) << "Klain function on Gr" << gr << ": " << k.values.size() << " samples in [" << lo
                                       << ", " << hi << "]\n";
  return 0;
}

int run_plotdata(const std::string& input, const VerifyConfig& cfg) {
  const json j = io::read_json_file(input);
  std::ostringstream csv;
  csv.precision(12);
  if (j.contains("c0")) {
    const auto phi = io::valuation2_from_json(j);
    csv << "theta,density\n";
    for (int i = 0; i < cfg.grid; ++i) {
      const double t = kTwoPi * i / cfg.grid;
      csv << t << ',' << phi.f()(t) << '\n';
    }
  } else {
    KlainFunction k;
    if (j.contains("gr")) {
      k = io::klain_from_json(j);
    } else {
      const auto phi = io::even_valuation3_from_json(j);
      k = klain_function(phi, phi.degree());
    }
    csv << "x,y,z,value\n";
    const auto& grid = SphereGrid::ico4();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& v = grid.vertices()[i];
      csv << v.x() << ',' << v.y() << ',' << v.z() << ',' << k.values[i] << '\n';
    }
  }
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(cfg.out);
    if (!out) throw std::runtime_error("cannot write " + cfg.out);
    out << csv.str();
  }
  return 0;
}

json info(const VerifyConfig& cfg) {
  return {{"name", "valf"},
          {"suites", suite_names()},
          {"apply_ops", {"product", "convolve", "fourier", "euler", "lambda", "pushforward", "pullback"}},
          {"sphere_grid", {{"name", "ico4"}, {"vertices", SphereGrid::ico4().size()}}},
          {"config", to_json(cfg)},
          {"threads", std::thread::hardware_concurrency()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Valuations on convex bodies: verification suites and operators"};
  app.require_subcommand(1);

  CommonOptions verify_opts, apply_opts, klain_opts, plot_opts, info_opts;

  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite and report residuals");
  add_config_options(verify_cmd, verify_opts);
  verify_cmd->add_option("--suite", verify_opts.flags.suite, "algebra2d, fourier2d, functorial, basechange, even3d, lefschetz or all");
  bool quiet = false;
  verify_cmd->add_flag("--quiet", quiet, "Suppress the residual table");

  auto* apply_cmd = app.add_subcommand("apply", "Apply an operator to serialized valuations");
  add_config_options(apply_cmd, apply_opts);
  std::string op, map_file;
  std::vector<std::string> inputs;
  apply_cmd->add_option("op", op, "product, convolve, fourier, euler, lambda, pushforward or pullback")->required();
  apply_cmd->add_option("inputs", inputs, "Input valuation files")->required();
  apply_cmd->add_option("--map", map_file, "Linear map file for pushforward and pullback");

  auto* klain_cmd = app.add_subcommand("klain", "Klain function of an even valuation on R^3");
  add_config_options(klain_cmd, klain_opts);
  std::string klain_input;
  int gr = 1;
  klain_cmd->add_option("--input", klain_input, "Valuation file")->required();
  klain_cmd->add_option("--gr", gr, "1 for lines, 2 for planes")->check(CLI::IsMember({1, 2}));

  auto* plot_cmd = app.add_subcommand("emit-plotdata", "CSV of a planar density or a Klain function");
  add_config_options(plot_cmd, plot_opts);
  std::string plot_input;
  plot_cmd->add_option("--input", plot_input, "Planar valuation, 3D valuation or Klain function file")->required();

  auto* info_cmd = app.add_subcommand("info", "Show suites, defaults and the resolved configuration");
  add_config_options(info_cmd, info_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*verify_cmd) {
      const VerifyConfig cfg = resolve(verify_opts);
      const SuiteReport rep = verify(cfg.suite, cfg);
      std::ostream& notes = emit_json(cfg.out, to_json(rep));
      if (!quiet) print_table(notes, rep);
      return rep.passed() ? 0 : 1;
    }
    if (*apply_cmd) return run_apply(op, inputs, map_file, resolve(apply_opts));
    if (*klain_cmd) return run_klain(klain_input, gr, resolve(klain_opts));
    if (*plot_cmd) return run_plotdata(plot_input, resolve(plot_opts));
    if (*info_cmd) {
      const VerifyConfig cfg = resolve(info_opts);
      emit_json(cfg.out, info(cfg));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
