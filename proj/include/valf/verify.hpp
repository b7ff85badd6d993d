#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valf/io.hpp"

namespace valf {

struct VerifyConfig {
  int band_limit = 16;
  /// Circle samples used wherever a density is tabulated (plot data, sampled
  /// oracles).
  int grid = 512;
  unsigned seed = 1;
  /// Tolerance of the identities that hold exactly on coefficients.
  double tol_exact = 1e-12;
  /// Tolerance of the fiber-quadrature pushforward branches.
  double tol_quad = 1e-8;
  std::string suite = "all";
  std::string out;
};

struct CaseResult {
  std::string id;
  std::string anchor;  // the identity being checked, in words
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int instances = 0;
  double seconds = 0.0;
  /// Fitted constants worth reporting (never asserted).
  std::map<std::string, double> values;
};

struct SuiteReport {
  std::string suite;
  VerifyConfig config;
  std::vector<CaseResult> cases;
  double wall_seconds = 0.0;

  bool passed() const;
  const CaseResult* find(const std::string& id) const;
};

/// Values given on the command line; unset fields fall through.
struct ConfigOverrides {
  std::optional<int> band_limit, grid;
  std::optional<unsigned> seed;
  std::optional<double> tol_exact, tol_quad;
  std::optional<std::string> suite, out;
};

/// Defaults, then the JSON config file (keys as in VerifyConfig), then
/// VALF_* environment variables (VALF_BAND_LIMIT, VALF_SEED, ...), then
/// flags. Throws std::invalid_argument on malformed values.
VerifyConfig resolve_config(const ConfigOverrides& flags, const io::json& file,
                            const std::function<const char*(const char*)>& getenv);

const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown suite. "all" runs every suite
/// and prefixes case ids with the suite name.
SuiteReport verify(const std::string& suite, const VerifyConfig& config);

io::json to_json(const VerifyConfig& c);
/// Cases, config echo, wall time and a digest of the cases without timings
/// (identical across reruns with the same seed).
io::json to_json(const SuiteReport& r);

}  // namespace valf
