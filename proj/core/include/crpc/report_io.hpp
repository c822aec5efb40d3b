#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crpc/curvature.hpp"
#include "crpc/majorant.hpp"
#include "crpc/refine.hpp"
#include "crpc/series_isotropic.hpp"

namespace crpc {

using Json = nlohmann::ordered_json;

/// {"min": .., "max": .., "sup": ..} over every node of f.
Json field_summary(const ScalarField& f);

/// Geometry, flat flag, residual and the min/max/sup of every curvature field.
/// "hyperbolic_fraction" is the share of nodes carrying asymptotic directions.
Json to_json(const CurvatureReport& report);
Json to_json(const MajorantSeq& seq, const std::optional<RadiusEstimate>& radius = std::nullopt);
Json to_json(const ResidualOrder& order);
Json to_json(const RefineResult& result);

void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

/// `iteration,residual` rows.
void write_history_csv(const std::string& path, const std::vector<double>& history);

/// Directory layout: series.json (geometry, grid, order, seed) and one
/// coeff_<m>.csv per coefficient in the field CSV format.
void save_series(const CoefficientSeries& s, const std::string& dir);
/// Rebuilds derivatives and sqrt(-K^(0)) from the stored coefficients.
CoefficientSeries load_series(const std::string& dir);

/// Settings of one CLI run, from flags or a JSON file.
struct RunConfig {
  std::string command;
  std::string geometry = "iso";
  std::string family;  // closed-form family name
  std::string seed_g;  // complex coefficient tokens
  std::string seed_hprime;
  std::string seed;    // named seed ("scherk")
  double scale = 1.0;
  int n_r = 64;
  int n_theta = 128;
  int order = 4;
  std::vector<double> t;
  std::optional<double> ratio;
  std::optional<double> s;
  double tol = 1e-8;
  bool flat_reg = false;
  std::string out = ".";
  std::string input;
};

/// Unknown keys and wrong types raise ConfigError naming the key.
RunConfig run_config_from_json(const Json& j);
Json to_json(const RunConfig& c);

/// Exactly one of t / ratio / s unless `parameter_optional`; grid and order
/// ranges. ConfigError names the offending flag.
void validate(const RunConfig& c, bool parameter_optional = false);

/// The t values of a run: the list, or the single value mapped from the ratio
/// or from s. Empty when none was given.
std::vector<double> resolved_t(const RunConfig& c);

}  // namespace crpc
