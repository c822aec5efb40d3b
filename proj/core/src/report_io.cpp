#include "crpc/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "crpc/error.hpp"
#include "crpc/series_euclidean.hpp"

namespace crpc {

namespace fs = std::filesystem;

namespace {

// JSON has no inf/nan; those become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

SeedSpec::Kind parse_seed_kind(const std::string& s) {
  if (s == "polynomial") return SeedSpec::Kind::Polynomial;
  if (s == "scherk") return SeedSpec::Kind::Scherk;
  if (s == "field") return SeedSpec::Kind::Field;
  fail(ErrorKind::IoError, "unknown seed kind '" + s + "'");
}

std::string coeff_file(int m) { return "coeff_" + std::to_string(m) + ".csv"; }

}  // namespace

Json field_summary(const ScalarField& f) {
  return {{"min", number(min_value(f))}, {"max", number(max_value(f))}, {"sup", number(sup_norm(f))}};
}

Json to_json(const CurvatureReport& r) {
  const auto n = static_cast<double>(r.has_directions.size());
  const auto hyperbolic = std::count(r.has_directions.begin(), r.has_directions.end(), 1);
  Json fields;
  fields["H"] = field_summary(r.H);
  fields["K"] = field_summary(r.K);
  fields["H_true"] = field_summary(r.H_true);
  fields["K_true"] = field_summary(r.K_true);
  fields["kappa1"] = field_summary(r.kappa1);
  fields["kappa2"] = field_summary(r.kappa2);
  fields["ratio"] = field_summary(r.ratio);
  return {{"geometry", std::string(to_string(r.geometry))},
          {"grid", {r.H.grid().n_r(), r.H.grid().n_theta()}},
          {"flat", r.flat},
          {"residual_sup", number(r.residual_sup)},
          {"hyperbolic_fraction", n > 0 ? hyperbolic / n : 0.0},
          {"fields", fields}};
}

Json to_json(const MajorantSeq& seq, const std::optional<RadiusEstimate>& radius) {
  Json j{{"geometry", std::string(to_string(seq.geometry))},
         {"M", seq.M},
         {"N", seq.N},
         {"order", seq.order()},
         {"log_space", seq.log_space}};
  Json la = Json::array();
  for (double v : seq.log_a) la.push_back(number(v));
  j["log_a"] = la;
  if (!seq.log_space) {
    Json a = Json::array();
    for (double v : seq.a) a.push_back(number(v));
    j["a"] = a;
  }
  if (radius) {
    j["radius"] = {{"closed_form", optional_number(radius->closed_form)},
                   {"ratio_test", optional_number(radius->ratio_test)},
                   {"value", optional_number(radius->value)}};
  }
  return j;
}

Json to_json(const ResidualOrder& o) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < o.t.size(); ++i) rows.push_back({{"t", o.t[i]}, {"sup", number(o.sup[i])}});
  return {{"samples", rows}, {"slope", number(o.slope)}};
}

Json to_json(const RefineResult& r) {
  Json h = Json::array();
  for (double v : r.history) h.push_back(number(v));
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"stalled", r.stalled},
          {"final_residual", r.history.empty() ? Json(nullptr) : number(*std::min_element(r.history.begin(), r.history.end()))},
          {"history", h}};
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  os << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::IoError, "cannot read '" + path + "'");
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::ConfigError, path + ": " + e.what());
  }
}

void write_history_csv(const std::string& path, const std::vector<double>& history) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  os.precision(17);
  os << "iteration,residual\n";
  for (std::size_t i = 0; i < history.size(); ++i) os << i << ',' << history[i] << '\n';
}

void save_series(const CoefficientSeries& s, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create '" + dir + "': " + ec.message());
  Json seed{{"kind", to_string(s.seed.kind)},
            {"g", s.seed.g.to_string()},
            {"scale", s.seed.scale},
            {"description", s.seed.description}};
  Json files = Json::array();
  for (int m = 0; m <= s.order(); ++m) {
    write_field_csv((fs::path(dir) / coeff_file(m)).string(), s.coeffs[m]);
    files.push_back(coeff_file(m));
  }
  write_json((fs::path(dir) / "series.json").string(),
             {{"geometry", std::string(to_string(s.geometry))},
              {"grid", {s.grid.n_r(), s.grid.n_theta()}},
              {"order", s.order()},
              {"seed", seed},
              {"coefficients", files}});
}

CoefficientSeries load_series(const std::string& dir) {
  const Json j = read_json((fs::path(dir) / "series.json").string());
  try {
    const Geometry g = parse_geometry(j.at("geometry").get<std::string>());
    const int n_r = j.at("grid").at(0).get<int>(), n_theta = j.at("grid").at(1).get<int>();
    const auto files = j.at("coefficients").get<std::vector<std::string>>();
    if (files.empty() || static_cast<int>(files.size()) != j.at("order").get<int>() + 1) {
      fail(ErrorKind::IoError, dir + ": coefficient list does not match the order");
    }
    const Json& sj = j.at("seed");
    SeedSpec spec;
    spec.kind = parse_seed_kind(sj.at("kind").get<std::string>());
    spec.g = ComplexPoly::parse(sj.value("g", std::string{}));
    spec.scale = sj.value("scale", 1.0);
    spec.description = sj.value("description", std::string{});

    std::vector<ScalarField> coeffs;
    for (const auto& f : files) {
      coeffs.push_back(read_field_csv((fs::path(dir) / f).string()));
      if (coeffs.back().grid().n_r() != n_r || coeffs.back().grid().n_theta() != n_theta) {
        fail(ErrorKind::GridMismatch, f + " does not match the grid in series.json");
      }
    }
    CoefficientSeries s = g == Geometry::Isotropic ? seed_isotropic(coeffs[0], spec)
                                                   : seed_euclidean(coeffs[0], spec);
    for (std::size_t m = 1; m < coeffs.size(); ++m) s.push(std::move(coeffs[m]));
    return s;
  } catch (const Json::exception& e) {
    fail(ErrorKind::IoError, dir + "/series.json: " + e.what());
  }
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::ConfigError, "config must be a JSON object");
  static const std::set<std::string> known{"command", "geometry", "family", "seed_g", "seed_hprime",
                                           "seed", "scale", "grid", "order", "t", "ratio", "s",
                                           "tol", "flat_reg", "out", "input"};
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(ErrorKind::ConfigError, "config key '" + key + "': unknown");
    try {
      if (key == "command") c.command = value.get<std::string>();
      else if (key == "geometry") c.geometry = value.get<std::string>();
      else if (key == "family") c.family = value.get<std::string>();
      else if (key == "seed_g") c.seed_g = value.get<std::string>();
      else if (key == "seed_hprime") c.seed_hprime = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::string>();
      else if (key == "scale") c.scale = value.get<double>();
      else if (key == "grid") {
        const auto g = value.get<std::vector<int>>();
        if (g.size() != 2) fail(ErrorKind::ConfigError, "config key 'grid': expected [n_r, n_theta]");
        c.n_r = g[0];
        c.n_theta = g[1];
      } else if (key == "order") c.order = value.get<int>();
      else if (key == "t") c.t = value.is_array() ? value.get<std::vector<double>>()
                                                    : std::vector<double>{value.get<double>()};
      else if (key == "ratio") c.ratio = value.get<double>();
      else if (key == "s") c.s = value.get<double>();
      else if (key == "tol") c.tol = value.get<double>();
      else if (key == "flat_reg") c.flat_reg = value.get<bool>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "input") c.input = value.get<std::string>();
    } catch (const Json::type_error&) {
      fail(ErrorKind::ConfigError, "config key '" + key + "': wrong type");
    }
  }
  return c;
}

Json to_json(const RunConfig& c) {
  Json j{{"command", c.command}, {"geometry", c.geometry}, {"grid", {c.n_r, c.n_theta}},
         {"order", c.order},     {"tol", c.tol},           {"flat_reg", c.flat_reg},
         {"out", c.out},         {"scale", c.scale}};
  if (!c.family.empty()) j["family"] = c.family;
  if (!c.seed_g.empty()) j["seed_g"] = c.seed_g;
  if (!c.seed_hprime.empty()) j["seed_hprime"] = c.seed_hprime;
  if (!c.seed.empty()) j["seed"] = c.seed;
  if (!c.input.empty()) j["input"] = c.input;
  if (!c.t.empty()) j["t"] = c.t;
  if (c.ratio) j["ratio"] = *c.ratio;
  if (c.s) j["s"] = *c.s;
  return j;
}

void validate(const RunConfig& c, bool parameter_optional) {
  const int given = (c.t.empty() ? 0 : 1) + (c.ratio ? 1 : 0) + (c.s ? 1 : 0);
  if (given > 1) fail(ErrorKind::ConfigError, "--t, --ratio and --s are mutually exclusive");
  if (given == 0 && !parameter_optional) {
    fail(ErrorKind::ConfigError, "one of --t, --ratio or --s is required");
  }
  for (double t : c.t) {
    if (!std::isfinite(t)) fail(ErrorKind::ConfigError, "--t: non-finite value");
  }
  if (c.ratio && !(*c.ratio < 0.0)) fail(ErrorKind::ConfigError, "--ratio: must be negative");
  if (c.s && !(*c.s < 1.0)) fail(ErrorKind::ConfigError, "--s: must be below 1");
  if (c.n_r < 8 || c.n_theta < 8) fail(ErrorKind::ConfigError, "--grid: both sizes must be at least 8");
  if (c.n_theta % 2 != 0) fail(ErrorKind::ConfigError, "--grid: angular count must be even");
  if (c.order < 0) fail(ErrorKind::ConfigError, "--order: must be non-negative");
  if (!(c.tol > 0.0)) fail(ErrorKind::ConfigError, "--tol: must be positive");
  if (!(c.scale > 0.0)) fail(ErrorKind::ConfigError, "--scale: must be positive");
  if (c.geometry != "iso" && c.geometry != "isotropic" && c.geometry != "euc" &&
      c.geometry != "euclidean") {
    fail(ErrorKind::ConfigError, "--geometry: expected iso or euc");
  }
}

std::vector<double> resolved_t(const RunConfig& c) {
  if (!c.t.empty()) return c.t;
  if (c.ratio) return {ratio_to_t(*c.ratio, parse_geometry(c.geometry))};
  if (c.s) return {s_to_t(*c.s)};
  return {};
}

}  // namespace crpc
