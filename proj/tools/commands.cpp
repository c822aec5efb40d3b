#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "crpc/approx2.hpp"
#include "crpc/closed_forms.hpp"
#include "crpc/error.hpp"
#include "crpc/mesh_export.hpp"
#include "crpc/series_euclidean.hpp"

namespace crpc::cli {

namespace fs = std::filesystem;

namespace {

std::string out_file(const RunConfig& c, const std::string& name) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) fail(ErrorKind::IoError, "--out: cannot create '" + c.out + "': " + ec.message());
  return (fs::path(c.out) / name).string();
}

PolarGrid grid_of(const RunConfig& c) { return make_polar_grid(c.n_r, c.n_theta); }

EllipticOptions elliptic_of(const Extras& x) {
  EllipticOptions o;
  if (x.direct) o.method = EllipticMethod::Direct;
  return o;
}

std::vector<double> single_t(const RunConfig& c) {
  const auto ts = resolved_t(c);
  if (ts.size() != 1) fail(ErrorKind::ConfigError, "--t: exactly one value expected");
  return ts;
}

// OBJ + CSV of one field and its curvature summary.
Json write_field(const RunConfig& c, const ScalarField& f, Geometry g, const std::string& stem) {
  const std::string obj = out_file(c, stem + ".obj"), csv = out_file(c, stem + ".csv");
  write_obj(obj, mesh_from_field(f));
  write_field_csv(csv, f);
  Json j{{"obj", obj}, {"csv", csv}};
  j["curvature"] = to_json(curvatures(g, cartesian_derivatives(f)));
  return j;
}

std::string stem_for(const std::string& base, std::size_t i) { return base + "_t" + std::to_string(i); }

ComplexPoly isotropic_seed(const RunConfig& c) {
  if (!c.seed_g.empty() && !c.seed_hprime.empty()) {
    fail(ErrorKind::ConfigError, "--seed-g and --seed-hprime are mutually exclusive");
  }
  if (!c.seed_g.empty()) return ComplexPoly::parse(c.seed_g);
  if (!c.seed_hprime.empty()) return pipeline_from_hprime(ComplexPoly::parse(c.seed_hprime)).g;
  fail(ErrorKind::ConfigError, "--seed-g or --seed-hprime is required");
}

CoefficientSeries euclidean_seed(const RunConfig& c, const PolarGrid& grid) {
  if (!c.input.empty()) {
    ScalarField f0 = read_field_csv(c.input);
    return seed_euclidean(f0, {SeedSpec::Kind::Field, {}, 1.0, "field from " + c.input});
  }
  if (c.seed == "scherk") return seed_scherk(grid, c.scale);
  fail(ErrorKind::ConfigError, "--seed scherk or --input is required");
}

ScalarField isotropic_family_at(const RunConfig& c, double t) {
  CoefficientSeries s = seed_isotropic(isotropic_seed(c), grid_of(c));
  extend(s, c.order);
  return sum_series(s, t);
}

void print(const std::string& line) { std::cout << line << '\n'; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

int family_iso(const RunConfig& c, const Extras&) {
  CoefficientSeries s = seed_isotropic(isotropic_seed(c), grid_of(c));
  extend(s, c.order);
  save_series(s, out_file(c, "series"));
  Json report{{"config", to_json(c)}, {"seed", s.seed.description}, {"order", s.order()}};
  const auto radius = empirical_radius(s);
  report["empirical_radius"] = radius ? Json(*radius) : Json(nullptr);
  Json runs = Json::array();
  const auto ts = resolved_t(c);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<std::string> warnings;
    const ScalarField f = sum_series(s, ts[i], warnings);
    const Residual r = residual_isotropic(f, ts[i]);
    Json run = write_field(c, f, Geometry::Isotropic, stem_for("family", i));
    run["t"] = ts[i];
    run["residual_sup"] = r.sup;
    run["warnings"] = warnings;
    runs.push_back(run);
    print("t=" + fmt(ts[i]) + " residual_sup=" + fmt(r.sup));
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  }
  report["runs"] = runs;
  write_json(out_file(c, "report.json"), report);
  return 0;
}

int family_euc(const RunConfig& c, const Extras& x) {
  CoefficientSeries s = euclidean_seed(c, grid_of(c));
  extend_euclidean(s, c.order, elliptic_of(x));
  save_series(s, out_file(c, "series"));
  Json report{{"config", to_json(c)}, {"seed", s.seed.description}, {"order", s.order()}};
  const auto radius = empirical_radius(s);
  report["empirical_radius"] = radius ? Json(*radius) : Json(nullptr);
  Json runs = Json::array();
  const auto ts = resolved_t(c);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<std::string> warnings;
    const ScalarField f = sum_series(s, ts[i], warnings);
    const Residual r = residual_euclidean(f, ts[i]);
    Json run = write_field(c, f, Geometry::Euclidean, stem_for("family", i));
    run["t"] = ts[i];
    run["residual_sup"] = r.sup;
    run["warnings"] = warnings;
    runs.push_back(run);
    print("t=" + fmt(ts[i]) + " residual_sup=" + fmt(r.sup));
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  }
  report["runs"] = runs;
  write_json(out_file(c, "report.json"), report);
  return 0;
}

int closed_form(const RunConfig& c, const Extras& x) {
  if (c.family.empty()) fail(ErrorKind::ConfigError, "closed-form: family name required");
  auto params = x.params;
  if (c.ratio) params["a"] = *c.ratio;
  if (c.family == "deg2" && !c.t.empty()) params["t"] = c.t.front();
  const CatalogEntry e = catalog_entry(c.family, params);
  const RatioCheck check = check_ratio(e);
  const std::string obj = out_file(c, c.family + ".obj");
  write_obj(obj, mesh_from_parametric(e.surface, x.mesh_u, x.mesh_v));
  Json p = Json::object();
  for (const auto& [k, v] : e.surface.params) p[k] = v;
  const Json report{{"family", e.family},
                    {"geometry", std::string(to_string(e.geometry))},
                    {"params", p},
                    {"expected_ratio", e.expected_ratio},
                    {"samples", check.samples},
                    {"max_deviation", check.max_deviation},
                    {"worst_uv", {check.worst_u, check.worst_v}},
                    {"obj", obj}};
  write_json(out_file(c, c.family + ".json"), report);
  print(e.family + " ratio=" + fmt(e.expected_ratio) + " samples=" + std::to_string(check.samples) +
        " max_deviation=" + fmt(check.max_deviation));
  return 0;
}

int approx2(const RunConfig& c, const Extras&) {
  if (!c.seed_g.empty() && !c.seed_hprime.empty()) {
    fail(ErrorKind::ConfigError, "--seed-g and --seed-hprime are mutually exclusive");
  }
  Approx2Pipeline p;
  if (!c.seed_g.empty()) p = pipeline_from_g(ComplexPoly::parse(c.seed_g));
  else if (!c.seed_hprime.empty()) p = pipeline_from_hprime(ComplexPoly::parse(c.seed_hprime));
  else fail(ErrorKind::ConfigError, "--seed-g or --seed-hprime is required");

  // --t is the parameter of the complex form; --ratio and --s go through the isotropic t.
  std::vector<double> ts = c.t;
  if (ts.empty()) ts = {wirtinger_t(resolved_t(c).front())};
  const PolarGrid grid = grid_of(c);
  Json report{{"config", to_json(c)},
              {"g", p.g.to_string()},
              {"h", p.h.to_string()},
              {"hprime", p.hprime.to_string()},
              {"route", p.route},
              {"series_degree", p.series_degree},
              {"validation_residual", p.validation_residual}};
  Json runs = Json::array();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const ScalarField f = approx2_field(p, grid, ts[i], c.flat_reg);
    const Residual r = approx2_residual(f, ts[i]);
    Json run = write_field(c, f, Geometry::Isotropic, stem_for("approx2", i));
    run["t"] = ts[i];
    run["isotropic_t"] = std::abs(ts[i]) < 1.0 ? Json(isotropic_t(ts[i])) : Json(nullptr);
    run["residual_sup"] = r.sup;
    runs.push_back(run);
    print("t=" + fmt(ts[i]) + " residual_sup=" + fmt(r.sup));
  }
  report["runs"] = runs;
  if (ts.size() >= 2) {
    const ResidualOrder o = approx2_residual_order(p, grid, ts, c.flat_reg);
    report["residual_order"] = to_json(o);
    print("slope=" + fmt(o.slope));
  }
  write_json(out_file(c, "report.json"), report);
  return 0;
}

int majorant(const RunConfig& c, const Extras& x) {
  const Geometry g = parse_geometry(c.geometry);
  const MajorantSeq seq = g == Geometry::Isotropic ? majorant_isotropic(x.M, x.N, c.order, x.log_space)
                                                   : majorant_euclidean(x.M, x.N, c.order, x.log_space);
  const RadiusEstimate r = radius_estimate(seq);
  write_json(out_file(c, "majorant.json"), to_json(seq, r));
  print("radius=" + (r.value ? fmt(*r.value) : std::string("unknown")) +
        " closed_form=" + (r.closed_form ? fmt(*r.closed_form) : std::string("none")) +
        " ratio_test=" + (r.ratio_test ? fmt(*r.ratio_test) : std::string("none")));
  return 0;
}

int verify(const RunConfig& c, const Extras&) {
  if (c.input.empty()) fail(ErrorKind::ConfigError, "--input is required");
  const Geometry g = parse_geometry(c.geometry);
  const ScalarField f = read_field_csv(c.input);
  Json report{{"input", c.input}, {"curvature", to_json(curvatures(g, cartesian_derivatives(f)))}};
  const auto ts = resolved_t(c);
  if (ts.size() == 1) {
    const Residual r = g == Geometry::Isotropic ? residual_isotropic(f, ts[0]) : residual_euclidean(f, ts[0]);
    report["t"] = ts[0];
    report["residual_sup"] = r.sup;
  }
  write_json(out_file(c, "verify.json"), report);
  const bool flat = report["curvature"]["flat"].get<bool>();
  print(std::string("flat=") + (flat ? "yes" : "no") + " ratio_range=[" +
        fmt(report["curvature"]["fields"]["ratio"]["min"].get<double>()) + ", " +
        fmt(report["curvature"]["fields"]["ratio"]["max"].get<double>()) + "]");
  return 0;
}

int trace(const RunConfig& c, const Extras& x) {
  const Geometry g = parse_geometry(c.geometry);
  ScalarField f = !c.input.empty() ? read_field_csv(c.input) : isotropic_family_at(c, single_t(c).front());
  const DerivativeBundle d = cartesian_derivatives(f);
  const CurvatureReport rep = curvatures(g, d);
  std::vector<Point2> seeds = x.seeds;
  if (seeds.empty()) {
    for (double sx = -0.6; sx <= 0.61; sx += 0.3) {
      for (double sy = -0.6; sy <= 0.61; sy += 0.3) {
        if (std::hypot(sx, sy) < 0.8) seeds.push_back({sx, sy});
      }
    }
  }
  const AsymptoticNet net = trace_asymptotics(rep, seeds, {x.step, x.max_steps});
  const auto crossings = measure_crossings(net, g, d);

  SurfaceMesh mesh = mesh_from_field(f);
  for (const auto* fam : {&net.family1, &net.family2}) {
    for (const auto& line : *fam) {
      Polyline3 pl;
      for (const auto& p : line) pl.push_back({p[0], p[1], interpolate(f, p[0], p[1])});
      mesh.polylines.push_back(std::move(pl));
    }
  }
  const std::string obj = out_file(c, "asymptotics.obj");
  write_obj(obj, mesh);

  Json angles = Json::array();
  double lo = 180.0, hi = 0.0, sum = 0.0;
  for (const auto& k : crossings) {
    angles.push_back({{"x", k.at[0]}, {"y", k.at[1]}, {"angle_deg", k.angle_deg}});
    lo = std::min(lo, k.angle_deg);
    hi = std::max(hi, k.angle_deg);
    sum += k.angle_deg;
  }
  Json report{{"geometry", std::string(to_string(g))},
              {"family1", net.family1.size()},
              {"family2", net.family2.size()},
              {"crossings", angles},
              {"obj", obj}};
  if (!crossings.empty()) {
    report["angle_min"] = lo;
    report["angle_max"] = hi;
    report["angle_mean"] = sum / static_cast<double>(crossings.size());
  }
  if (c.ratio) report["expected_angle"] = angle_from_ratio(*c.ratio);
  write_json(out_file(c, "asymptotics.json"), report);
  print("curves=" + std::to_string(net.family1.size() + net.family2.size()) +
        " crossings=" + std::to_string(crossings.size()) +
        (crossings.empty() ? std::string()
                           : " angle=[" + fmt(lo) + ", " + fmt(hi) + "]"));
  return 0;
}

int refine(const RunConfig& c, const Extras& x) {
  const Geometry g = parse_geometry(c.geometry);
  const double t = single_t(c).front();
  ScalarField f0 = [&] {
    if (!c.input.empty()) return read_field_csv(c.input);
    if (g == Geometry::Isotropic) return isotropic_family_at(c, t);
    CoefficientSeries s = euclidean_seed(c, grid_of(c));
    extend_euclidean(s, c.order, elliptic_of(x));
    return sum_series(s, t);
  }();
  RefineOptions o;
  o.tol = c.tol;
  o.elliptic = elliptic_of(x);
  const RefineResult r = picard_refine(f0, t, g, o);
  Json report = write_field(c, r.field, g, "refined");
  report["t"] = t;
  report["refine"] = to_json(r);
  double drift = 0.0;
  const auto b0 = f0.boundary_values(), b1 = r.field.boundary_values();
  for (std::size_t k = 0; k < b0.size(); ++k) drift = std::max(drift, std::abs(b0[k] - b1[k]));
  report["boundary_drift"] = drift;
  write_history_csv(out_file(c, "history.csv"), r.history);
  write_json(out_file(c, "report.json"), report);
  print("iterations=" + std::to_string(r.iterations) + " residual=" + fmt(r.history.empty() ? 0.0 : *std::min_element(r.history.begin(), r.history.end())) +
        (r.converged ? " converged" : r.stalled ? " stalled" : " not converged"));
  return 0;
}

}  // namespace crpc::cli
