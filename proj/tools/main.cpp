#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "crpc/error.hpp"

namespace {

using crpc::ErrorKind;
using crpc::RunConfig;
using crpc::cli::Extras;

// Raw flag values; shared by every subcommand, only given flags are applied.
struct Flags {
  std::string config, geometry, family, seed_g, seed_hprime, seed, out, input;
  std::vector<int> grid;
  std::vector<double> t;
  double ratio = 0.0, s = 0.0, scale = 1.0, tol = 1e-8;
  int order = 4;
  bool flat_reg = false;
};

struct Sub {
  CLI::App* app;
  std::function<int(const RunConfig&, const Extras&)> run;
  bool parameter_optional;
  std::map<std::string, CLI::Option*> opts;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) crpc::fail(ErrorKind::ConfigError, "--param: expected key=value, got '" + it + "'");
    try {
      out[it.substr(0, eq)] = std::stod(it.substr(eq + 1));
    } catch (const std::exception&) {
      crpc::fail(ErrorKind::ConfigError, "--param: bad number in '" + it + "'");
    }
  }
  return out;
}

// "x,y;x,y;..."
std::vector<crpc::Point2> parse_seeds(const std::string& text) {
  std::vector<crpc::Point2> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream is(item);
    crpc::Point2 p{};
    char comma = 0;
    if (!(is >> p[0] >> comma >> p[1]) || comma != ',') {
      crpc::fail(ErrorKind::ConfigError, "--seeds: expected x,y pairs separated by ';', got '" + item + "'");
    }
    out.push_back(p);
  }
  return out;
}

RunConfig merge(const Sub& sub, const Flags& f) {
  RunConfig c;
  if (sub.opts.at("config")->count()) c = crpc::run_config_from_json(crpc::read_json(f.config));
  c.command = sub.app->get_name();
  const auto given = [&](const char* name) {
    const auto it = sub.opts.find(name);
    return it != sub.opts.end() && it->second->count() > 0;
  };
  if (given("geometry")) c.geometry = f.geometry;
  if (given("family")) c.family = f.family;
  if (given("seed-g")) c.seed_g = f.seed_g;
  if (given("seed-hprime")) c.seed_hprime = f.seed_hprime;
  if (given("seed")) c.seed = f.seed;
  if (given("scale")) c.scale = f.scale;
  if (given("grid")) {
    c.n_r = f.grid[0];
    c.n_theta = f.grid[1];
  }
  if (given("order")) c.order = f.order;
  // A parameter flag replaces whatever the config file chose.
  if (given("t") || given("ratio") || given("s")) {
    c.t.clear();
    c.ratio.reset();
    c.s.reset();
  }
  if (given("t")) c.t = f.t;
  if (given("ratio")) c.ratio = f.ratio;
  if (given("s")) c.s = f.s;
  if (given("tol")) c.tol = f.tol;
  if (given("flat-reg")) c.flat_reg = true;
  if (given("out")) c.out = f.out;
  if (given("input")) c.input = f.input;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-ratio principal curvature surfaces: families, closed forms, checks"};
  app.require_subcommand(1);
  Flags f;
  Extras x;
  std::vector<std::string> params;
  std::string seeds;

  std::vector<Sub> subs;
  const auto add = [&](const std::string& name, const std::string& help, auto run, bool param_optional) {
    Sub s{app.add_subcommand(name, help), run, param_optional, {}};
    auto* a = s.app;
    s.opts["config"] = a->add_option("--config", f.config, "RunConfig JSON file; flags override it");
    s.opts["grid"] = a->add_option("--grid", f.grid, "NR,NT")->delimiter(',')->expected(2);
    s.opts["order"] = a->add_option("--order", f.order, "series order M");
    s.opts["t"] = a->add_option("--t", f.t, "comma-separated t values")->delimiter(',');
    s.opts["ratio"] = a->add_option("--ratio", f.ratio, "principal curvature ratio a < 0");
    s.opts["s"] = a->add_option("--s", f.s, "Euclidean parameter s = a + 1");
    s.opts["tol"] = a->add_option("--tol", f.tol, "tolerance");
    s.opts["out"] = a->add_option("--out", f.out, "output directory");
    s.opts["geometry"] = a->add_option("--geometry", f.geometry, "iso or euc");
    s.opts["input"] = a->add_option("--input", f.input, "field CSV (r,theta,value)");
    subs.push_back(std::move(s));
    return &subs.back();
  };
  const auto seed_opts = [&](Sub* s) {
    s->opts["seed-g"] = s->app->add_option("--seed-g", f.seed_g, "coefficients of g, e.g. \"0 0 (0,-0.5)\"");
    s->opts["seed-hprime"] = s->app->add_option("--seed-hprime", f.seed_hprime, "coefficients of h'");
  };
  const auto euclid_opts = [&](Sub* s) {
    s->opts["seed"] = s->app->add_option("--seed", f.seed, "named seed")->check(CLI::IsMember({"scherk"}));
    s->opts["scale"] = s->app->add_option("--scale", f.scale, "Scherk scale");
    s->app->add_flag("--direct", x.direct, "sparse LU instead of BiCGSTAB");
  };

  subs.reserve(8);
  seed_opts(add("family-iso", "isotropic CRPC family from a minimal seed", crpc::cli::family_iso, false));
  euclid_opts(add("family-euc", "Euclidean CRPC family from a minimal graph", crpc::cli::family_euc, false));
  {
    Sub* s = add("closed-form", "sample a closed-form CRPC surface", crpc::cli::closed_form, true);
    s->opts["family"] = s->app->add_option("family", f.family, "family name")->required();
    s->app->add_option("--param", params, "family parameter key=value (repeatable)");
    s->app->add_option("--mesh", x.mesh_u, "parametric samples per direction");
  }
  {
    Sub* s = add("approx2", "second-order closed-form approximation", crpc::cli::approx2, false);
    seed_opts(s);
    s->opts["flat-reg"] = s->app->add_flag("--flat-reg", f.flat_reg, "log(|h'| + t) regularization");
  }
  {
    Sub* s = add("majorant", "majorant sequence and radius", crpc::cli::majorant, true);
    s->app->add_option("--M", x.M, "majorant M");
    s->app->add_option("--N", x.N, "majorant N");
    s->app->add_flag("--log-space", x.log_space, "log-space recursion for large orders");
  }
  add("verify", "curvature report of a sampled field", crpc::cli::verify, true);
  {
    Sub* s = add("trace-asymptotics", "trace both asymptotic families", crpc::cli::trace, true);
    seed_opts(s);
    s->app->add_option("--seeds", seeds, "start points \"x,y;x,y;...\"");
    s->app->add_option("--step", x.step, "RK4 step");
    s->app->add_option("--max-steps", x.max_steps, "steps per direction");
  }
  {
    Sub* s = add("refine", "Picard refinement at fixed t", crpc::cli::refine, false);
    seed_opts(s);
    euclid_opts(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const Sub& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      x.params = parse_params(params);
      x.seeds = parse_seeds(seeds);
      x.mesh_v = x.mesh_u;
      const RunConfig c = merge(s, f);
      crpc::validate(c, s.parameter_optional);
      return s.run(c, x);
    } catch (const crpc::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return crpc::is_solver_failure(e.kind()) ? 3 : 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
