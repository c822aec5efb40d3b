#pragma once

#include <map>
#include <string>
#include <vector>

#include "crpc/asymptotics.hpp"
#include "crpc/report_io.hpp"

namespace crpc::cli {

// Flags that only some subcommands read and that RunConfig does not carry.
struct Extras {
  std::map<std::string, double> params;  // closed-form --param key=value
  double M = 1.0, N = 1.0;               // majorant
  bool log_space = false;
  std::vector<Point2> seeds;             // trace-asymptotics start points
  double step = 0.01;
  int max_steps = 400;
  int mesh_u = 48, mesh_v = 48;          // closed-form parametric mesh
  bool direct = false;                   // sparse LU instead of BiCGSTAB
};

int family_iso(const RunConfig& c, const Extras& x);
int family_euc(const RunConfig& c, const Extras& x);
int closed_form(const RunConfig& c, const Extras& x);
int approx2(const RunConfig& c, const Extras& x);
int majorant(const RunConfig& c, const Extras& x);
int verify(const RunConfig& c, const Extras& x);
int trace(const RunConfig& c, const Extras& x);
int refine(const RunConfig& c, const Extras& x);

}  // namespace crpc::cli
