#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "crpc/closed_forms.hpp"
#include "crpc/grid.hpp"

namespace crpc {

using Vec3 = std::array<double, 3>;
using Polyline3 = std::vector<Vec3>;

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;  // 0-based; triangles around the pole, quads elsewhere
  std::vector<Polyline3> polylines;
};

/// Graph of `f` over its grid: one vertex per logical node, a triangle fan at
/// the pole and one quad per (ring, angle) cell.
SurfaceMesh mesh_from_field(const ScalarField& f);

/// n_u x n_v tensor mesh of a parametric surface over its parameter box.
SurfaceMesh mesh_from_parametric(const ParametricSurface& s, int n_u, int n_v);

/// OBJ with `v`, `f` (1-based) and `l` records. Polyline points are appended
/// after the surface vertices.
void write_obj(std::ostream& os, const SurfaceMesh& mesh);
void write_obj(const std::string& path, const SurfaceMesh& mesh);

/// Reads what write_obj produces (v/f/l records; other records ignored).
/// Vertices referenced only by `l` records are returned inside the polylines.
SurfaceMesh read_obj(std::istream& is);
SurfaceMesh read_obj(const std::string& path);

}  // namespace crpc
