#include "crpc/mesh_export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "crpc/error.hpp"

namespace crpc {

SurfaceMesh mesh_from_field(const ScalarField& f) {
  const PolarGrid& g = f.grid();
  const int nr = g.n_r(), nt = g.n_theta();
  SurfaceMesh m;
  m.vertices.reserve(g.unknown_count());
  m.vertices.push_back({0.0, 0.0, f.pole_value()});
  for (int j = 1; j <= nr; ++j) {
    for (int k = 0; k < nt; ++k) {
      const double r = g.r(j), th = g.theta(k);
      m.vertices.push_back({r * std::cos(th), r * std::sin(th), f(j, k)});
    }
  }
  const auto id = [&](int j, int k) { return static_cast<int>(g.unknown_index(j, k % nt)); };
  for (int k = 0; k < nt; ++k) m.faces.push_back({0, id(1, k), id(1, k + 1)});
  for (int j = 1; j < nr; ++j) {
    for (int k = 0; k < nt; ++k) {
      m.faces.push_back({id(j, k), id(j + 1, k), id(j + 1, k + 1), id(j, k + 1)});
    }
  }
  return m;
}

SurfaceMesh mesh_from_parametric(const ParametricSurface& s, int n_u, int n_v) {
  if (n_u < 2 || n_v < 2) fail(ErrorKind::ConfigError, "parametric mesh needs at least 2x2 samples");
  SurfaceMesh m;
  for (int i = 0; i < n_u; ++i) {
    const double u = s.u_min + (s.u_max - s.u_min) * i / (n_u - 1);
    for (int j = 0; j < n_v; ++j) {
      const double v = s.v_min + (s.v_max - s.v_min) * j / (n_v - 1);
      const auto p = s.eval(u, v).p;
      m.vertices.push_back({p[0], p[1], p[2]});
    }
  }
  for (int i = 0; i + 1 < n_u; ++i) {
    for (int j = 0; j + 1 < n_v; ++j) {
      const int a = i * n_v + j;
      m.faces.push_back({a, a + n_v, a + n_v + 1, a + 1});
    }
  }
  return m;
}

void write_obj(std::ostream& os, const SurfaceMesh& mesh) {
  os << std::setprecision(17);
  for (const auto& v : mesh.vertices) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& pl : mesh.polylines) {
    for (const auto& v : pl) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  }
  for (const auto& f : mesh.faces) {
    os << 'f';
    for (int i : f) os << ' ' << i + 1;
    os << '\n';
  }
  std::size_t next = mesh.vertices.size() + 1;
  for (const auto& pl : mesh.polylines) {
    if (pl.size() < 2) {
      next += pl.size();
      continue;
    }
    os << 'l';
    for (std::size_t i = 0; i < pl.size(); ++i) os << ' ' << next++;
    os << '\n';
  }
}

void write_obj(const std::string& path, const SurfaceMesh& mesh) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  write_obj(os, mesh);
}

SurfaceMesh read_obj(std::istream& is) {
  std::vector<Vec3> all;
  std::vector<std::vector<int>> faces, lines;
  std::string line;
  int lineno = 0;
  const auto bad = [&](const std::string& why) {
    fail(ErrorKind::IoError, "OBJ line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 v{};
      if (!(ls >> v[0] >> v[1] >> v[2])) bad("malformed vertex");
      all.push_back(v);
    } else if (tag == "f" || tag == "l") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // "i", "i/t" and "i/t/n" all start with the vertex index.
        int i = 0;
        const std::string head = tok.substr(0, tok.find('/'));
        const auto [end, ec] = std::from_chars(head.data(), head.data() + head.size(), i);
        if (ec != std::errc() || end != head.data() + head.size()) bad("bad index '" + tok + "'");
        if (i < 1) bad("non-positive index");
        idx.push_back(i - 1);
      }
      (tag == "f" ? faces : lines).push_back(std::move(idx));
    }
  }
  std::set<int> line_only;
  for (const auto& l : lines) line_only.insert(l.begin(), l.end());
  for (const auto& f : faces) {
    for (int i : f) line_only.erase(i);
  }
  SurfaceMesh m;
  // Surface vertices come first, so the mesh is the prefix not used by lines only.
  std::size_t n_surface = all.size();
  if (!line_only.empty()) n_surface = static_cast<std::size_t>(*line_only.begin());
  m.vertices.assign(all.begin(), all.begin() + static_cast<long>(n_surface));
  for (auto& f : faces) {
    for (int i : f) {
      if (i >= static_cast<int>(n_surface)) bad("face index out of range");
    }
  }
  m.faces = std::move(faces);
  for (const auto& l : lines) {
    Polyline3 pl;
    for (int i : l) {
      if (i >= static_cast<int>(all.size())) bad("line index out of range");
      pl.push_back(all[i]);
    }
    m.polylines.push_back(std::move(pl));
  }
  return m;
}

SurfaceMesh read_obj(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::IoError, "cannot read '" + path + "'");
  return read_obj(is);
}

}  // namespace crpc
