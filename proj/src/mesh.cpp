#include "parasplit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace parasplit {

InterfaceSpec InterfaceSpec::horizontal(double y0) {
  if (!(y0 > 0.0 && y0 < 1.0)) {
    throw std::invalid_argument("interface height must lie strictly inside (0,1)");
  }
  return {y0, y0};
}

InterfaceSpec InterfaceSpec::slanted(double y_left, double y_right) {
  if (!(y_left > 0.0 && y_left < 1.0 && y_right > 0.0 && y_right < 1.0)) {
    throw std::invalid_argument("interface endpoints must lie strictly inside (0,1)");
  }
  return {y_left, y_right};
}

Mesh build_mesh(int n, const InterfaceSpec& spec) {
  if (n < 2) {
    throw std::invalid_argument("mesh needs at least 2 subdivisions per side");
  }

  Mesh mesh;
  mesh.n = n;
  mesh.h = 1.0 / n;
  mesh.interface = spec;

  const double mid_height = 0.5 * (spec.y_left + spec.y_right);
  const int row_sigma = std::clamp(static_cast<int>(std::lround(mid_height * n)), 1, n - 1);
  mesh.interface_row = row_sigma;

  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= n; ++c) {
      const double x = static_cast<double>(c) / n;
      const double ys = spec.height_at(x);
      double y;
      if (r == 0) {
        y = 0.0;
      } else if (r == n) {
        y = 1.0;
      } else if (r == row_sigma) {
        y = ys;
      } else if (r < row_sigma) {
        y = ys * (static_cast<double>(r) / row_sigma);
      } else {
        y = ys + (1.0 - ys) * (static_cast<double>(r - row_sigma) / (n - row_sigma));
      }
      mesh.vertices.push_back({x, y});
    }
  }

  mesh.triangles.reserve(2 * n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int v00 = mesh.vertex_id(c, r);
      const int v10 = mesh.vertex_id(c + 1, r);
      const int v01 = mesh.vertex_id(c, r + 1);
      const int v11 = mesh.vertex_id(c + 1, r + 1);
      const Subdomain tag = r < row_sigma ? Subdomain::Fluid : Subdomain::Solid;
      mesh.triangles.push_back({{v00, v10, v11}, tag});
      mesh.triangles.push_back({{v00, v11, v01}, tag});
    }
  }

  for (int c = 0; c < n; ++c) {
    mesh.facets.push_back({{mesh.vertex_id(c, 0), mesh.vertex_id(c + 1, 0)}, FacetTag::DirichletFluid});
  }
  for (int c = 0; c < n; ++c) {
    mesh.facets.push_back({{mesh.vertex_id(c, n), mesh.vertex_id(c + 1, n)}, FacetTag::DirichletSolid});
  }
  for (int r = 0; r < n; ++r) {
    const FacetTag side = r < row_sigma ? FacetTag::NeumannFluid : FacetTag::NeumannSolid;
    mesh.facets.push_back({{mesh.vertex_id(0, r), mesh.vertex_id(0, r + 1)}, side});
    mesh.facets.push_back({{mesh.vertex_id(n, r), mesh.vertex_id(n, r + 1)}, side});
  }
  for (int c = 0; c < n; ++c) {
    const Facet edge{{mesh.vertex_id(c, row_sigma), mesh.vertex_id(c + 1, row_sigma)}, FacetTag::Interface};
    mesh.facets.push_back(edge);
    mesh.interface_edges.push_back(edge);
  }

  return mesh;
}

double triangle_area(const Mesh& mesh, const Triangle& tri) {
  const Vec2& a = mesh.vertices[tri.v[0]];
  const Vec2& b = mesh.vertices[tri.v[1]];
  const Vec2& c = mesh.vertices[tri.v[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double interface_arclength(const Mesh& mesh) {
  double length = 0.0;
  for (const Facet& e : mesh.interface_edges) {
    const Vec2& a = mesh.vertices[e.v[0]];
    const Vec2& b = mesh.vertices[e.v[1]];
    length += std::hypot(b.x - a.x, b.y - a.y);
  }
  return length;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  for (const Vec2& v : mesh.vertices) {
    out << "vertex " << v.x << ' ' << v.y << '\n';
  }
  for (const Triangle& t : mesh.triangles) {
    out << "tri " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << to_string(t.tag) << '\n';
  }
  for (const Facet& f : mesh.facets) {
    out << "facet " << f.v[0] << ' ' << f.v[1] << ' ' << to_string(f.tag) << '\n';
  }
}

std::string to_string(Subdomain s) {
  return s == Subdomain::Fluid ? "Fluid" : "Solid";
}

std::string to_string(FacetTag t) {
  switch (t) {
    case FacetTag::DirichletFluid: return "DirichletFluid";
    case FacetTag::DirichletSolid: return "DirichletSolid";
    case FacetTag::NeumannFluid: return "NeumannFluid";
    case FacetTag::NeumannSolid: return "NeumannSolid";
    case FacetTag::Interface: return "Interface";
  }
  return "?";
}

}  // namespace parasplit
