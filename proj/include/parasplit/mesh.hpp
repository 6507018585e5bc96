#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parasplit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class Subdomain : std::uint8_t { Fluid, Solid };

enum class FacetTag : std::uint8_t {
  DirichletFluid,  // y = 0
  DirichletSolid,  // y = 1
  NeumannFluid,    // x in {0,1}, below the interface
  NeumannSolid,    // x in {0,1}, above the interface
  Interface,
};

/// Interface line splitting the unit square: horizontal at height y0, or the
/// segment from (0, y_left) to (1, y_right). Both endpoints must lie strictly
/// between the Dirichlet edges y = 0 and y = 1.
struct InterfaceSpec {
  static InterfaceSpec horizontal(double y0);
  static InterfaceSpec slanted(double y_left, double y_right);

  double height_at(double x) const { return y_left + (y_right - y_left) * x; }
  bool is_horizontal() const { return y_left == y_right; }

  double y_left = 0.5;
  double y_right = 0.5;
};

struct Triangle {
  std::array<int, 3> v;  // counterclockwise
  Subdomain tag;
};

struct Facet {
  std::array<int, 2> v;
  FacetTag tag;
};

/// Conforming triangulation of the unit square. Vertices sit on a sheared
/// (n+1) x (n+1) lattice; one lattice row lies exactly on the interface, so
/// every triangle belongs to exactly one subdomain.
struct Mesh {
  int n = 0;              // subdivisions per side
  double h = 0.0;         // nominal element size, 1/n
  int interface_row = 0;  // lattice row carried onto the interface
  InterfaceSpec interface;
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  std::vector<Facet> facets;           // boundary and interface edges
  std::vector<Facet> interface_edges;  // ordered left to right

  int vertex_id(int col, int row) const { return row * (n + 1) + col; }
  int vertex_row(int id) const { return id / (n + 1); }
  int vertex_col(int id) const { return id % (n + 1); }
};

/// Triangulate with n*n quads split along the same diagonal. Rows are blended
/// column-wise between y = 0, the interface, and y = 1, which keeps the
/// lattice uniform whenever n * (y_left + y_right) / 2 is an integer.
Mesh build_mesh(int n, const InterfaceSpec& spec);

double triangle_area(const Mesh& mesh, const Triangle& tri);
double interface_arclength(const Mesh& mesh);

/// Plain text dump: "vertex x y", "tri i j k tag", "facet i j tag".
void write_mesh(const Mesh& mesh, std::ostream& out);

std::string to_string(Subdomain s);
std::string to_string(FacetTag t);

}  // namespace parasplit
