#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "parasplit/mesh.hpp"

using namespace parasplit;

namespace {

// Undirected edge key for conformity checks.
std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::map<std::pair<int, int>, int> triangle_edge_counts(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> counts;
  for (const Triangle& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) counts[edge_key(t.v[e], t.v[(e + 1) % 3])] += 1;
  }
  return counts;
}

}  // namespace

TEST_CASE("hand-enumerated counts for the 4x4 mesh with a horizontal interface at 0.75") {
  const Mesh mesh = build_mesh(4, InterfaceSpec::horizontal(0.75));
  CHECK(mesh.vertices.size() == 25);
  CHECK(mesh.triangles.size() == 32);
  CHECK(mesh.interface_edges.size() == 4);
  CHECK(mesh.interface_row == 3);

  int solid = 0;
  int fluid = 0;
  for (const Triangle& t : mesh.triangles) (t.tag == Subdomain::Solid ? solid : fluid) += 1;
  CHECK(solid == 8);
  CHECK(fluid == 24);

  // n divisible by 4 and y0 = 0.75: the lattice stays uniform.
  for (int r = 0; r <= 4; ++r) {
    for (int c = 0; c <= 4; ++c) {
      const Vec2 v = mesh.vertices[mesh.vertex_id(c, r)];
      CHECK(v.x == doctest::Approx(c / 4.0).epsilon(1e-15));
      CHECK(v.y == doctest::Approx(r / 4.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("interface edges for the 2x2 mesh with interface at 0.5") {
  const Mesh mesh = build_mesh(2, InterfaceSpec::horizontal(0.5));
  REQUIRE(mesh.interface_edges.size() == 2);
  const Vec2 a0 = mesh.vertices[mesh.interface_edges[0].v[0]];
  const Vec2 a1 = mesh.vertices[mesh.interface_edges[0].v[1]];
  const Vec2 b1 = mesh.vertices[mesh.interface_edges[1].v[1]];
  CHECK(a0.x == doctest::Approx(0.0));
  CHECK(a0.y == doctest::Approx(0.5));
  CHECK(a1.x == doctest::Approx(0.5));
  CHECK(a1.y == doctest::Approx(0.5));
  CHECK(b1.x == doctest::Approx(1.0));
  CHECK(b1.y == doctest::Approx(0.5));
}

TEST_CASE("slanted interface shears columns onto the line 0.25 + 0.5 x") {
  const Mesh mesh = build_mesh(4, InterfaceSpec::slanted(0.25, 0.75));
  CHECK(mesh.interface_row == 2);

  // Hand-computed blend: column x = 0.25 has interface height 0.375.
  CHECK(mesh.vertices[mesh.vertex_id(1, 1)].y == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(mesh.vertices[mesh.vertex_id(1, 2)].y == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(mesh.vertices[mesh.vertex_id(1, 3)].y == doctest::Approx(0.6875).epsilon(1e-15));
  CHECK(mesh.vertices[mesh.vertex_id(4, 2)].y == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(mesh.vertices[mesh.vertex_id(4, 3)].y == doctest::Approx(0.875).epsilon(1e-15));

  // Interface vertices must sit exactly on the line.
  for (const Facet& e : mesh.interface_edges) {
    for (int v : e.v) {
      const Vec2 p = mesh.vertices[v];
      CHECK(std::abs(p.y - (0.25 + 0.5 * p.x)) < 1e-15);
    }
  }

  // y = 0 and y = 1 rows are untouched by the shear.
  for (int c = 0; c <= 4; ++c) {
    CHECK(mesh.vertices[mesh.vertex_id(c, 0)].y == 0.0);
    CHECK(mesh.vertices[mesh.vertex_id(c, 4)].y == 1.0);
  }
}

TEST_CASE("arclength: horizontal interfaces have length 1, the example slant sqrt(1.25)") {
  CHECK(interface_arclength(build_mesh(2, InterfaceSpec::horizontal(0.5))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(interface_arclength(build_mesh(8, InterfaceSpec::horizontal(0.33))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(interface_arclength(build_mesh(4, InterfaceSpec::slanted(0.25, 0.75))) ==
        doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
  CHECK(interface_arclength(build_mesh(32, InterfaceSpec::slanted(0.25, 0.75))) ==
        doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
}

TEST_CASE("triangle areas are positive and partition the square; fluid area matches the interface") {
  struct Case {
    int n;
    InterfaceSpec spec;
    double fluid_area;
  };
  const Case cases[] = {
      {4, InterfaceSpec::horizontal(0.75), 0.75},
      {7, InterfaceSpec::horizontal(0.4), 0.4},
      {6, InterfaceSpec::slanted(0.25, 0.75), 0.5},
      {9, InterfaceSpec::slanted(0.6, 0.35), 0.475},
  };
  for (const Case& c : cases) {
    CAPTURE(c.n);
    const Mesh mesh = build_mesh(c.n, c.spec);
    double total = 0.0;
    double fluid = 0.0;
    for (const Triangle& t : mesh.triangles) {
      const double area = triangle_area(mesh, t);
      CHECK(area > 0.0);
      total += area;
      if (t.tag == Subdomain::Fluid) fluid += area;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fluid == doctest::Approx(c.fluid_area).epsilon(1e-12));
  }
}

TEST_CASE("conformity: interior edges shared by two triangles, facets by the right number") {
  for (const InterfaceSpec spec : {InterfaceSpec::horizontal(0.7), InterfaceSpec::slanted(0.3, 0.55)}) {
    const Mesh mesh = build_mesh(5, spec);
    const auto counts = triangle_edge_counts(mesh);
    for (const auto& [edge, count] : counts) CHECK(count <= 2);

    // Boundary facets bound exactly one triangle, interface facets two
    // (one per subdomain).
    for (const Facet& f : mesh.facets) {
      const auto it = counts.find(edge_key(f.v[0], f.v[1]));
      REQUIRE(it != counts.end());
      CHECK(it->second == (f.tag == FacetTag::Interface ? 2 : 1));
    }

    // Every count-1 edge is tagged as boundary exactly once.
    int boundary_edges = 0;
    for (const auto& [edge, count] : counts) boundary_edges += count == 1 ? 1 : 0;
    CHECK(boundary_edges == 4 * mesh.n);
    CHECK(mesh.facets.size() == static_cast<std::size_t>(5 * mesh.n));
  }
}

TEST_CASE("interface triangles: each interface edge touches one fluid and one solid triangle") {
  const Mesh mesh = build_mesh(6, InterfaceSpec::slanted(0.25, 0.75));
  for (const Facet& e : mesh.interface_edges) {
    int fluid = 0;
    int solid = 0;
    for (const Triangle& t : mesh.triangles) {
      int shared = 0;
      for (int v : t.v) shared += (v == e.v[0] || v == e.v[1]) ? 1 : 0;
      if (shared == 2) (t.tag == Subdomain::Fluid ? fluid : solid) += 1;
    }
    CHECK(fluid == 1);
    CHECK(solid == 1);
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(build_mesh(1, InterfaceSpec::horizontal(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(InterfaceSpec::horizontal(0.0), std::invalid_argument);
  CHECK_THROWS_AS(InterfaceSpec::horizontal(1.0), std::invalid_argument);
  CHECK_THROWS_AS(InterfaceSpec::slanted(0.5, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(InterfaceSpec::slanted(-0.1, 0.5), std::invalid_argument);
}

TEST_CASE("text dump has one line per entity") {
  const Mesh mesh = build_mesh(2, InterfaceSpec::horizontal(0.5));
  std::ostringstream out;
  write_mesh(mesh, out);
  const std::string text = out.str();
  CHECK(text.rfind("vertex 0 0\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 9 + 8 + 10);
  CHECK(text.find("tri 0 1 4 Fluid") != std::string::npos);
  CHECK(text.find("Interface") != std::string::npos);
}

TEST_CASE("meshing is deterministic") {
  const Mesh a = build_mesh(8, InterfaceSpec::slanted(0.25, 0.75));
  const Mesh b = build_mesh(8, InterfaceSpec::slanted(0.25, 0.75));
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    CHECK(a.vertices[i].x == b.vertices[i].x);
    CHECK(a.vertices[i].y == b.vertices[i].y);
  }
}
