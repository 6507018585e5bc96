#include "parasplit/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace parasplit {

namespace {

struct TriQuadPoint {
  double xi, eta, weight;  // weights sum to the reference area 1/2
};

// Degree-4 rule (6 points), used for assembly.
constexpr double kA4 = 0.445948490915965;
constexpr double kB4 = 0.091576213509771;
constexpr double kWa4 = 0.223381589678011 / 2.0;
constexpr double kWb4 = 0.109951743655322 / 2.0;
constexpr TriQuadPoint kRuleDeg4[] = {
    {kA4, kA4, kWa4},
    {kA4, 1.0 - 2.0 * kA4, kWa4},
    {1.0 - 2.0 * kA4, kA4, kWa4},
    {kB4, kB4, kWb4},
    {kB4, 1.0 - 2.0 * kB4, kWb4},
    {1.0 - 2.0 * kB4, kB4, kWb4},
};

// Degree-6 rule (12 points), used for error norms.
constexpr double kA6 = 0.249286745170910;
constexpr double kB6 = 0.063089014491502;
constexpr double kC6a = 0.310352451033785;
constexpr double kC6b = 0.053145049844816;
constexpr double kWa6 = 0.116786275726379 / 2.0;
constexpr double kWb6 = 0.050844906370207 / 2.0;
constexpr double kWc6 = 0.082851075618374 / 2.0;
constexpr TriQuadPoint kRuleDeg6[] = {
    {kA6, kA6, kWa6},
    {kA6, 1.0 - 2.0 * kA6, kWa6},
    {1.0 - 2.0 * kA6, kA6, kWa6},
    {kB6, kB6, kWb6},
    {kB6, 1.0 - 2.0 * kB6, kWb6},
    {1.0 - 2.0 * kB6, kB6, kWb6},
    {kC6a, kC6b, kWc6},
    {kC6b, kC6a, kWc6},
    {kC6a, 1.0 - kC6a - kC6b, kWc6},
    {kC6b, 1.0 - kC6a - kC6b, kWc6},
    {1.0 - kC6a - kC6b, kC6a, kWc6},
    {1.0 - kC6a - kC6b, kC6b, kWc6},
};

struct EdgeQuadPoint {
  double t, weight;  // weights sum to 1 on [0,1]
};

// 3-point Gauss, exact through degree 5: enough for P2 trace products.
const EdgeQuadPoint kEdgeRule3[] = {
    {0.5 * (1.0 - 0.774596669241483), 5.0 / 18.0},
    {0.5, 8.0 / 18.0},
    {0.5 * (1.0 + 0.774596669241483), 5.0 / 18.0},
};

// 5-point Gauss for interface error integrals.
const EdgeQuadPoint kEdgeRule5[] = {
    {0.5 * (1.0 - 0.906179845938664), 0.236926885056189 / 2.0},
    {0.5 * (1.0 - 0.538469310105683), 0.478628670499366 / 2.0},
    {0.5, 0.568888888888889 / 2.0},
    {0.5 * (1.0 + 0.538469310105683), 0.478628670499366 / 2.0},
    {0.5 * (1.0 + 0.906179845938664), 0.236926885056189 / 2.0},
};

int local_size_for(int degree) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("degree must be 1 or 2");
  return degree == 1 ? 3 : 6;
}

void eval_basis(int degree, double xi, double eta, double* vals) {
  const double l0 = 1.0 - xi - eta;
  if (degree == 1) {
    vals[0] = l0;
    vals[1] = xi;
    vals[2] = eta;
    return;
  }
  vals[0] = l0 * (2.0 * l0 - 1.0);
  vals[1] = xi * (2.0 * xi - 1.0);
  vals[2] = eta * (2.0 * eta - 1.0);
  vals[3] = 4.0 * l0 * xi;
  vals[4] = 4.0 * xi * eta;
  vals[5] = 4.0 * eta * l0;
}

void eval_basis_grad(int degree, double xi, double eta, double grads[][2]) {
  if (degree == 1) {
    grads[0][0] = -1.0; grads[0][1] = -1.0;
    grads[1][0] = 1.0;  grads[1][1] = 0.0;
    grads[2][0] = 0.0;  grads[2][1] = 1.0;
    return;
  }
  const double l0 = 1.0 - xi - eta;
  grads[0][0] = 1.0 - 4.0 * l0;       grads[0][1] = 1.0 - 4.0 * l0;
  grads[1][0] = 4.0 * xi - 1.0;       grads[1][1] = 0.0;
  grads[2][0] = 0.0;                  grads[2][1] = 4.0 * eta - 1.0;
  grads[3][0] = 4.0 * (l0 - xi);      grads[3][1] = -4.0 * xi;
  grads[4][0] = 4.0 * eta;            grads[4][1] = 4.0 * xi;
  grads[5][0] = -4.0 * eta;           grads[5][1] = 4.0 * (l0 - eta);
}

// Constant reference second derivatives (d_xixi, d_xieta, d_etaeta).
void eval_basis_hess(int degree, double hess[][3]) {
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) hess[i][0] = hess[i][1] = hess[i][2] = 0.0;
    return;
  }
  const double table[6][3] = {
      {4.0, 4.0, 4.0}, {4.0, 0.0, 0.0}, {0.0, 0.0, 4.0},
      {-8.0, -4.0, 0.0}, {0.0, 4.0, 0.0}, {0.0, -4.0, -8.0},
  };
  for (int i = 0; i < 6; ++i) {
    hess[i][0] = table[i][0];
    hess[i][1] = table[i][1];
    hess[i][2] = table[i][2];
  }
}

struct ElementGeometry {
  double jac[2][2];
  double inv[2][2];  // J^{-1}
  double det;
};

ElementGeometry element_geometry(const std::array<Vec2, 3>& v) {
  ElementGeometry g;
  g.jac[0][0] = v[1].x - v[0].x;
  g.jac[0][1] = v[2].x - v[0].x;
  g.jac[1][0] = v[1].y - v[0].y;
  g.jac[1][1] = v[2].y - v[0].y;
  g.det = g.jac[0][0] * g.jac[1][1] - g.jac[0][1] * g.jac[1][0];
  if (g.det <= 0.0) throw std::invalid_argument("degenerate or inverted triangle");
  g.inv[0][0] = g.jac[1][1] / g.det;
  g.inv[0][1] = -g.jac[0][1] / g.det;
  g.inv[1][0] = -g.jac[1][0] / g.det;
  g.inv[1][1] = g.jac[0][0] / g.det;
  return g;
}

std::array<Vec2, 3> triangle_coords(const Mesh& mesh, int tri) {
  const Triangle& t = mesh.triangles[tri];
  return {mesh.vertices[t.v[0]], mesh.vertices[t.v[1]], mesh.vertices[t.v[2]]};
}

// 1D trace basis on an interface edge, parametrized by t in [0,1] from the
// left endpoint; order (left vertex, right vertex[, midpoint]).
void eval_trace_basis(int degree, double t, double* vals) {
  if (degree == 1) {
    vals[0] = 1.0 - t;
    vals[1] = t;
    return;
  }
  vals[0] = (1.0 - t) * (1.0 - 2.0 * t);
  vals[1] = t * (2.0 * t - 1.0);
  vals[2] = 4.0 * t * (1.0 - t);
}

// Trace positions touched by interface edge k, matching eval_trace_basis order.
void trace_positions(int degree, int edge, int* pos) {
  if (degree == 1) {
    pos[0] = edge;
    pos[1] = edge + 1;
    return;
  }
  pos[0] = 2 * edge;
  pos[1] = 2 * edge + 2;
  pos[2] = 2 * edge + 1;
}

}  // namespace

Space build_space(const Mesh& mesh, Subdomain subdomain, int degree) {
  Space space;
  space.mesh = &mesh;
  space.subdomain = subdomain;
  space.degree = degree;
  space.local_size = local_size_for(degree);

  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (mesh.triangles[t].tag == subdomain) space.element_tris.push_back(t);
  }

  std::vector<int> vertex_local(mesh.vertices.size(), -1);
  for (int t : space.element_tris) {
    for (int v : mesh.triangles[t].v) vertex_local[v] = 0;
  }
  int next = 0;
  for (std::size_t v = 0; v < vertex_local.size(); ++v) {
    if (vertex_local[v] == 0) {
      vertex_local[v] = next++;
      space.dof_coords.push_back(mesh.vertices[v]);
    } else {
      vertex_local[v] = -1;
    }
  }

  std::map<std::pair<int, int>, int> edge_local;
  if (degree == 2) {
    for (int t : space.element_tris) {
      const auto& v = mesh.triangles[t].v;
      for (int e = 0; e < 3; ++e) {
        const int a = v[e];
        const int b = v[(e + 1) % 3];
        edge_local.emplace(std::minmax(a, b), -1);
      }
    }
    for (auto& [key, id] : edge_local) {
      id = next++;
      const Vec2 pa = mesh.vertices[key.first];
      const Vec2 pb = mesh.vertices[key.second];
      space.dof_coords.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    }
  }
  space.dof_count = next;

  space.element_dofs.reserve(space.element_tris.size());
  for (int t : space.element_tris) {
    const auto& v = mesh.triangles[t].v;
    std::array<int, 6> dofs{};
    dofs[0] = vertex_local[v[0]];
    dofs[1] = vertex_local[v[1]];
    dofs[2] = vertex_local[v[2]];
    if (degree == 2) {
      dofs[3] = edge_local.at(std::minmax(v[0], v[1]));
      dofs[4] = edge_local.at(std::minmax(v[1], v[2]));
      dofs[5] = edge_local.at(std::minmax(v[2], v[0]));
    }
    space.element_dofs.push_back(dofs);
  }

  // Interface dofs left to right; degree 2 interleaves edge midpoints.
  for (int c = 0; c <= mesh.n; ++c) {
    space.interface_dofs.push_back(vertex_local[mesh.vertex_id(c, mesh.interface_row)]);
    if (degree == 2 && c < mesh.n) {
      const int a = mesh.vertex_id(c, mesh.interface_row);
      const int b = mesh.vertex_id(c + 1, mesh.interface_row);
      space.interface_dofs.push_back(edge_local.at(std::minmax(a, b)));
    }
  }
  for (int d : space.interface_dofs) {
    if (d < 0) throw std::logic_error("interface dof missing from subdomain space");
  }

  const int dirichlet_row = subdomain == Subdomain::Fluid ? 0 : mesh.n;
  for (int c = 0; c <= mesh.n; ++c) {
    space.dirichlet_dofs.push_back(vertex_local[mesh.vertex_id(c, dirichlet_row)]);
    if (degree == 2 && c < mesh.n) {
      const int a = mesh.vertex_id(c, dirichlet_row);
      const int b = mesh.vertex_id(c + 1, dirichlet_row);
      space.dirichlet_dofs.push_back(edge_local.at(std::minmax(a, b)));
    }
  }
  std::sort(space.dirichlet_dofs.begin(), space.dirichlet_dofs.end());

  return space;
}

DenseMatrix element_mass(const std::array<Vec2, 3>& verts, int degree) {
  const int k = local_size_for(degree);
  const ElementGeometry geo = element_geometry(verts);
  DenseMatrix m(k, k);
  double vals[6];
  for (const TriQuadPoint& q : kRuleDeg4) {
    eval_basis(degree, q.xi, q.eta, vals);
    const double w = q.weight * geo.det;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) m(i, j) += w * vals[i] * vals[j];
    }
  }
  return m;
}

DenseMatrix element_stiffness(const std::array<Vec2, 3>& verts, int degree) {
  const int k = local_size_for(degree);
  const ElementGeometry geo = element_geometry(verts);
  DenseMatrix s(k, k);
  double grads[6][2];
  double phys[6][2];
  for (const TriQuadPoint& q : kRuleDeg4) {
    eval_basis_grad(degree, q.xi, q.eta, grads);
    for (int i = 0; i < k; ++i) {
      phys[i][0] = geo.inv[0][0] * grads[i][0] + geo.inv[1][0] * grads[i][1];
      phys[i][1] = geo.inv[0][1] * grads[i][0] + geo.inv[1][1] * grads[i][1];
    }
    const double w = q.weight * geo.det;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) s(i, j) += w * (phys[i][0] * phys[j][0] + phys[i][1] * phys[j][1]);
    }
  }
  return s;
}

DenseMatrix edge_mass(const Vec2& a, const Vec2& b, int degree) {
  const int k = degree == 1 ? 2 : 3;
  if (degree != 1 && degree != 2) throw std::invalid_argument("degree must be 1 or 2");
  const double length = std::hypot(b.x - a.x, b.y - a.y);
  DenseMatrix m(k, k);
  double vals[3];
  for (const EdgeQuadPoint& q : kEdgeRule3) {
    eval_trace_basis(degree, q.t, vals);
    const double w = q.weight * length;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) m(i, j) += w * vals[i] * vals[j];
    }
  }
  return m;
}

namespace {

SparseMatrix assemble_volume(const Space& space, bool stiffness) {
  std::vector<Triplet> entries;
  entries.reserve(space.element_tris.size() * space.local_size * space.local_size);
  for (std::size_t e = 0; e < space.element_tris.size(); ++e) {
    const auto coords = triangle_coords(*space.mesh, space.element_tris[e]);
    const DenseMatrix local =
        stiffness ? element_stiffness(coords, space.degree) : element_mass(coords, space.degree);
    const auto& dofs = space.element_dofs[e];
    for (int i = 0; i < space.local_size; ++i) {
      for (int j = 0; j < space.local_size; ++j) {
        entries.push_back({dofs[i], dofs[j], local(i, j)});
      }
    }
  }
  return SparseMatrix::from_triplets(space.dof_count, space.dof_count, std::move(entries));
}

}  // namespace

SparseMatrix assemble_mass(const Space& space) { return assemble_volume(space, false); }

SparseMatrix assemble_stiffness(const Space& space) { return assemble_volume(space, true); }

SparseMatrix assemble_interface_mass(const Space& rows, const Space& cols) {
  if (rows.mesh != cols.mesh) throw std::invalid_argument("interface mass: spaces from different meshes");
  if (rows.trace_count() != cols.trace_count() || rows.degree != cols.degree) {
    throw std::invalid_argument("interface mass: trace spaces do not match");
  }
  for (int k = 0; k < rows.trace_count(); ++k) {
    const Vec2 a = rows.dof_coords[rows.interface_dofs[k]];
    const Vec2 b = cols.dof_coords[cols.interface_dofs[k]];
    if (std::abs(a.x - b.x) > 1e-12 || std::abs(a.y - b.y) > 1e-12) {
      throw std::invalid_argument("interface mass: trace dof locations differ");
    }
  }

  const Mesh& mesh = *rows.mesh;
  const int k = rows.degree == 1 ? 2 : 3;
  std::vector<Triplet> entries;
  int pos[3];
  for (std::size_t e = 0; e < mesh.interface_edges.size(); ++e) {
    const Facet& edge = mesh.interface_edges[e];
    const DenseMatrix local = edge_mass(mesh.vertices[edge.v[0]], mesh.vertices[edge.v[1]], rows.degree);
    trace_positions(rows.degree, static_cast<int>(e), pos);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) entries.push_back({pos[i], pos[j], local(i, j)});
    }
  }
  return SparseMatrix::from_triplets(rows.trace_count(), rows.trace_count(), std::move(entries));
}

Vector assemble_load(const Space& space, const std::function<double(double, double)>& f) {
  Vector load(space.dof_count, 0.0);
  double vals[6];
  for (std::size_t e = 0; e < space.element_tris.size(); ++e) {
    const auto coords = triangle_coords(*space.mesh, space.element_tris[e]);
    const ElementGeometry geo = element_geometry(coords);
    const auto& dofs = space.element_dofs[e];
    for (const TriQuadPoint& q : kRuleDeg4) {
      eval_basis(space.degree, q.xi, q.eta, vals);
      const double x = coords[0].x + geo.jac[0][0] * q.xi + geo.jac[0][1] * q.eta;
      const double y = coords[0].y + geo.jac[1][0] * q.xi + geo.jac[1][1] * q.eta;
      const double w = q.weight * geo.det * f(x, y);
      for (int i = 0; i < space.local_size; ++i) load[dofs[i]] += w * vals[i];
    }
  }
  return load;
}

Vector assemble_interface_load(const Space& space, const std::function<double(double, double)>& g) {
  const Mesh& mesh = *space.mesh;
  Vector load(space.trace_count(), 0.0);
  const int k = space.degree == 1 ? 2 : 3;
  double vals[3];
  int pos[3];
  for (std::size_t e = 0; e < mesh.interface_edges.size(); ++e) {
    const Facet& edge = mesh.interface_edges[e];
    const Vec2 a = mesh.vertices[edge.v[0]];
    const Vec2 b = mesh.vertices[edge.v[1]];
    const double length = std::hypot(b.x - a.x, b.y - a.y);
    trace_positions(space.degree, static_cast<int>(e), pos);
    for (const EdgeQuadPoint& q : kEdgeRule3) {
      eval_trace_basis(space.degree, q.t, vals);
      const double w = q.weight * length * g(a.x + q.t * (b.x - a.x), a.y + q.t * (b.y - a.y));
      for (int i = 0; i < k; ++i) load[pos[i]] += w * vals[i];
    }
  }
  return load;
}

Vector l2_project_interface(const Space& space, const std::function<double(double, double)>& g) {
  const SparseMatrix b = assemble_interface_mass(space, space);
  return cg_solve(b, assemble_interface_load(space, g), 1e-14).x;
}

Vector interpolate(const Space& space, const std::function<double(double, double)>& f) {
  Vector coeffs(space.dof_count);
  for (int i = 0; i < space.dof_count; ++i) coeffs[i] = f(space.dof_coords[i].x, space.dof_coords[i].y);
  return coeffs;
}

Norms error_norms(const Space& space, const Vector& coefficients, const ScalarField& g) {
  if (static_cast<int>(coefficients.size()) != space.dof_count) {
    throw std::invalid_argument("error_norms: coefficient size mismatch");
  }
  if (!g.value) throw std::invalid_argument("error_norms: field has no value function");
  const bool with_h1 = static_cast<bool>(g.grad);
  const bool with_h2 = space.degree == 2 && static_cast<bool>(g.hess);

  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double vals[6];
  double grads[6][2];
  double ref_hess[6][3];
  eval_basis_hess(space.degree, ref_hess);

  for (std::size_t e = 0; e < space.element_tris.size(); ++e) {
    const auto coords = triangle_coords(*space.mesh, space.element_tris[e]);
    const ElementGeometry geo = element_geometry(coords);
    const auto& dofs = space.element_dofs[e];

    // Constant physical Hessian of u_h on this element: J^{-T} H_ref J^{-1}.
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;
    if (with_h2) {
      double r[3] = {0.0, 0.0, 0.0};
      for (int i = 0; i < space.local_size; ++i) {
        const double c = coefficients[dofs[i]];
        r[0] += c * ref_hess[i][0];
        r[1] += c * ref_hess[i][1];
        r[2] += c * ref_hess[i][2];
      }
      const double a00 = geo.inv[0][0], a01 = geo.inv[0][1];
      const double a10 = geo.inv[1][0], a11 = geo.inv[1][1];
      hxx = a00 * (r[0] * a00 + r[1] * a10) + a10 * (r[1] * a00 + r[2] * a10);
      hxy = a00 * (r[0] * a01 + r[1] * a11) + a10 * (r[1] * a01 + r[2] * a11);
      hyy = a01 * (r[0] * a01 + r[1] * a11) + a11 * (r[1] * a01 + r[2] * a11);
    }

    for (const TriQuadPoint& q : kRuleDeg6) {
      eval_basis(space.degree, q.xi, q.eta, vals);
      const double x = coords[0].x + geo.jac[0][0] * q.xi + geo.jac[0][1] * q.eta;
      const double y = coords[0].y + geo.jac[1][0] * q.xi + geo.jac[1][1] * q.eta;
      const double w = q.weight * geo.det;

      double uh = 0.0;
      for (int i = 0; i < space.local_size; ++i) uh += coefficients[dofs[i]] * vals[i];
      const double dv = uh - g.value(x, y);
      l2 += w * dv * dv;

      if (with_h1) {
        eval_basis_grad(space.degree, q.xi, q.eta, grads);
        double gx = 0.0, gy = 0.0;
        for (int i = 0; i < space.local_size; ++i) {
          const double c = coefficients[dofs[i]];
          gx += c * (geo.inv[0][0] * grads[i][0] + geo.inv[1][0] * grads[i][1]);
          gy += c * (geo.inv[0][1] * grads[i][0] + geo.inv[1][1] * grads[i][1]);
        }
        const Vec2 gg = g.grad(x, y);
        const double dx = gx - gg.x;
        const double dy = gy - gg.y;
        h1 += w * (dx * dx + dy * dy);
        if (with_h2) {
          const std::array<double, 3> gh = g.hess(x, y);
          const double exx = hxx - gh[0];
          const double exy = hxy - gh[1];
          const double eyy = hyy - gh[2];
          h2 += w * (exx * exx + 2.0 * exy * exy + eyy * eyy);
        }
      }
    }
  }

  Norms norms;
  norms.l2 = std::sqrt(l2);
  norms.h1semi = with_h1 ? std::sqrt(h1) : 0.0;
  if (with_h2) norms.h2broken = std::sqrt(l2 + h1 + h2);
  return norms;
}

double interface_l2_error(const Space& space, const Vector& trace_coefficients,
                          const std::function<double(double, double)>& g) {
  if (static_cast<int>(trace_coefficients.size()) != space.trace_count()) {
    throw std::invalid_argument("interface_l2_error: trace coefficient size mismatch");
  }
  const Mesh& mesh = *space.mesh;
  const int k = space.degree == 1 ? 2 : 3;
  double vals[3];
  int pos[3];
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.interface_edges.size(); ++e) {
    const Facet& edge = mesh.interface_edges[e];
    const Vec2 a = mesh.vertices[edge.v[0]];
    const Vec2 b = mesh.vertices[edge.v[1]];
    const double length = std::hypot(b.x - a.x, b.y - a.y);
    trace_positions(space.degree, static_cast<int>(e), pos);
    for (const EdgeQuadPoint& q : kEdgeRule5) {
      eval_trace_basis(space.degree, q.t, vals);
      double lh = 0.0;
      for (int i = 0; i < k; ++i) lh += trace_coefficients[pos[i]] * vals[i];
      const double d = lh - g(a.x + q.t * (b.x - a.x), a.y + q.t * (b.y - a.y));
      total += q.weight * length * d * d;
    }
  }
  return std::sqrt(total);
}

void apply_dirichlet(SparseMatrix& a, Vector& rhs, std::span<const int> dofs,
                     std::span<const double> values) {
  if (!values.empty() && values.size() != dofs.size()) {
    throw std::invalid_argument("apply_dirichlet: one value per dof required");
  }
  const int n = a.rows();
  std::vector<char> fixed(n, 0);
  Vector value(n, 0.0);
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    fixed[dofs[i]] = 1;
    value[dofs[i]] = values.empty() ? 0.0 : values[i];
  }

  const auto& row_ptr = a.row_ptr();
  const auto& col_idx = a.col_idx();
  auto& vals = a.values();
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const int j = col_idx[k];
      if (fixed[i]) {
        vals[k] = i == j ? 1.0 : 0.0;
      } else if (fixed[j]) {
        rhs[i] -= vals[k] * value[j];
        vals[k] = 0.0;
      }
    }
  }
  for (std::size_t i = 0; i < dofs.size(); ++i) rhs[dofs[i]] = value[dofs[i]];
}

}  // namespace parasplit
