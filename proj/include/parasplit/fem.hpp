#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>

#include "parasplit/linalg.hpp"
#include "parasplit/mesh.hpp"

namespace parasplit {

/// Scalar field with the derivatives needed by the error norms. `grad` and
/// `hess` may be left empty when only L2 quantities are requested; `hess`
/// packs (dxx, dxy, dyy).
struct ScalarField {
  std::function<double(double, double)> value;
  std::function<Vec2(double, double)> grad;
  std::function<std::array<double, 3>(double, double)> hess;
};

/// Continuous Lagrange space (degree 1 or 2) on one subdomain. Vertex dofs
/// come first in ascending mesh-vertex order, then (for degree 2) edge
/// midpoint dofs in ascending edge order. Interface dofs are listed left to
/// right along the interface; matching spaces on the two subdomains therefore
/// enumerate the same physical points in the same order.
struct Space {
  const Mesh* mesh = nullptr;
  Subdomain subdomain = Subdomain::Fluid;
  int degree = 1;
  int dof_count = 0;
  int local_size = 3;                           // dofs per element
  std::vector<Vec2> dof_coords;
  std::vector<int> element_tris;                // mesh triangle index per element
  std::vector<std::array<int, 6>> element_dofs; // first local_size entries used
  std::vector<int> interface_dofs;
  std::vector<int> dirichlet_dofs;

  int trace_count() const { return static_cast<int>(interface_dofs.size()); }
};

Space build_space(const Mesh& mesh, Subdomain subdomain, int degree);

SparseMatrix assemble_mass(const Space& space);
SparseMatrix assemble_stiffness(const Space& space);

/// Interface mass over trace positions (row i, col j) = integral over Sigma
/// of psi_i psi_j ds, with psi the trace basis of the given spaces. Trace dof
/// locations of `rows` and `cols` must coincide; pass the same space twice for
/// B_Sigma or the two subdomain spaces for the coupling matrix.
SparseMatrix assemble_interface_mass(const Space& rows, const Space& cols);

/// Volume load vector: (f, phi_i) over the subdomain.
Vector assemble_load(const Space& space, const std::function<double(double, double)>& f);

/// Interface moment vector over trace positions: integral of g psi_i ds.
Vector assemble_interface_load(const Space& space, const std::function<double(double, double)>& g);

/// L2(Sigma) projection of g onto the trace space.
Vector l2_project_interface(const Space& space, const std::function<double(double, double)>& g);

/// Nodal interpolation.
Vector interpolate(const Space& space, const std::function<double(double, double)>& f);

struct Norms {
  double l2 = 0.0;
  double h1semi = 0.0;
  std::optional<double> h2broken;  // full broken H2 norm, degree 2 only
};

/// Norms of (u_h - g) with u_h given by coefficients. Uses a degree-6
/// triangle rule so the quadrature error stays below the discretization
/// error at every level of interest.
Norms error_norms(const Space& space, const Vector& coefficients, const ScalarField& g);

/// L2(Sigma) distance between a trace-space function and g.
double interface_l2_error(const Space& space, const Vector& trace_coefficients,
                          const std::function<double(double, double)>& g);

/// Symmetric row/column elimination of Dirichlet dofs: unit diagonal, zero
/// off-diagonals, right-hand side corrected with the prescribed values
/// (empty `values` means homogeneous).
void apply_dirichlet(SparseMatrix& a, Vector& rhs, std::span<const int> dofs,
                     std::span<const double> values = {});

// Element kernels, exposed so they can be pinned against closed-form values.
DenseMatrix element_mass(const std::array<Vec2, 3>& verts, int degree);
DenseMatrix element_stiffness(const std::array<Vec2, 3>& verts, int degree);
DenseMatrix edge_mass(const Vec2& a, const Vec2& b, int degree);

}  // namespace parasplit
