#pragma once

#include "parasplit/fem.hpp"
#include "parasplit/mesh.hpp"

namespace parasplit {

/// Closed-form solution used for convergence studies:
///   v(x, y, t) = exp(-2 pi^2 t) cos(pi x) sin(pi y)
/// solves dv/dt - div(nu grad v) = 0 on both subdomains for nu_f = nu_s = 1,
/// vanishes on y in {0, 1} and has zero normal derivative on x in {0, 1}.
struct ManufacturedSolution {
  double nu_f = 1.0;
  double nu_s = 1.0;

  double value(double x, double y, double t) const;
  Vec2 grad(double x, double y, double t) const;
  std::array<double, 3> hess(double x, double y, double t) const;  // dxx, dxy, dyy
  double dt(double x, double y, double t) const;

  /// Normal flux nu_f grad(v) . n_f on the interface, with n_f the unit
  /// normal pointing out of the fluid subdomain; x parametrizes the interface.
  double interface_flux(const InterfaceSpec& spec, double x, double t) const;

  ScalarField slice(double t) const;                          // v(., t)
  ScalarField difference_slice(double t1, double t0) const;   // v(., t1) - v(., t0)
  ScalarField second_difference_slice(double t2, double t1, double t0) const;
};

}  // namespace parasplit
