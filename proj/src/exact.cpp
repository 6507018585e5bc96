#include "parasplit/exact.hpp"

#include <cmath>

namespace parasplit {

namespace {
constexpr double kPi = 3.14159265358979323846;

double amplitude(double t) { return std::exp(-2.0 * kPi * kPi * t); }
}  // namespace

double ManufacturedSolution::value(double x, double y, double t) const {
  return amplitude(t) * std::cos(kPi * x) * std::sin(kPi * y);
}

Vec2 ManufacturedSolution::grad(double x, double y, double t) const {
  const double a = amplitude(t);
  return {-kPi * a * std::sin(kPi * x) * std::sin(kPi * y),
          kPi * a * std::cos(kPi * x) * std::cos(kPi * y)};
}

std::array<double, 3> ManufacturedSolution::hess(double x, double y, double t) const {
  const double a = amplitude(t);
  const double pi2 = kPi * kPi;
  return {-pi2 * a * std::cos(kPi * x) * std::sin(kPi * y),
          -pi2 * a * std::sin(kPi * x) * std::cos(kPi * y),
          -pi2 * a * std::cos(kPi * x) * std::sin(kPi * y)};
}

double ManufacturedSolution::dt(double x, double y, double t) const {
  return -2.0 * kPi * kPi * value(x, y, t);
}

double ManufacturedSolution::interface_flux(const InterfaceSpec& spec, double x, double t) const {
  const double y = spec.height_at(x);
  const Vec2 g = grad(x, y, t);
  // The fluid sits below the interface; its outward normal tilts with the slope.
  const double slope = spec.y_right - spec.y_left;
  const double scale = 1.0 / std::sqrt(1.0 + slope * slope);
  return nu_f * scale * (g.y - slope * g.x);
}

ScalarField ManufacturedSolution::slice(double t) const {
  return {
      [*this, t](double x, double y) { return value(x, y, t); },
      [*this, t](double x, double y) { return grad(x, y, t); },
      [*this, t](double x, double y) { return hess(x, y, t); },
  };
}

ScalarField ManufacturedSolution::difference_slice(double t1, double t0) const {
  return {
      [*this, t1, t0](double x, double y) { return value(x, y, t1) - value(x, y, t0); },
      [*this, t1, t0](double x, double y) {
        const Vec2 a = grad(x, y, t1);
        const Vec2 b = grad(x, y, t0);
        return Vec2{a.x - b.x, a.y - b.y};
      },
      [*this, t1, t0](double x, double y) {
        const auto a = hess(x, y, t1);
        const auto b = hess(x, y, t0);
        return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
      },
  };
}

ScalarField ManufacturedSolution::second_difference_slice(double t2, double t1, double t0) const {
  return {
      [*this, t2, t1, t0](double x, double y) {
        return value(x, y, t2) - 2.0 * value(x, y, t1) + value(x, y, t0);
      },
      [*this, t2, t1, t0](double x, double y) {
        const Vec2 a = grad(x, y, t2);
        const Vec2 b = grad(x, y, t1);
        const Vec2 c = grad(x, y, t0);
        return Vec2{a.x - 2.0 * b.x + c.x, a.y - 2.0 * b.y + c.y};
      },
      [*this, t2, t1, t0](double x, double y) {
        const auto a = hess(x, y, t2);
        const auto b = hess(x, y, t1);
        const auto c = hess(x, y, t0);
        return std::array<double, 3>{a[0] - 2.0 * b[0] + c[0], a[1] - 2.0 * b[1] + c[1],
                                     a[2] - 2.0 * b[2] + c[2]};
      },
  };
}

}  // namespace parasplit
