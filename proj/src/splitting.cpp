#include "parasplit/splitting.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace parasplit {

void PhysicsParams::validate() const {
  if (!(nu_f > 0.0) || !(nu_s > 0.0)) throw std::invalid_argument("diffusivities must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("Robin parameter must be positive");
  if (!(dt > 0.0) || steps <= 0) throw std::invalid_argument("time step and step count must be positive");
  if (std::abs(steps * dt - t_final) > 1e-12) {
    throw std::invalid_argument("steps * dt must equal the final time");
  }
}

PhysicsParams PhysicsParams::uniform_steps(double nu_f, double nu_s, double alpha, double t_final,
                                           int steps) {
  PhysicsParams p;
  p.nu_f = nu_f;
  p.nu_s = nu_s;
  p.alpha = alpha;
  p.t_final = t_final;
  p.steps = steps;
  p.dt = t_final / steps;
  p.validate();
  return p;
}

Vector AssembledForms::trace_of_solid(const Vector& w) const {
  Vector t(solid.interface_dofs.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = w[solid.interface_dofs[k]];
  return t;
}

Vector AssembledForms::trace_of_fluid(const Vector& u) const {
  Vector t(fluid.interface_dofs.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = u[fluid.interface_dofs[k]];
  return t;
}

AssembledForms assemble_forms(const Mesh& mesh, int degree) {
  AssembledForms f;
  f.solid = build_space(mesh, Subdomain::Solid, degree);
  f.fluid = build_space(mesh, Subdomain::Fluid, degree);
  f.mass_s = assemble_mass(f.solid);
  f.stiffness_s = assemble_stiffness(f.solid);
  f.mass_f = assemble_mass(f.fluid);
  f.stiffness_f = assemble_stiffness(f.fluid);
  f.trace_mass = assemble_interface_mass(f.fluid, f.solid);
  return f;
}

void SolveStats::record(int iterations) {
  solves += 1;
  total_iterations += iterations;
  max_iterations = std::max(max_iterations, iterations);
}

namespace {

// M/dt + nu K + alpha B embedded at the interface dofs, Dirichlet-eliminated.
SparseMatrix build_step_system(const Space& space, const SparseMatrix& mass,
                               const SparseMatrix& stiffness, const SparseMatrix& trace_mass,
                               double dt, double nu, double alpha) {
  std::vector<Triplet> entries;
  entries.reserve(mass.nnz() + stiffness.nnz() + trace_mass.nnz());
  mass.for_each([&](int i, int j, double v) { entries.push_back({i, j, v / dt}); });
  stiffness.for_each([&](int i, int j, double v) { entries.push_back({i, j, nu * v}); });
  trace_mass.for_each([&](int i, int j, double v) {
    entries.push_back({space.interface_dofs[i], space.interface_dofs[j], alpha * v});
  });
  SparseMatrix system = SparseMatrix::from_triplets(space.dof_count, space.dof_count, std::move(entries));
  Vector dummy(space.dof_count, 0.0);
  apply_dirichlet(system, dummy, space.dirichlet_dofs);
  return system;
}

void add_at(Vector& target, const std::vector<int>& positions, const Vector& values, double scale) {
  for (std::size_t k = 0; k < positions.size(); ++k) target[positions[k]] += scale * values[k];
}

void zero_at(Vector& target, const std::vector<int>& positions) {
  for (int p : positions) target[p] = 0.0;
}

}  // namespace

RobinRobinStepper::RobinRobinStepper(const AssembledForms& forms, const PhysicsParams& params,
                                     ResidualInjection injection, double cg_tol)
    : forms_(forms), params_(params), injection_(std::move(injection)), cg_tol_(cg_tol) {
  params_.validate();
  system_s_ = build_step_system(forms_.solid, forms_.mass_s, forms_.stiffness_s, forms_.trace_mass,
                                params_.dt, params_.nu_s, params_.alpha);
  system_f_ = build_step_system(forms_.fluid, forms_.mass_f, forms_.stiffness_f, forms_.trace_mass,
                                params_.dt, params_.nu_f, params_.alpha);
}

SplitState RobinRobinStepper::zero_state() const {
  SplitState s;
  s.w.assign(forms_.solid.dof_count, 0.0);
  s.u.assign(forms_.fluid.dof_count, 0.0);
  s.lambda.assign(forms_.fluid.interface_dofs.size(), 0.0);
  return s;
}

SplitState RobinRobinStepper::initial_state(const ManufacturedSolution& sol, Lambda0Mode mode) const {
  SplitState s;
  s.w = interpolate(forms_.solid, [&](double x, double y) { return sol.value(x, y, 0.0); });
  s.u = interpolate(forms_.fluid, [&](double x, double y) { return sol.value(x, y, 0.0); });
  zero_at(s.w, forms_.solid.dirichlet_dofs);
  zero_at(s.u, forms_.fluid.dirichlet_dofs);
  if (mode == Lambda0Mode::InterfaceFlux) {
    const InterfaceSpec& spec = forms_.fluid.mesh->interface;
    s.lambda = l2_project_interface(
        forms_.fluid, [&](double x, double) { return sol.interface_flux(spec, x, 0.0); });
  } else {
    s.lambda.assign(forms_.fluid.interface_dofs.size(), 0.0);
  }
  return s;
}

StepLoads RobinRobinStepper::assemble_loads(double t_new) const {
  StepLoads loads;
  loads.t_new = t_new;
  const int n_trace = forms_.fluid.trace_count();
  loads.volume_s = injection_.b1
                       ? assemble_load(forms_.solid, [&](double x, double y) { return injection_.b1(x, y, t_new); })
                       : Vector(forms_.solid.dof_count, 0.0);
  loads.volume_f = injection_.b2
                       ? assemble_load(forms_.fluid, [&](double x, double y) { return injection_.b2(x, y, t_new); })
                       : Vector(forms_.fluid.dof_count, 0.0);
  loads.interface_s =
      injection_.eps1
          ? assemble_interface_load(forms_.solid, [&](double x, double y) { return injection_.eps1(x, y, t_new); })
          : Vector(n_trace, 0.0);
  if (injection_.eps2) {
    const Vector moments = assemble_interface_load(
        forms_.fluid, [&](double x, double y) { return injection_.eps2(x, y, t_new); });
    loads.eps2_coefficients = cg_solve(forms_.trace_mass, moments, 1e-14).x;
    loads.interface_f = forms_.trace_mass.multiply(loads.eps2_coefficients);
  } else {
    loads.eps2_coefficients.assign(n_trace, 0.0);
    loads.interface_f.assign(n_trace, 0.0);
  }
  return loads;
}

Vector RobinRobinStepper::solid_rhs(const SplitState& state, const StepLoads& loads) const {
  Vector rhs = forms_.mass_s.multiply(state.w);
  const double inv_dt = 1.0 / params_.dt;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = rhs[i] * inv_dt + loads.volume_s[i];

  // alpha <u^n, z> - <lambda^n, z> + <eps1, z> on the interface
  Vector trace_rhs = forms_.trace_mass.multiply(forms_.trace_of_fluid(state.u));
  const Vector b_lambda = forms_.trace_mass.multiply(state.lambda);
  for (std::size_t k = 0; k < trace_rhs.size(); ++k) {
    trace_rhs[k] = params_.alpha * trace_rhs[k] - b_lambda[k] + loads.interface_s[k];
  }
  add_at(rhs, forms_.solid.interface_dofs, trace_rhs, 1.0);
  zero_at(rhs, forms_.solid.dirichlet_dofs);
  return rhs;
}

Vector RobinRobinStepper::fluid_rhs(const SplitState& state, const Vector& w_new,
                                    const StepLoads& loads) const {
  Vector rhs = forms_.mass_f.multiply(state.u);
  const double inv_dt = 1.0 / params_.dt;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = rhs[i] * inv_dt + loads.volume_f[i];

  // alpha <w^{n+1}, v> + <lambda^n, v> + <eps2, v> on the interface
  Vector trace_rhs = forms_.trace_mass.multiply(forms_.trace_of_solid(w_new));
  const Vector b_lambda = forms_.trace_mass.multiply(state.lambda);
  for (std::size_t k = 0; k < trace_rhs.size(); ++k) {
    trace_rhs[k] = params_.alpha * trace_rhs[k] + b_lambda[k] + loads.interface_f[k];
  }
  add_at(rhs, forms_.fluid.interface_dofs, trace_rhs, 1.0);
  zero_at(rhs, forms_.fluid.dirichlet_dofs);
  return rhs;
}

Vector RobinRobinStepper::solid_step(const SplitState& state, const StepLoads& loads) const {
  CgResult res = cg_solve(system_s_, solid_rhs(state, loads), cg_tol_, 0, &state.w);
  stats_.record(res.iterations);
  return std::move(res.x);
}

Vector RobinRobinStepper::fluid_step(const SplitState& state, const Vector& w_new,
                                     const StepLoads& loads) const {
  CgResult res = cg_solve(system_f_, fluid_rhs(state, w_new, loads), cg_tol_, 0, &state.u);
  stats_.record(res.iterations);
  return std::move(res.x);
}

Vector RobinRobinStepper::lambda_update(const SplitState& state, const Vector& w_new,
                                        const Vector& u_new, const StepLoads& loads) const {
  const Vector trace_w = forms_.trace_of_solid(w_new);
  const Vector trace_u = forms_.trace_of_fluid(u_new);
  Vector lambda(state.lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    lambda[k] = state.lambda[k] - params_.alpha * (trace_u[k] - trace_w[k]) + loads.eps2_coefficients[k];
  }
  return lambda;
}

SplitState RobinRobinStepper::step(const SplitState& state, const StepLoads& loads) const {
  SplitState next;
  next.step = state.step + 1;
  next.w = solid_step(state, loads);
  next.u = fluid_step(state, next.w, loads);
  next.lambda = lambda_update(state, next.w, next.u, loads);
  return next;
}

SplitState RobinRobinStepper::step(const SplitState& state) const {
  return step(state, assemble_loads((state.step + 1) * params_.dt));
}

RunResult run_splitting(const RobinRobinStepper& stepper, SplitState state,
                        const StepCallback& on_step) {
  RunResult result;
  result.last.push_back(std::move(state));
  for (int n = 0; n < stepper.params().steps; ++n) {
    const SplitState& prev = result.last.back();
    const StepLoads loads = stepper.assemble_loads((prev.step + 1) * stepper.params().dt);
    SplitState next = stepper.step(prev, loads);
    if (on_step) on_step(prev, next, loads);
    result.last.push_back(std::move(next));
    if (result.last.size() > 3) result.last.erase(result.last.begin());
  }
  result.stats = stepper.stats();
  return result;
}

}  // namespace parasplit
