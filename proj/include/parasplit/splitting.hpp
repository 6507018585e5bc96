#pragma once

#include <functional>

#include "parasplit/exact.hpp"
#include "parasplit/fem.hpp"

namespace parasplit {

struct PhysicsParams {
  double nu_f = 1.0;
  double nu_s = 1.0;
  double alpha = 4.0;   // Robin parameter
  double dt = 0.0;
  double t_final = 0.25;
  int steps = 0;

  void validate() const;
  static PhysicsParams uniform_steps(double nu_f, double nu_s, double alpha, double t_final, int steps);
};

using TimeField = std::function<double(double x, double y, double t)>;

/// Residuals injected into the stepped equations (empty means zero): volume
/// loads b1 (solid), b2 (fluid), interface load eps1 in the solid equation,
/// and eps2, the residual of the multiplier update. eps2 must be evaluable on
/// the whole fluid subdomain so its volume norms exist for the stability
/// functional; the stepper itself only uses its trace.
struct ResidualInjection {
  TimeField b1;
  TimeField b2;
  TimeField eps1;
  TimeField eps2;

  bool empty() const { return !b1 && !b2 && !eps1 && !eps2; }
};

enum class Lambda0Mode {
  InterfaceFlux,  // L2(Sigma) projection of the initial flux
  Zero,
};

struct SplitState {
  int step = 0;
  Vector w;       // solid
  Vector u;       // fluid
  Vector lambda;  // multiplier, trace coefficients
};

/// Mesh-level objects shared by both schemes.
struct AssembledForms {
  Space solid;
  Space fluid;
  SparseMatrix mass_s, stiffness_s;
  SparseMatrix mass_f, stiffness_f;
  SparseMatrix trace_mass;  // B_Sigma over trace positions

  Vector trace_of_solid(const Vector& w) const;
  Vector trace_of_fluid(const Vector& u) const;
};

AssembledForms assemble_forms(const Mesh& mesh, int degree);

/// Discrete realization of the injected data at one time level. The eps2
/// load is B * eps2_coefficients by construction, so the same trace-space
/// object feeds the fluid solve and the multiplier update; this is what makes
/// the per-step energy identity hold to round-off.
struct StepLoads {
  double t_new = 0.0;
  Vector volume_s;      // (b1, phi) over the solid
  Vector volume_f;      // (b2, phi) over the fluid
  Vector interface_s;   // <eps1, psi> moments
  Vector interface_f;   // B * eps2_coefficients
  Vector eps2_coefficients;
};

struct SolveStats {
  int solves = 0;
  long long total_iterations = 0;
  int max_iterations = 0;

  void record(int iterations);
};

/// One loosely coupled step: solid solve with Robin data from the previous
/// fluid state, fluid solve with Robin data from the new solid state, then an
/// algebraic multiplier update. No subiterations.
class RobinRobinStepper {
 public:
  RobinRobinStepper(const AssembledForms& forms, const PhysicsParams& params,
                    ResidualInjection injection = {}, double cg_tol = 1e-12);

  SplitState zero_state() const;
  SplitState initial_state(const ManufacturedSolution& sol, Lambda0Mode mode) const;

  StepLoads assemble_loads(double t_new) const;
  Vector solid_step(const SplitState& state, const StepLoads& loads) const;
  Vector fluid_step(const SplitState& state, const Vector& w_new, const StepLoads& loads) const;
  Vector lambda_update(const SplitState& state, const Vector& w_new, const Vector& u_new,
                       const StepLoads& loads) const;
  SplitState step(const SplitState& state, const StepLoads& loads) const;
  SplitState step(const SplitState& state) const;

  // Assembled step systems and right-hand sides, exposed for oracle checks.
  const SparseMatrix& solid_system() const { return system_s_; }
  const SparseMatrix& fluid_system() const { return system_f_; }
  Vector solid_rhs(const SplitState& state, const StepLoads& loads) const;
  Vector fluid_rhs(const SplitState& state, const Vector& w_new, const StepLoads& loads) const;

  const AssembledForms& forms() const { return forms_; }
  const PhysicsParams& params() const { return params_; }
  const ResidualInjection& injection() const { return injection_; }
  SolveStats& stats() const { return stats_; }

 private:
  const AssembledForms& forms_;
  PhysicsParams params_;
  ResidualInjection injection_;
  double cg_tol_;
  SparseMatrix system_s_;  // M_s/dt + nu_s K_s + alpha B, Dirichlet rows eliminated
  SparseMatrix system_f_;
  mutable SolveStats stats_;
};

struct RunResult {
  std::vector<SplitState> last;  // up to the three most recent states, oldest first
  SolveStats stats;
  double max_interface_jump = 0.0;  // filled by the monolithic runner

  const SplitState& final_state() const { return last.back(); }
};

using StepCallback =
    std::function<void(const SplitState& prev, const SplitState& next, const StepLoads& loads)>;

/// March params.steps steps from `state`, keeping a three-deep ring of states.
RunResult run_splitting(const RobinRobinStepper& stepper, SplitState state,
                        const StepCallback& on_step = {});

}  // namespace parasplit
