#pragma once

// Fixed-point iteration of the solution map L for one time step and the
// outer time loop.

#include "lcq/assembly.hpp"

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcq {

struct PicardSettings {
  double tol = 1e-10;  ///< max-norm of Q_hat - Q_iter
  int max_iter = 100;
  double relaxation = 1.0;
  /// A stall is an update norm that has not decreased over this many iterations.
  int stall_window = 5;
  double fallback_relaxation = 0.5;
};

struct LinearSolverSettings {
  double tol = 1e-12;
  int max_iter = 0;  ///< 0 selects 10 n
};

struct SimConfig {
  std::string name = "custom";
  RectSpec mesh;
  MaterialParams material;
  TruncationConfig truncation;
  double dt = 0.01;
  double T_final = 2.0;
  PicardSettings picard;
  LinearSolverSettings linear;
  AssemblyOptions quadrature;

  ScalarFunction g;                       ///< boundary data extension g(t, x, y)
  std::array<ScalarFunction, 4> q_initial;  ///< Q_11, Q_12, Q_21, Q_22 at t = 0
  /// Dirichlet data for Q; empty entries mean zero.
  std::array<ScalarFunction, 4> q_boundary;

  std::vector<double> snapshot_times;

  int num_steps() const;
  bool has_q_boundary() const;
  /// Throws std::invalid_argument on hard errors.
  void validate() const;
  /// Violated hypotheses of the stability and solvability theory.
  std::vector<std::string> warnings() const;
};

struct SimState {
  int step = 0;
  double t = 0.0;
  NodalField Q;  ///< 4 components, row-major
  NodalField u;  ///< full potential
  NodalField g;  ///< boundary extension at t
};

struct StepReport {
  int picard_iterations = 0;
  double update_norm = 0.0;
  bool converged = false;
  double relaxation = 1.0;  ///< value in effect at termination
  int elliptic_cg_iterations = 0;
  int q_cg_iterations = 0;
  double max_linear_residual = 0.0;
};

/// Failure of the fixed-point iteration within max_iter; carries the last
/// iterate.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, StepReport report, NodalField last_iterate, int step, double t)
      : std::runtime_error(what), report_(report), last_(std::move(last_iterate)), step_(step), t_(t) {}
  const StepReport& report() const { return report_; }
  const NodalField& last_iterate() const { return last_; }
  int step() const { return step_; }
  double time() const { return t_; }

 private:
  StepReport report_;
  NodalField last_;
  int step_;
  double t_;
};

/// The elliptic system could not be solved (CG breakdown or stagnation).
class ElectricSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// u = u_hat + g with u_hat = 0 on the boundary. `guess` is an optional
/// initial iterate for u_hat.
NodalField solve_electric(const TriMesh& mesh, const NodalField& Q, const NodalField& g, const MaterialParams& p,
                          const TruncationConfig& t, const LinearSolverSettings& lin = {},
                          const AssemblyOptions& opts = {}, const NodalField* guess = nullptr,
                          SolveReport* report = nullptr);

/// Everything that stays fixed across steps for a given configuration.
class Stepper {
 public:
  explicit Stepper(SimConfig cfg);

  const TriMesh& mesh() const { return mesh_; }
  const SimConfig& config() const { return cfg_; }
  const QSystemMatrix& q_system() const { return q_sys_; }

  SimState initial_state() const;
  NodalField boundary_data(double t) const;
  NodalField q_boundary_data(double t) const;

  /// One step: Picard iteration on L until the update falls below tolerance.
  /// Throws NonConvergence.
  std::pair<SimState, StepReport> step(const SimState& state) const;

 private:
  SimConfig cfg_;
  TriMesh mesh_;
  QSystemMatrix q_sys_;
};

std::pair<SimState, StepReport> fixed_point_step(const Stepper& stepper, const SimState& state);

enum class Termination { completed, non_convergence, error };

const char* to_string(Termination t);

struct RunSummary {
  Termination termination = Termination::completed;
  int steps_completed = 0;
  SimState final_state;  ///< last accepted state
  int total_picard_iterations = 0;
  /// dt * sum_n ||(Q^{n+1} - Q^n)/dt||^2_{L2}
  double dissipation_sum = 0.0;
  double failure_time = 0.0;  ///< target time of the failed step
  StepReport failure_report;
  std::string message;
};

/// Called for the initial state (with an empty report) and after every
/// accepted step.
using Observer = std::function<void(const TriMesh&, const SimState&, const StepReport&)>;

/// NonConvergence and elliptic failures end the run and are reported in the
/// summary; configuration errors propagate.
RunSummary run(const SimConfig& cfg, const Observer& observer = {});

}  // namespace lcq
