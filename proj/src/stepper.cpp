#include "lcq/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lcq {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

int SimConfig::num_steps() const { return static_cast<int>(std::lround(T_final / dt)); }

bool SimConfig::has_q_boundary() const {
  return std::any_of(q_boundary.begin(), q_boundary.end(), [](const ScalarFunction& f) { return bool(f); });
}

void SimConfig::validate() const {
  material.validate();
  truncation.validate(2);
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (!(T_final >= dt)) throw std::invalid_argument("config: T_final must be at least dt");
  if (mesh.nx < 1 || mesh.ny < 1) throw std::invalid_argument("config: nx and ny must be >= 1");
  if (!(picard.tol > 0.0) || picard.max_iter < 1)
    throw std::invalid_argument("config: picard tol must be positive and max_iter >= 1");
  if (!(picard.relaxation > 0.0 && picard.relaxation <= 1.0) ||
      !(picard.fallback_relaxation > 0.0 && picard.fallback_relaxation <= 1.0))
    throw std::invalid_argument("config: relaxation must lie in (0, 1]");
  if (!(linear.tol > 0.0)) throw std::invalid_argument("config: linear tol must be positive");
  if (!g) throw std::invalid_argument("config: boundary data g is not set");
  for (const auto& f : q_initial)
    if (!f) throw std::invalid_argument("config: initial Q is not fully set");
  lcq::quadrature(quadrature.bulk_degree);
  lcq::quadrature(quadrature.coupling_degree);
}

std::vector<std::string> SimConfig::warnings() const {
  std::vector<std::string> out;
  const MaterialParams& p = material;
  constexpr int d = 2;
  const double dt_bound = p.eps3 != 0.0 ? std::min(0.25, p.L / (2.0 * d * std::abs(p.eps3))) : 0.25;
  if (dt >= dt_bound)
    out.push_back("dt = " + fmt(dt) + " violates dt < min{1/4, L/(2d|eps3|)} = " + fmt(dt_bound));
  if (!truncation.enabled()) {
    if (p.eps2 != 0.0)
      out.push_back("truncation disabled: eps1 > 2|eps2|(R + R^2) cannot be guaranteed and the elliptic "
                    "operator may lose coercivity");
  } else {
    const double R = truncation.R;
    if (p.eps1 <= 2.0 * std::abs(p.eps2) * (R + R * R))
      out.push_back("eps1 = " + fmt(p.eps1) + " violates eps1 > 2|eps2|(R + R^2) = " +
                    fmt(2.0 * std::abs(p.eps2) * (R + R * R)));
    if (p.eps1 - R * std::abs(p.eps2) <= 0.0)
      out.push_back("coercivity margin eps1 - R|eps2| = " + fmt(p.eps1 - R * std::abs(p.eps2)) +
                    " is not positive");
  }
  if (p.eps1 <= 2.0 * std::abs(p.eps3))
    out.push_back("eps1 = " + fmt(p.eps1) + " violates eps1 > 2|eps3| = " + fmt(2.0 * std::abs(p.eps3)));
  if (!p.splitting_is_convex())
    out.push_back("beta1 >= max(|b|, a) and beta2 >= max(|b|, c) do not both hold; the splitting is not convex");
  if (has_q_boundary())
    out.push_back("non-homogeneous Dirichlet data for Q lies outside the analysed setting (Q = 0 on the boundary)");
  return out;
}

NodalField solve_electric(const TriMesh& mesh, const NodalField& Q, const NodalField& g, const MaterialParams& p,
                          const TruncationConfig& t, const LinearSolverSettings& lin, const AssemblyOptions& opts,
                          const NodalField* guess, SolveReport* report) {
  const AssembledStep sys = assemble_elliptic(mesh, Q, g, p, t, opts);
  const Eigen::VectorXd x0 = guess ? Eigen::VectorXd(guess->values.col(0)) : Eigen::VectorXd::Zero(mesh.num_nodes());
  const CgResult res = cg_solve(sys.matrix, sys.rhs.col(0), x0, lin.tol, lin.max_iter);
  if (report) *report = res.report;
  if (!res.report.converged) {
    std::string why = res.report.breakdown ? "CG breakdown, the elliptic operator is not positive definite"
                                           : "CG did not converge (relative residual " + fmt(res.report.residual) + ")";
    throw ElectricSolveError("elliptic solve failed: " + why +
                             "; solvability needs eps1 I + eps2 T_R(Q) uniformly positive definite, "
                             "e.g. eps1 - R|eps2| > 0 with truncation enabled");
  }
  NodalField u(mesh.num_nodes(), 1);
  u.values.col(0) = res.x + g.values.col(0);
  return u;
}

Stepper::Stepper(SimConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))), mesh_(build_rect_mesh(cfg_.mesh)),
      q_sys_(mesh_, cfg_.material, cfg_.dt) {}

NodalField Stepper::boundary_data(double t) const { return interpolate_nodal(mesh_, cfg_.g, t); }

NodalField Stepper::q_boundary_data(double t) const {
  NodalField out(mesh_.num_nodes(), 4);
  for (int c = 0; c < 4; ++c) {
    if (!cfg_.q_boundary[c]) continue;
    for (int i = 0; i < mesh_.num_nodes(); ++i)
      if (mesh_.on_boundary(i)) out.values(i, c) = cfg_.q_boundary[c](t, mesh_.node(i).x(), mesh_.node(i).y());
  }
  return out;
}

SimState Stepper::initial_state() const {
  SimState s;
  s.step = 0;
  s.t = 0.0;
  s.Q = interpolate_nodal(mesh_, std::vector<ScalarFunction>(cfg_.q_initial.begin(), cfg_.q_initial.end()), 0.0);
  s.g = boundary_data(0.0);
  s.u = solve_electric(mesh_, s.Q, s.g, cfg_.material, cfg_.truncation, cfg_.linear, cfg_.quadrature);
  return s;
}

std::pair<SimState, StepReport> Stepper::step(const SimState& state) const {
  const MaterialParams& p = cfg_.material;
  const TruncationConfig& tr = cfg_.truncation;
  const PicardSettings& pc = cfg_.picard;
  const int n = mesh_.num_nodes();
  const double t_next = (state.step + 1) * cfg_.dt;

  SimState next;
  next.step = state.step + 1;
  next.t = t_next;
  next.g = boundary_data(t_next);
  const NodalField q_bc = q_boundary_data(t_next);

  StepReport rep;
  rep.relaxation = pc.relaxation;
  NodalField Q_iter = state.Q;
  NodalField Q_hat(n, 4);
  NodalField u_hat(n, 1);
  u_hat.values.col(0) = state.u.values.col(0) - state.g.values.col(0);
  std::vector<double> history;

  auto fail = [&](const std::string& why) -> NonConvergence {
    return NonConvergence("step " + std::to_string(next.step) + " (t = " + fmt(t_next) + "): " + why, rep, Q_iter,
                          next.step, t_next);
  };

  for (int k = 1; k <= pc.max_iter; ++k) {
    rep.picard_iterations = k;
    SolveReport er;
    try {
      const NodalField u = solve_electric(mesh_, Q_iter, next.g, p, tr, cfg_.linear, cfg_.quadrature, &u_hat, &er);
      u_hat.values.col(0) = u.values.col(0) - next.g.values.col(0);
    } catch (const ElectricSolveError& e) {
      throw fail(e.what());
    }
    rep.elliptic_cg_iterations += er.iterations;
    rep.max_linear_residual = std::max(rep.max_linear_residual, er.residual);

    const QStepData data{state.Q, state.u, u_hat, Q_iter, next.g, q_bc};
    const Eigen::MatrixXd rhs = assemble_q_rhs(mesh_, q_sys_, data, p, tr, cfg_.quadrature);
    for (int c = 0; c < 4; ++c) {
      const CgResult r = cg_solve(q_sys_.matrix(), rhs.col(c), Q_iter.values.col(c), cfg_.linear.tol,
                                  cfg_.linear.max_iter);
      rep.q_cg_iterations += r.report.iterations;
      rep.max_linear_residual = std::max(rep.max_linear_residual, r.report.residual);
      if (!r.report.converged) throw fail("Q system CG failed");
      Q_hat.values.col(c) = r.x;
    }
    if (!Q_hat.values.allFinite()) throw fail("non-finite iterate");

    const double norm = max_abs_diff(Q_hat.values, Q_iter.values);
    rep.update_norm = norm;
    if (norm <= pc.tol) {
      rep.converged = true;
      break;
    }
    history.push_back(norm);
    const int w = pc.stall_window;
    if (rep.relaxation != pc.fallback_relaxation && static_cast<int>(history.size()) > w &&
        norm >= history[history.size() - 1 - w])
      rep.relaxation = pc.fallback_relaxation;
    Q_iter.values = (1.0 - rep.relaxation) * Q_iter.values + rep.relaxation * Q_hat.values;
  }
  if (!rep.converged)
    throw fail("fixed-point iteration did not converge in " + std::to_string(pc.max_iter) +
               " iterations (last update " + fmt(rep.update_norm) + ")");

  next.Q = Q_hat;
  // Re-solve with the accepted Q so that the elliptic equation holds to
  // linear tolerance for the returned pair.
  try {
    SolveReport er;
    next.u = solve_electric(mesh_, next.Q, next.g, p, tr, cfg_.linear, cfg_.quadrature, &u_hat, &er);
    rep.elliptic_cg_iterations += er.iterations;
  } catch (const ElectricSolveError& e) {
    rep.converged = false;
    throw fail(e.what());
  }
  return {std::move(next), rep};
}

std::pair<SimState, StepReport> fixed_point_step(const Stepper& stepper, const SimState& state) {
  return stepper.step(state);
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::non_convergence: return "non_convergence";
    case Termination::error: return "error";
  }
  return "unknown";
}

RunSummary run(const SimConfig& cfg, const Observer& observer) {
  const Stepper stepper(cfg);
  RunSummary out;
  SimState state;
  try {
    state = stepper.initial_state();
  } catch (const ElectricSolveError& e) {
    out.termination = Termination::error;
    out.message = std::string("initial potential: ") + e.what();
    return out;
  }
  if (observer) observer(stepper.mesh(), state, StepReport{0, 0.0, true, cfg.picard.relaxation, 0, 0, 0.0});

  const CsrMatrix& mass = stepper.q_system().mass();
  const int N = cfg.num_steps();
  for (int n = 0; n < N; ++n) {
    try {
      auto [next, rep] = stepper.step(state);
      const Eigen::MatrixXd dQ = next.Q.values - state.Q.values;
      out.dissipation_sum += (dQ.transpose() * (mass * dQ)).trace() / cfg.dt;
      out.total_picard_iterations += rep.picard_iterations;
      state = std::move(next);
      ++out.steps_completed;
      if (observer) observer(stepper.mesh(), state, rep);
    } catch (const NonConvergence& e) {
      out.termination = Termination::non_convergence;
      out.failure_time = e.time();
      out.failure_report = e.report();
      out.message = e.what();
      break;
    }
  }
  out.final_state = std::move(state);
  return out;
}

}  // namespace lcq
