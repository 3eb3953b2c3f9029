#pragma once

// Read-only observables of a state.

#include "lcq/assembly.hpp"
#include "lcq/stepper.hpp"

namespace lcq {

struct EnergyBreakdown {
  double elastic = 0.0;       ///< (M L / 2) int |grad Q|^2
  double bulk = 0.0;          ///< M int F_B(Q)
  double electric = 0.0;      ///< (M eps1 / 2) int |grad u|^2
  double coupling = 0.0;      ///< (M eps2 / 2) int grad u^T T_R(Q) grad u
  double polarization = 0.0;  ///< M eps3 int div Q . grad u
  double total = 0.0;
};

EnergyBreakdown energy_breakdown(const TriMesh& mesh, const NodalField& Q, const NodalField& u,
                                 const MaterialParams& p, const TruncationConfig& t,
                                 const AssemblyOptions& opts = {});

inline EnergyBreakdown energy_breakdown(const TriMesh& mesh, const SimState& s, const MaterialParams& p,
                                        const TruncationConfig& t, const AssemblyOptions& opts = {}) {
  return energy_breakdown(mesh, s.Q, s.u, p, t, opts);
}

struct ConstraintResiduals {
  double max_trace = 0.0;  ///< max over nodes of |tr Q|
  double max_asym = 0.0;   ///< max over nodes of max_ij |Q_ij - Q_ji|
};

ConstraintResiduals constraint_residuals(const NodalField& Q);

struct FieldExtremes {
  double max_abs_entry = 0.0;
  double max_eigenvalue = 0.0;
};

FieldExtremes field_extremes(const NodalField& Q);

struct DirectorAngle {
  double radians = 0.0;     ///< mean angle in [0, pi/2]
  double normalized = 0.0;  ///< radians / (pi/2)
  int samples = 0;          ///< interior nodes that entered the mean
  bool defined = false;     ///< false when every interior node is degenerate
};

/// Mean over interior nodes of the angle between the leading director and
/// `axis`, folded into [0, pi/2]. Nodes with |Q|_F <= 1e-10 are skipped.
DirectorAngle mean_director_angle(const TriMesh& mesh, const NodalField& Q,
                                  const Eigen::Vector2d& axis = Eigen::Vector2d(0.0, 1.0));

/// sum_c f_c^T Mass f_c, the squared L2 norm of a P1 field.
double l2_norm_squared(const CsrMatrix& mass, const Eigen::MatrixXd& values);

}  // namespace lcq
