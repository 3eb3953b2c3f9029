#pragma once

// Discrete operators of the scheme on P1 triangles: mass, stiffness, the
// truncated dielectric operator for the potential, and the linear system
// solved for the Q-tensor inside one application of the fixed-point map.

#include "lcq/mesh.hpp"
#include "lcq/qtensor.hpp"
#include "lcq/sparse.hpp"

#include <memory>
#include <vector>

namespace lcq {

/// The same coupling rule must serve the elliptic coefficient, the P~ term of
/// the Q equation and the coupling energy, otherwise the discrete energy
/// identity only holds up to quadrature error.
struct AssemblyOptions {
  int bulk_degree = 4;      ///< F_B and its split gradients
  int coupling_degree = 4;  ///< every integrand containing T_R(Q) or P~
};

/// A linear system with all Dirichlet rows already eliminated. Rows of rhs
/// are nodes, columns are field components (row-major tensor entries for Q);
/// every column is solved against the same matrix.
struct AssembledStep {
  CsrMatrix matrix;
  Eigen::MatrixXd rhs;
  std::vector<int> fixed_nodes;
};

CsrMatrix assemble_mass(const TriMesh& mesh);
CsrMatrix assemble_stiffness(const TriMesh& mesh);

/// int (eps1 grad w + eps2 T_R(Q) grad w) . grad psi = -int (eps1 grad g + eps2 T_R(Q) grad g + eps3 div Q) . grad psi
/// for the homogeneous part w of the potential (w = 0 on the boundary).
AssembledStep assemble_elliptic(const TriMesh& mesh, const NodalField& Q, const NodalField& g,
                                const MaterialParams& p, const TruncationConfig& t,
                                const AssemblyOptions& opts = {});

/// Smallest eigenvalue over quadrature points of eps1 I + eps2 sym(T_R(Q)),
/// i.e. the pointwise coercivity constant of the elliptic operator.
double elliptic_coercivity(const TriMesh& mesh, const NodalField& Q, const MaterialParams& p,
                           const TruncationConfig& t, const AssemblyOptions& opts = {});

/// Left-hand side of the Q update, (1/dt) Mass + (M L / 2) Stiffness with
/// Dirichlet rows on the boundary. Depends on the mesh, M L and dt only, so
/// a single instance serves every fixed-point iteration of a step.
class QSystemMatrix {
 public:
  QSystemMatrix(const TriMesh& mesh, const MaterialParams& p, double dt);

  const CsrMatrix& matrix() const { return elim_->matrix(); }
  const CsrMatrix& mass() const { return mass_; }
  const CsrMatrix& stiffness() const { return stiffness_; }
  const DirichletElimination& elimination() const { return *elim_; }
  double dt() const { return dt_; }

 private:
  CsrMatrix mass_;
  CsrMatrix stiffness_;
  std::shared_ptr<const DirichletElimination> elim_;
  double dt_;
};

/// Inputs of the Q right-hand side for one application of the map.
struct QStepData {
  const NodalField& Qn;          ///< Q at t^n
  const NodalField& un;          ///< full potential at t^n
  const NodalField& u_hat;       ///< homogeneous potential solved with Q_iter
  const NodalField& Q_iter;      ///< current fixed-point iterate for Q^{n+1}
  const NodalField& g_next;      ///< boundary extension at t^{n+1}
  const NodalField& Q_boundary;  ///< Dirichlet data for Q^{n+1} (boundary rows only)
};

/// Right-hand side (Dirichlet lifted) for all d^2 components.
Eigen::MatrixXd assemble_q_rhs(const TriMesh& mesh, const QSystemMatrix& sys, const QStepData& data,
                               const MaterialParams& p, const TruncationConfig& t,
                               const AssemblyOptions& opts = {});

AssembledStep assemble_q_system(const TriMesh& mesh, const QStepData& data, const MaterialParams& p,
                                const TruncationConfig& t, double dt, const AssemblyOptions& opts = {});

}  // namespace lcq
