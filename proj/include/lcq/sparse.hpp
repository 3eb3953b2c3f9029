#pragma once

// CSR storage, products, Jacobi-preconditioned conjugate gradients and
// symmetric Dirichlet elimination.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <utility>
#include <vector>

namespace lcq {

/// Row-major compressed storage: row offsets, sorted column indices, values.
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Duplicates are summed. The result is bit-identical for any permutation of
/// the input triplets.
CsrMatrix csr_from_triplets(int n, std::vector<Triplet> triplets);

Eigen::VectorXd spmv(const CsrMatrix& A, const Eigen::VectorXd& x);

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  ///< relative residual ||b - Ax|| / ||b||
  bool converged = false;
  bool breakdown = false;  ///< non-positive curvature or preconditioner: matrix not SPD
};

struct CgResult {
  Eigen::VectorXd x;
  SolveReport report;
};

/// max_iter <= 0 selects 10 n.
CgResult cg_solve(const CsrMatrix& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0, double tol,
                  int max_iter);

struct FixedDof {
  int dof;
  double value;
};

/// Symmetric elimination of prescribed degrees of freedom. The matrix is
/// reduced once; right-hand sides for several value sets can then be lifted
/// through apply().
class DirichletElimination {
 public:
  DirichletElimination(const CsrMatrix& A, std::vector<int> fixed_dofs);

  const CsrMatrix& matrix() const { return reduced_; }
  const std::vector<int>& fixed() const { return fixed_; }

  /// values[k] belongs to fixed()[k].
  Eigen::VectorXd apply(const Eigen::VectorXd& b, const std::vector<double>& values) const;

 private:
  struct Coupling {
    int row;
    int fixed_index;
    double value;
  };
  CsrMatrix reduced_;
  std::vector<int> fixed_;
  std::vector<Coupling> couplings_;
};

/// Fixed rows and columns are zeroed with a unit diagonal; known values move
/// to the right-hand side. Conflicting duplicate constraints throw.
std::pair<CsrMatrix, Eigen::VectorXd> apply_dirichlet(const CsrMatrix& A, const Eigen::VectorXd& b,
                                                      const std::vector<FixedDof>& fixed);

}  // namespace lcq
