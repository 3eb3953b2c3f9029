#include "lcq/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace lcq {

CsrMatrix csr_from_triplets(int n, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::out_of_range("csr_from_triplets: index (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " + std::to_string(n) + "x" +
                              std::to_string(n));
  // Sorting on the value as well fixes the summation order of duplicates.
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.value < b.value;
  });
  std::vector<Eigen::Triplet<double, int>> merged;
  merged.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (!merged.empty() && merged.back().row() == t.row && merged.back().col() == t.col)
      merged.back() = Eigen::Triplet<double, int>(t.row, t.col, merged.back().value() + t.value);
    else
      merged.emplace_back(t.row, t.col, t.value);
  }
  CsrMatrix A(n, n);
  A.setFromTriplets(merged.begin(), merged.end());
  A.makeCompressed();
  return A;
}

Eigen::VectorXd spmv(const CsrMatrix& A, const Eigen::VectorXd& x) {
  if (A.cols() != x.size())
    throw std::invalid_argument("spmv: matrix has " + std::to_string(A.cols()) + " columns, vector has " +
                                std::to_string(x.size()) + " entries");
  Eigen::VectorXd y = A * x;
  return y;
}

CgResult cg_solve(const CsrMatrix& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0, double tol,
                  int max_iter) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n || x0.size() != n)
    throw std::invalid_argument("cg_solve: dimension mismatch");
  if (max_iter <= 0) max_iter = static_cast<int>(10 * n);

  CgResult out;
  out.x = x0;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.x.setZero();
    out.report.converged = true;
    return out;
  }

  const Eigen::VectorXd diag = A.diagonal();
  if ((diag.array() <= 0.0).any()) {
    out.report.breakdown = true;
    out.report.residual = (b - A * out.x).norm() / bnorm;
    return out;
  }
  const Eigen::VectorXd inv_diag = diag.cwiseInverse();

  Eigen::VectorXd r = b - A * out.x;
  Eigen::VectorXd best = out.x;
  double best_res = r.norm() / bnorm;
  int it = 0;
  // Restart from the true residual whenever the recurrence claims
  // convergence that the true residual does not confirm.
  while (true) {
    double res = r.norm() / bnorm;
    if (res <= tol) break;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    Eigen::VectorXd Ap(n);
    bool restart = false;
    while (it < max_iter) {
      Ap.noalias() = A * p;
      const double pAp = p.dot(Ap);
      if (!(pAp > 0.0)) {
        out.report.breakdown = true;
        break;
      }
      const double alpha = rz / pAp;
      out.x += alpha * p;
      r -= alpha * Ap;
      ++it;
      res = r.norm() / bnorm;
      if (res <= tol) {
        restart = true;
        break;
      }
      z = inv_diag.cwiseProduct(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    r = b - A * out.x;
    const double true_res = r.norm() / bnorm;
    if (true_res < best_res) {
      best_res = true_res;
      best = out.x;
    }
    if (!restart || out.report.breakdown || it >= max_iter) break;
  }
  const double final_res = (b - A * out.x).norm() / bnorm;
  if (final_res > best_res) {
    out.x = best;
  } else {
    best_res = final_res;
  }
  out.report.iterations = it;
  out.report.residual = best_res;
  out.report.converged = !out.report.breakdown && best_res <= tol;
  return out;
}

DirichletElimination::DirichletElimination(const CsrMatrix& A, std::vector<int> fixed_dofs)
    : fixed_(std::move(fixed_dofs)) {
  const int n = static_cast<int>(A.rows());
  std::vector<int> slot(n, -1);
  for (std::size_t k = 0; k < fixed_.size(); ++k) {
    const int d = fixed_[k];
    if (d < 0 || d >= n) throw std::out_of_range("apply_dirichlet: dof " + std::to_string(d));
    slot[d] = static_cast<int>(k);
  }
  std::vector<Eigen::Triplet<double, int>> trips;
  trips.reserve(A.nonZeros());
  for (int r = 0; r < n; ++r) {
    for (CsrMatrix::InnerIterator it(A, r); it; ++it) {
      const int c = static_cast<int>(it.col());
      if (slot[r] >= 0) continue;
      if (slot[c] >= 0) {
        couplings_.push_back({r, slot[c], it.value()});
        continue;
      }
      trips.emplace_back(r, c, it.value());
    }
    if (slot[r] >= 0) trips.emplace_back(r, r, 1.0);
  }
  reduced_.resize(n, n);
  reduced_.setFromTriplets(trips.begin(), trips.end());
  reduced_.makeCompressed();
}

Eigen::VectorXd DirichletElimination::apply(const Eigen::VectorXd& b, const std::vector<double>& values) const {
  if (values.size() != fixed_.size()) throw std::invalid_argument("apply_dirichlet: value count mismatch");
  Eigen::VectorXd out = b;
  for (const auto& c : couplings_) out[c.row] -= c.value * values[c.fixed_index];
  for (std::size_t k = 0; k < fixed_.size(); ++k) out[fixed_[k]] = values[k];
  return out;
}

std::pair<CsrMatrix, Eigen::VectorXd> apply_dirichlet(const CsrMatrix& A, const Eigen::VectorXd& b,
                                                      const std::vector<FixedDof>& fixed) {
  std::map<int, double> unique;
  for (const auto& f : fixed) {
    auto [it, inserted] = unique.emplace(f.dof, f.value);
    if (!inserted && it->second != f.value)
      throw std::invalid_argument("apply_dirichlet: conflicting values for dof " + std::to_string(f.dof));
  }
  std::vector<int> dofs;
  std::vector<double> values;
  for (const auto& [d, v] : unique) {
    dofs.push_back(d);
    values.push_back(v);
  }
  DirichletElimination elim(A, dofs);
  return {elim.matrix(), elim.apply(b, values)};
}

}  // namespace lcq
