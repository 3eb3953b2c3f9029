#include "lcq/diagnostics.hpp"

#include <cmath>

namespace lcq {

EnergyBreakdown energy_breakdown(const TriMesh& mesh, const NodalField& Q, const NodalField& u,
                                 const MaterialParams& p, const TruncationConfig& t, const AssemblyOptions& opts) {
  const auto& bulk_rule = quadrature(opts.bulk_degree);
  const auto& coupling_rule = quadrature(opts.coupling_degree);
  EnergyBreakdown e;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto geo = element_geometry(mesh, k);
    const auto& tri = mesh.triangle(k);
    Eigen::Matrix<double, 3, 4> q;
    Eigen::Vector3d uv;
    for (int a = 0; a < 3; ++a) {
      q.row(a) = Q.values.row(tri[a]);
      uv[a] = u.values(tri[a], 0);
    }
    const Eigen::Matrix<double, 2, 4> gradQ = geo.grads.transpose() * q;  // column c: gradient of component c
    const Eigen::Vector2d gu = geo.grads.transpose() * uv;
    // div(Q)_i = sum_j d_j Q_ij
    const Eigen::Vector2d divQ(gradQ(0, 0) + gradQ(1, 1), gradQ(0, 2) + gradQ(1, 3));

    e.elastic += 0.5 * p.M * p.L * geo.area * gradQ.squaredNorm();
    e.electric += 0.5 * p.M * p.eps1 * geo.area * gu.squaredNorm();
    e.polarization += p.M * p.eps3 * geo.area * divQ.dot(gu);

    auto tensor_at = [&](const Eigen::Vector3d& lam) {
      const Eigen::Vector4d v = q.transpose() * lam;
      Eigen::Matrix2d m;
      m << v[0], v[1], v[2], v[3];
      return m;
    };
    for (std::size_t i = 0; i < bulk_rule.points.size(); ++i)
      e.bulk += p.M * geo.area * bulk_rule.weights[i] * bulk_potential(tensor_at(bulk_rule.points[i]), p);
    for (std::size_t i = 0; i < coupling_rule.points.size(); ++i) {
      const Eigen::Matrix2d T = truncate(tensor_at(coupling_rule.points[i]), t);
      e.coupling += 0.5 * p.M * p.eps2 * geo.area * coupling_rule.weights[i] * gu.dot(T * gu);
    }
  }
  e.total = e.elastic + e.bulk + e.electric + e.coupling + e.polarization;
  return e;
}

ConstraintResiduals constraint_residuals(const NodalField& Q) {
  ConstraintResiduals r;
  const int d = Q.dim();
  for (int i = 0; i < Q.num_nodes(); ++i) {
    double tr = 0.0;
    for (int a = 0; a < d; ++a) {
      tr += Q.values(i, a * d + a);
      for (int b = a + 1; b < d; ++b)
        r.max_asym = std::max(r.max_asym, std::abs(Q.values(i, a * d + b) - Q.values(i, b * d + a)));
    }
    r.max_trace = std::max(r.max_trace, std::abs(tr));
  }
  return r;
}

FieldExtremes field_extremes(const NodalField& Q) {
  FieldExtremes f;
  if (Q.num_nodes() == 0) return f;
  f.max_abs_entry = Q.values.cwiseAbs().maxCoeff();
  f.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < Q.num_nodes(); ++i)
    f.max_eigenvalue = std::max(f.max_eigenvalue, leading_director(Q.tensor2(i)).eigenvalue);
  return f;
}

DirectorAngle mean_director_angle(const TriMesh& mesh, const NodalField& Q, const Eigen::Vector2d& axis) {
  DirectorAngle out;
  const Eigen::Vector2d ax = axis.normalized();
  double sum = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.on_boundary(i)) continue;
    const Eigen::Matrix2d q = Q.tensor2(i);
    if (q.norm() <= 1e-10) continue;
    const Director dir = leading_director(q);
    if (dir.degenerate) continue;
    const double c = std::min(1.0, std::abs(dir.direction.dot(ax)));
    sum += std::acos(c);
    ++out.samples;
  }
  if (out.samples > 0) {
    out.defined = true;
    out.radians = sum / out.samples;
    out.normalized = out.radians / (0.5 * M_PI);
  }
  return out;
}

double l2_norm_squared(const CsrMatrix& mass, const Eigen::MatrixXd& values) {
  return (values.transpose() * (mass * values)).trace();
}

}  // namespace lcq
