#include "lcq/assembly.hpp"

#include <limits>
#include <stdexcept>

namespace lcq {

namespace {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

Mat2 tensor_at(const NodalField& Q, const TriMesh::Triangle& tri, const Eigen::Vector3d& lam) {
  Mat2 out = Mat2::Zero();
  for (int k = 0; k < 3; ++k) out += lam[k] * Q.tensor2(tri[k]);
  return out;
}

// div(Q)_i = sum_j d_j Q_ij, constant on the element.
Vec2 element_divergence(const NodalField& Q, const TriMesh::Triangle& tri, const ElementGeometry& geo) {
  Vec2 div = Vec2::Zero();
  for (int k = 0; k < 3; ++k) {
    const Mat2 Qk = Q.tensor2(tri[k]);
    div += Qk * geo.grads.row(k).transpose();
  }
  return div;
}

Vec2 element_gradient(const NodalField& f, const TriMesh::Triangle& tri, const ElementGeometry& geo) {
  Vec2 out = Vec2::Zero();
  for (int k = 0; k < 3; ++k) out += f.values(tri[k], 0) * geo.grads.row(k).transpose();
  return out;
}

// Quadrature average of eps1 I + eps2 sym(T_R(Q)) over one element.
Mat2 dielectric_average(const NodalField& Q, const TriMesh::Triangle& tri, const QuadratureRule& rule,
                        const MaterialParams& p, const TruncationConfig& t) {
  Mat2 T = Mat2::Zero();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Mat2 Tq = truncate(tensor_at(Q, tri, rule.points[q]), t);
    T += rule.weights[q] * 0.5 * (Tq + Tq.transpose());
  }
  return p.eps1 * Mat2::Identity() + p.eps2 * T;
}

void check_tensor_field(const TriMesh& mesh, const NodalField& Q, const char* what) {
  if (Q.num_nodes() != mesh.num_nodes() || Q.components != 4)
    throw std::invalid_argument(std::string(what) + ": expected a 2x2 tensor field on the mesh");
}

void check_scalar_field(const TriMesh& mesh, const NodalField& f, const char* what) {
  if (f.num_nodes() != mesh.num_nodes() || f.components != 1)
    throw std::invalid_argument(std::string(what) + ": expected a scalar field on the mesh");
}

}  // namespace

CsrMatrix assemble_mass(const TriMesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(9 * mesh.num_triangles());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto geo = element_geometry(mesh, e);
    const auto& tri = mesh.triangle(e);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trips.push_back({tri[a], tri[b], geo.area / 12.0 * (a == b ? 2.0 : 1.0)});
  }
  return csr_from_triplets(mesh.num_nodes(), std::move(trips));
}

CsrMatrix assemble_stiffness(const TriMesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(9 * mesh.num_triangles());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto geo = element_geometry(mesh, e);
    const auto& tri = mesh.triangle(e);
    const Eigen::Matrix3d K = geo.area * geo.grads * geo.grads.transpose();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trips.push_back({tri[a], tri[b], K(a, b)});
  }
  return csr_from_triplets(mesh.num_nodes(), std::move(trips));
}

AssembledStep assemble_elliptic(const TriMesh& mesh, const NodalField& Q, const NodalField& g,
                                const MaterialParams& p, const TruncationConfig& t, const AssemblyOptions& opts) {
  check_tensor_field(mesh, Q, "assemble_elliptic");
  check_scalar_field(mesh, g, "assemble_elliptic");
  const auto& rule = quadrature(opts.coupling_degree);
  std::vector<Triplet> trips;
  trips.reserve(9 * mesh.num_triangles());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto geo = element_geometry(mesh, e);
    const auto& tri = mesh.triangle(e);
    const Mat2 C = dielectric_average(Q, tri, rule, p, t);
    const Eigen::Matrix3d K = geo.area * geo.grads * C * geo.grads.transpose();
    const Vec2 flux = C * element_gradient(g, tri, geo) + p.eps3 * element_divergence(Q, tri, geo);
    const Eigen::Vector3d f = -geo.area * geo.grads * flux;
    for (int a = 0; a < 3; ++a) {
      rhs[tri[a]] += f[a];
      for (int b = 0; b < 3; ++b) trips.push_back({tri[a], tri[b], K(a, b)});
    }
  }
  const CsrMatrix A = csr_from_triplets(mesh.num_nodes(), std::move(trips));
  AssembledStep out;
  out.fixed_nodes = mesh.boundary_nodes();
  DirichletElimination elim(A, out.fixed_nodes);
  out.matrix = elim.matrix();
  out.rhs = elim.apply(rhs, std::vector<double>(out.fixed_nodes.size(), 0.0));
  return out;
}

double elliptic_coercivity(const TriMesh& mesh, const NodalField& Q, const MaterialParams& p,
                           const TruncationConfig& t, const AssemblyOptions& opts) {
  check_tensor_field(mesh, Q, "elliptic_coercivity");
  const auto& rule = quadrature(opts.coupling_degree);
  double lo = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangle(e);
    for (const auto& pt : rule.points) {
      const Mat2 T = truncate(tensor_at(Q, tri, pt), t);
      const Mat2 C = p.eps1 * Mat2::Identity() + p.eps2 * 0.5 * (T + T.transpose());
      Eigen::SelfAdjointEigenSolver<Mat2> es(C, Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues()[0]);
    }
  }
  return lo;
}

QSystemMatrix::QSystemMatrix(const TriMesh& mesh, const MaterialParams& p, double dt)
    : mass_(assemble_mass(mesh)), stiffness_(assemble_stiffness(mesh)), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("QSystemMatrix: dt must be positive");
  const CsrMatrix A = (1.0 / dt) * mass_ + (0.5 * p.M * p.L) * stiffness_;
  elim_ = std::make_shared<DirichletElimination>(A, mesh.boundary_nodes());
}

Eigen::MatrixXd assemble_q_rhs(const TriMesh& mesh, const QSystemMatrix& sys, const QStepData& data,
                               const MaterialParams& p, const TruncationConfig& t, const AssemblyOptions& opts) {
  check_tensor_field(mesh, data.Qn, "assemble_q_rhs: Qn");
  check_tensor_field(mesh, data.Q_iter, "assemble_q_rhs: Q_iter");
  check_tensor_field(mesh, data.Q_boundary, "assemble_q_rhs: Q_boundary");
  check_scalar_field(mesh, data.un, "assemble_q_rhs: un");
  check_scalar_field(mesh, data.u_hat, "assemble_q_rhs: u_hat");
  check_scalar_field(mesh, data.g_next, "assemble_q_rhs: g_next");

  constexpr int d = 2;
  const double inv_dt = 1.0 / sys.dt();
  Eigen::MatrixXd rhs = inv_dt * (sys.mass() * data.Qn.values) - (0.5 * p.M * p.L) * (sys.stiffness() * data.Qn.values);

  const auto& bulk_rule = quadrature(opts.bulk_degree);
  const auto& coupling_rule = quadrature(opts.coupling_degree);
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto geo = element_geometry(mesh, e);
    const auto& tri = mesh.triangle(e);
    const Vec2 grad_un = element_gradient(data.un, tri, geo);
    const Vec2 grad_uhat = element_gradient(data.u_hat, tri, geo);
    const Vec2 grad_g = element_gradient(data.g_next, tri, geo);

    Eigen::Matrix<double, 3, 4> local = Eigen::Matrix<double, 3, 4>::Zero();
    auto add_source = [&](const Eigen::Vector3d& lam, double wq, const Mat2& src) {
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 4; ++c) local(a, c) += wq * lam[a] * src(c / 2, c % 2);
    };

    // Convex part implicit (at the iterate), concave part explicit.
    for (std::size_t q = 0; q < bulk_rule.points.size(); ++q) {
      const Eigen::Vector3d& lam = bulk_rule.points[q];
      const Mat2 Qit = tensor_at(data.Q_iter, tri, lam);
      const Mat2 Qn = tensor_at(data.Qn, tri, lam);
      const Mat2 bulk = split_gradients(Qit, p).convex - split_gradients(Qn, p).concave;
      add_source(lam, geo.area * bulk_rule.weights[q], -p.M * bulk);
    }

    // Dielectric coupling through the secant quotient of T_R; the potential
    // at t^{n+1} enters as its homogeneous part plus the boundary lift.
    if (p.eps2 != 0.0) {
      for (std::size_t q = 0; q < coupling_rule.points.size(); ++q) {
        const Eigen::Vector3d& lam = coupling_rule.points[q];
        const Mat2 P = secant_ratio(tensor_at(data.Q_iter, tri, lam), tensor_at(data.Qn, tri, lam), t);
        Mat2 coupling = Mat2::Zero();
        for (const Vec2& grad_next : {grad_uhat, grad_g}) {
          const Mat2 H = P.cwiseProduct(grad_un * grad_next.transpose());
          Mat2 S = 0.5 * (H + H.transpose());
          S.diagonal().array() -= H.trace() / d;
          coupling += S;
        }
        add_source(lam, geo.area * coupling_rule.weights[q], 0.5 * p.M * p.eps2 * coupling);
      }
    }

    // Polarization: M eps3 int (grad w . div(Phi_S) - (1/d) grad w . grad tr Phi)
    // with w the midpoint potential; (u_hat + u^n)/2 and g^{n+1}/2 are kept
    // as separate contributions.
    if (p.eps3 != 0.0) {
      for (const Vec2& w : {Vec2(0.5 * (grad_uhat + grad_un)), Vec2(0.5 * grad_g)}) {
        for (int a = 0; a < 3; ++a) {
          const Vec2 gphi = geo.grads.row(a).transpose();
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
              double v = 0.5 * (w[i] * gphi[j] + w[j] * gphi[i]);
              if (i == j) v -= w.dot(gphi) / d;
              local(a, i * d + j) += p.M * p.eps3 * geo.area * v;
            }
        }
      }
    }

    for (int a = 0; a < 3; ++a) rhs.row(tri[a]) += local.row(a);
  }

  const auto& elim = sys.elimination();
  const auto& fixed = elim.fixed();
  Eigen::MatrixXd out(rhs.rows(), rhs.cols());
  std::vector<double> values(fixed.size());
  for (int c = 0; c < rhs.cols(); ++c) {
    for (std::size_t k = 0; k < fixed.size(); ++k) values[k] = data.Q_boundary.values(fixed[k], c);
    out.col(c) = elim.apply(rhs.col(c), values);
  }
  return out;
}

AssembledStep assemble_q_system(const TriMesh& mesh, const QStepData& data, const MaterialParams& p,
                                const TruncationConfig& t, double dt, const AssemblyOptions& opts) {
  const QSystemMatrix sys(mesh, p, dt);
  AssembledStep out;
  out.matrix = sys.matrix();
  out.rhs = assemble_q_rhs(mesh, sys, data, p, t, opts);
  out.fixed_nodes = sys.elimination().fixed();
  return out;
}

}  // namespace lcq
