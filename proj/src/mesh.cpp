#include "lcq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lcq {

TriMesh::TriMesh(RectSpec spec, std::vector<Eigen::Vector2d> nodes, std::vector<Triangle> triangles,
                 std::vector<char> boundary)
    : spec_(spec), nodes_(std::move(nodes)), triangles_(std::move(triangles)), boundary_(std::move(boundary)) {}

std::vector<int> TriMesh::boundary_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < num_nodes(); ++i)
    if (boundary_[i]) out.push_back(i);
  return out;
}

std::pair<int, Eigen::Vector3d> TriMesh::locate(double x, double y) const {
  const double hx = (spec_.x_max - spec_.x_min) / spec_.nx;
  const double hy = (spec_.y_max - spec_.y_min) / spec_.ny;
  const double sx = std::clamp((x - spec_.x_min) / hx, 0.0, double(spec_.nx));
  const double sy = std::clamp((y - spec_.y_min) / hy, 0.0, double(spec_.ny));
  const int i = std::min(static_cast<int>(sx), spec_.nx - 1);
  const int j = std::min(static_cast<int>(sy), spec_.ny - 1);
  const double fx = sx - i, fy = sy - j;
  const int cell = j * spec_.nx + i;
  // Lower triangle (n00, n10, n11) holds fx >= fy.
  if (fx >= fy) return {2 * cell, Eigen::Vector3d(1.0 - fx, fx - fy, fy)};
  return {2 * cell + 1, Eigen::Vector3d(1.0 - fy, fx, fy - fx)};
}

TriMesh build_rect_mesh(double x_min, double x_max, double y_min, double y_max, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_rect_mesh: nx and ny must be >= 1");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw std::invalid_argument("build_rect_mesh: empty rectangle");
  RectSpec spec{x_min, x_max, y_min, y_max, nx, ny};
  std::vector<Eigen::Vector2d> nodes;
  std::vector<char> boundary;
  nodes.reserve((nx + 1) * (ny + 1));
  boundary.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // Endpoints are set exactly so that boundary coordinates are not perturbed.
    const double y = j == ny ? y_max : y_min + (y_max - y_min) * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? x_max : x_min + (x_max - x_min) * i / nx;
      nodes.emplace_back(x, y);
      boundary.push_back(i == 0 || j == 0 || i == nx || j == ny);
    }
  }
  std::vector<TriMesh::Triangle> tris;
  tris.reserve(2 * nx * ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
      tris.push_back({n00, n10, n11});
      tris.push_back({n00, n11, n01});
    }
  return TriMesh(spec, std::move(nodes), std::move(tris), std::move(boundary));
}

ElementGeometry triangle_geometry(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2) {
  const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
  if (!(det > 0.0)) throw std::invalid_argument("element_geometry: degenerate or inverted triangle");
  ElementGeometry g;
  g.area = 0.5 * det;
  g.grads << p1.y() - p2.y(), p2.x() - p1.x(),
             p2.y() - p0.y(), p0.x() - p2.x(),
             p0.y() - p1.y(), p1.x() - p0.x();
  g.grads /= det;
  return g;
}

ElementGeometry element_geometry(const TriMesh& mesh, int tri_index) {
  if (tri_index < 0 || tri_index >= mesh.num_triangles())
    throw std::out_of_range("element_geometry: triangle index " + std::to_string(tri_index));
  const auto& t = mesh.triangle(tri_index);
  return triangle_geometry(mesh.node(t[0]), mesh.node(t[1]), mesh.node(t[2]));
}

int NodalField::dim() const {
  const int d = static_cast<int>(std::lround(std::sqrt(double(components))));
  if (d * d != components) throw std::logic_error("NodalField: not a tensor field");
  return d;
}

Eigen::Matrix2d NodalField::tensor2(int node) const {
  Eigen::Matrix2d Q;
  Q << values(node, 0), values(node, 1), values(node, 2), values(node, 3);
  return Q;
}

void NodalField::set_tensor2(int node, const Eigen::Matrix2d& Q) {
  values(node, 0) = Q(0, 0);
  values(node, 1) = Q(0, 1);
  values(node, 2) = Q(1, 0);
  values(node, 3) = Q(1, 1);
}

NodalField interpolate_nodal(const TriMesh& mesh, const ScalarFunction& f, double t) {
  NodalField out(mesh.num_nodes(), 1);
  for (int i = 0; i < mesh.num_nodes(); ++i) out.values(i, 0) = f(t, mesh.node(i).x(), mesh.node(i).y());
  return out;
}

NodalField interpolate_nodal(const TriMesh& mesh, const std::vector<ScalarFunction>& fs, double t) {
  NodalField out(mesh.num_nodes(), static_cast<int>(fs.size()));
  for (int i = 0; i < mesh.num_nodes(); ++i)
    for (int c = 0; c < out.components; ++c) out.values(i, c) = fs[c](t, mesh.node(i).x(), mesh.node(i).y());
  return out;
}

Eigen::Vector2d eval_gradient(const TriMesh& mesh, const NodalField& field, int tri_index, int component) {
  const auto g = element_geometry(mesh, tri_index);
  const auto& t = mesh.triangle(tri_index);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int k = 0; k < 3; ++k) out += field.values(t[k], component) * g.grads.row(k).transpose();
  return out;
}

double evaluate_at(const TriMesh& mesh, const NodalField& field, int component, double x, double y) {
  const auto [k, lam] = mesh.locate(x, y);
  const auto& t = mesh.triangle(k);
  return lam[0] * field.values(t[0], component) + lam[1] * field.values(t[1], component) +
         lam[2] * field.values(t[2], component);
}

namespace {

QuadratureRule make_rule(int degree) {
  QuadratureRule r;
  r.degree = degree;
  auto orbit3 = [&](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.points.emplace_back(a, a, b);
    r.points.emplace_back(a, b, a);
    r.points.emplace_back(b, a, a);
    for (int k = 0; k < 3; ++k) r.weights.push_back(w);
  };
  auto orbit6 = [&](double a, double b, double w) {
    const double c = 1.0 - a - b;
    for (const auto& p : {Eigen::Vector3d(a, b, c), Eigen::Vector3d(a, c, b), Eigen::Vector3d(b, a, c),
                          Eigen::Vector3d(b, c, a), Eigen::Vector3d(c, a, b), Eigen::Vector3d(c, b, a)}) {
      r.points.push_back(p);
      r.weights.push_back(w);
    }
  };
  switch (degree) {
    case 2:
      orbit3(0.5, 1.0 / 3.0);
      break;
    case 4:  // Dunavant
      orbit3(0.445948490915964886, 0.223381589678011466);
      orbit3(0.091576213509770743, 0.109951743655321868);
      break;
    case 6:  // Dunavant
      orbit3(0.249286745170910421, 0.116786275726379366);
      orbit3(0.063089014491502228, 0.050844906370206817);
      orbit6(0.053145049844816947, 0.310352451033784405, 0.082851075618373575);
      break;
    default:
      throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));
  }
  return r;
}

}  // namespace

const QuadratureRule& quadrature(int degree) {
  static const QuadratureRule r2 = make_rule(2);
  static const QuadratureRule r4 = make_rule(4);
  static const QuadratureRule r6 = make_rule(6);
  switch (degree) {
    case 2: return r2;
    case 4: return r4;
    case 6: return r6;
    default: throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));
  }
}

}  // namespace lcq
