#pragma once

// Structured P1 triangulations of a rectangle, element geometry, quadrature
// rules on the reference triangle and nodal field containers.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace lcq {

/// f(t, x, y)
using ScalarFunction = std::function<double(double, double, double)>;

struct RectSpec {
  double x_min = -0.5, x_max = 0.5;
  double y_min = -0.5, y_max = 0.5;
  int nx = 30, ny = 30;
};

/// Uniform grid of a rectangle with every cell split along its
/// lower-left to upper-right diagonal. Nodes are numbered row-major
/// (x fastest); triangles are counter-clockwise.
class TriMesh {
 public:
  using Triangle = std::array<int, 3>;

  TriMesh() = default;
  TriMesh(RectSpec spec, std::vector<Eigen::Vector2d> nodes, std::vector<Triangle> triangles,
          std::vector<char> boundary);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  const Eigen::Vector2d& node(int i) const { return nodes_[i]; }
  const Triangle& triangle(int k) const { return triangles_[k]; }
  bool on_boundary(int i) const { return boundary_[i] != 0; }
  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const RectSpec& spec() const { return spec_; }
  std::vector<int> boundary_nodes() const;
  double area() const {
    return (spec_.x_max - spec_.x_min) * (spec_.y_max - spec_.y_min);
  }

  /// Index of the triangle containing (x, y) together with its barycentric
  /// coordinates. Points outside the rectangle are clamped onto it.
  std::pair<int, Eigen::Vector3d> locate(double x, double y) const;

 private:
  RectSpec spec_;
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<char> boundary_;
};

TriMesh build_rect_mesh(double x_min, double x_max, double y_min, double y_max, int nx, int ny);
inline TriMesh build_rect_mesh(const RectSpec& s) {
  return build_rect_mesh(s.x_min, s.x_max, s.y_min, s.y_max, s.nx, s.ny);
}

struct ElementGeometry {
  double area = 0.0;
  /// Row k holds the gradient of the k-th barycentric coordinate.
  Eigen::Matrix<double, 3, 2> grads;
};

ElementGeometry triangle_geometry(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2);
ElementGeometry element_geometry(const TriMesh& mesh, int tri_index);

/// Per-node values of a scalar (components = 1) or tensor (components = d^2,
/// row-major entries) P1 field. values is (num_nodes x components).
struct NodalField {
  int components = 1;
  Eigen::MatrixXd values;

  NodalField() = default;
  NodalField(int num_nodes, int comps) : components(comps), values(Eigen::MatrixXd::Zero(num_nodes, comps)) {}

  int num_nodes() const { return static_cast<int>(values.rows()); }
  int dim() const;  ///< tensor dimension d with d^2 == components

  /// Tensor at a node, for components == d^2.
  Eigen::Matrix2d tensor2(int node) const;
  void set_tensor2(int node, const Eigen::Matrix2d& Q);
};

NodalField interpolate_nodal(const TriMesh& mesh, const ScalarFunction& f, double t);
/// Interpolates one function per component.
NodalField interpolate_nodal(const TriMesh& mesh, const std::vector<ScalarFunction>& fs, double t);

Eigen::Vector2d eval_gradient(const TriMesh& mesh, const NodalField& field, int tri_index,
                              int component);

/// Value of the P1 field at an arbitrary point of the rectangle.
double evaluate_at(const TriMesh& mesh, const NodalField& field, int component, double x, double y);

struct QuadratureRule {
  int degree = 0;
  std::vector<Eigen::Vector3d> points;  ///< barycentric coordinates
  std::vector<double> weights;          ///< normalised, sum to 1
};

/// Symmetric rules on the reference triangle, degree 2 (edge midpoints),
/// 4 (6 points) or 6 (12 points).
const QuadratureRule& quadrature(int degree);

}  // namespace lcq
