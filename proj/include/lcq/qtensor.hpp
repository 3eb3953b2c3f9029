#pragma once

// Pointwise Q-tensor algebra: Landau-de Gennes bulk potential, its convex
// splitting, the entrywise truncation operator and its secant quotient.
//
// Everything here is a pure function of its arguments and is templated on the
// Eigen expression type, so the same code runs on fixed 2x2/3x3 matrices,
// dynamic-size blocks, or higher precision scalars used by test oracles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcq {

/// Dense d x d tensor, d in {2, 3}. Storage never touches the heap.
template <typename Scalar>
using QTensor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

using QTensord = QTensor<double>;

struct MaterialParams {
  double a = -0.3;
  double b = -4.0;
  double c = 4.0;
  double A0 = 0.0;
  double beta1 = 8.0;
  double beta2 = 8.0;
  double M = 1.0;
  double L = 1.0;
  double eps1 = 2.5;
  double eps2 = 0.5;
  double eps3 = 0.01;

  /// Throws std::invalid_argument when c, L, M or eps1 is not positive.
  void validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("material: c must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("material: L must be positive");
    if (!(M > 0.0)) throw std::invalid_argument("material: M must be positive");
    if (!(eps1 > 0.0)) throw std::invalid_argument("material: eps1 must be positive");
  }

  /// beta1 >= max(|b|, a) and beta2 >= max(|b|, c): both halves of the split are convex.
  bool splitting_is_convex() const {
    return beta1 >= std::max(std::abs(b), a) && beta2 >= std::max(std::abs(b), c);
  }
};

enum class TruncationMode { none, smooth_clamp };

struct TruncationConfig {
  TruncationMode mode = TruncationMode::none;
  double R = 2.0;
  /// Half-width of the blend band. Negative means "use the default 0.05 R/d".
  double eps_T = -1.0;

  bool enabled() const { return mode == TruncationMode::smooth_clamp; }

  double band(int dim) const { return eps_T < 0.0 ? 0.05 * R / dim : eps_T; }

  void validate(int dim) const {
    if (mode == TruncationMode::none) return;
    if (!(R > 0.0)) throw std::invalid_argument("truncation: R must be positive");
    const double e = band(dim);
    if (!(e >= 0.0 && e < R / dim))
      throw std::invalid_argument("truncation: eps_T must lie in [0, R/d)");
  }

  static TruncationConfig clamp(double R, double eps_T) {
    return TruncationConfig{TruncationMode::smooth_clamp, R, eps_T};
  }
};

// ---------------------------------------------------------------------------
// Bulk potential

template <typename Derived>
typename Derived::Scalar bulk_potential(const Eigen::MatrixBase<Derived>& Q,
                                        const MaterialParams& p) {
  using S = typename Derived::Scalar;
  const auto Q2 = (Q * Q).eval();
  const S trQ2 = Q2.trace();
  const S trQ3 = (Q2 * Q).trace();
  return S(p.a) / 2 * trQ2 - S(p.b) / 3 * trQ3 + S(p.c) / 4 * trQ2 * trQ2 + S(p.A0);
}

/// dF_B/dQ = aQ - b(Q^2 - tr(Q^2)/d I) + c tr(Q^2) Q
template <typename Derived>
QTensor<typename Derived::Scalar> bulk_gradient(const Eigen::MatrixBase<Derived>& Q,
                                                const MaterialParams& p) {
  using S = typename Derived::Scalar;
  const Eigen::Index d = Q.rows();
  const QTensor<S> Q2 = Q * Q;
  const S trQ2 = Q2.trace();
  QTensor<S> dev = Q2;
  dev.diagonal().array() -= trQ2 / S(d);
  return S(p.a) * Q - S(p.b) * dev + S(p.c) * trQ2 * Q;
}

template <typename Scalar>
struct SplitGradients {
  QTensor<Scalar> convex;   ///< dF1/dQ, treated implicitly
  QTensor<Scalar> concave;  ///< dF2/dQ, treated explicitly
};

/// Gradients of F1 and F2 with F_B = F1 - F2. The F1 gradient carries the
/// trace correction on the Q^2 term, so both gradients are trace-free
/// whenever Q is.
template <typename Derived>
SplitGradients<typename Derived::Scalar> split_gradients(const Eigen::MatrixBase<Derived>& Q,
                                                         const MaterialParams& p) {
  using S = typename Derived::Scalar;
  const Eigen::Index d = Q.rows();
  const QTensor<S> Q2 = Q * Q;
  const S trQ2 = Q2.trace();
  QTensor<S> dev = Q2;
  dev.diagonal().array() -= trQ2 / S(d);
  SplitGradients<S> g;
  g.convex = S(p.beta1) * Q - S(p.b) * dev + S(p.beta2) * trQ2 * Q;
  g.concave = (S(p.beta1) - S(p.a)) * Q + (S(p.beta2) - S(p.c)) * trQ2 * Q;
  return g;
}

/// Value of F_B on the uniaxial family s (n n^T - I/d), minimised over s by a
/// 1-D scan followed by golden-section refinement. Used to pick A0 so that
/// F_B >= 0 along that family.
inline double uniaxial_bulk_minimum(const MaterialParams& p, int dim) {
  MaterialParams q = p;
  q.A0 = 0.0;
  auto energy = [&](double s) {
    QTensord Q = QTensord::Identity(dim, dim) * (-s / dim);
    Q(0, 0) += s;
    return bulk_potential(Q, q);
  };
  constexpr int samples = 4001;
  const double lo = -3.0, hi = 3.0, h = (hi - lo) / (samples - 1);
  int best = 0;
  double fbest = energy(lo);
  for (int k = 1; k < samples; ++k) {
    const double f = energy(lo + k * h);
    if (f < fbest) { fbest = f; best = k; }
  }
  double x0 = lo + std::max(best - 1, 0) * h;
  double x1 = lo + std::min(best + 1, samples - 1) * h;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double m1 = x1 - phi * (x1 - x0), m2 = x0 + phi * (x1 - x0);
    if (energy(m1) < energy(m2)) x1 = m2; else x0 = m1;
  }
  return std::min(fbest, energy(0.5 * (x0 + x1)));
}

// ---------------------------------------------------------------------------
// Truncation

namespace detail {

// Scalar profile of the smooth clamp. Identity below y0 = R/d - 2 eps, a
// quadratic blend with slope going linearly from 1 to 0 on [y0, R/d], constant
// above. The saturation level is R/d - eps (R/d for the exact clamp).
template <typename S>
S clamp_value(S y, S cap, S eps) {
  const S ay = std::abs(y);
  const S y0 = cap - 2 * eps;
  S v;
  if (ay <= y0) {
    v = ay;
  } else if (ay >= cap) {
    v = cap - eps;
  } else {
    const S w = 2 * eps;
    const S z = ay - y0;
    v = y0 + z - z * z / (2 * w);
  }
  return y < 0 ? -v : v;
}

template <typename S>
S clamp_slope(S y, S cap, S eps) {
  const S ay = std::abs(y);
  const S y0 = cap - 2 * eps;
  if (ay <= y0 && !(eps == S(0) && ay == cap)) return S(1);
  if (ay >= cap) return S(0);
  return S(1) - (ay - y0) / (2 * eps);
}

}  // namespace detail

/// Entrywise truncation T_R. Every entry of the result is bounded by R/d,
/// hence |T_R(Q)|_F <= R.
template <typename Derived>
QTensor<typename Derived::Scalar> truncate(const Eigen::MatrixBase<Derived>& Q,
                                           const TruncationConfig& t) {
  using S = typename Derived::Scalar;
  QTensor<S> out = Q;
  if (!t.enabled()) return out;
  const int d = static_cast<int>(Q.rows());
  const S cap = S(t.R) / S(d);
  const S eps = S(t.band(d));
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out.data()[i] = detail::clamp_value(out.data()[i], cap, eps);
  return out;
}

/// Entrywise derivative P(Q) of T_R. Entries lie in [0, 1]; at the kink of
/// the exact clamp the derivative is taken as 0.
template <typename Derived>
QTensor<typename Derived::Scalar> truncate_derivative(const Eigen::MatrixBase<Derived>& Q,
                                                      const TruncationConfig& t) {
  using S = typename Derived::Scalar;
  const int d = static_cast<int>(Q.rows());
  QTensor<S> out = QTensor<S>::Ones(d, d);
  if (!t.enabled()) return out;
  const S cap = S(t.R) / S(d);
  const S eps = S(t.band(d));
  const QTensor<S> q = Q;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out.data()[i] = detail::clamp_slope(q.data()[i], cap, eps);
  return out;
}

/// Entrywise secant quotient of T_R between A and B, falling back to the
/// derivative at B when the entries (nearly) coincide.
template <typename DerivedA, typename DerivedB>
QTensor<typename DerivedA::Scalar> secant_ratio(const Eigen::MatrixBase<DerivedA>& A,
                                                const Eigen::MatrixBase<DerivedB>& B,
                                                const TruncationConfig& t) {
  using S = typename DerivedA::Scalar;
  const int d = static_cast<int>(A.rows());
  QTensor<S> out = QTensor<S>::Ones(d, d);
  if (!t.enabled()) return out;
  const QTensor<S> a = A, b = B;
  const S cap = S(t.R) / S(d);
  const S eps = S(t.band(d));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const S x = a.data()[i], y = b.data()[i];
    const S diff = x - y;
    const S scale = std::max({S(1), std::abs(x), std::abs(y)});
    S r;
    if (std::abs(diff) > S(1e-12) * scale)
      r = (detail::clamp_value(x, cap, eps) - detail::clamp_value(y, cap, eps)) / diff;
    else
      r = detail::clamp_slope(y, cap, eps);
    // The quotient is in [0, 1] exactly; clamp away rounding in the blend band.
    out.data()[i] = std::clamp(r, S(0), S(1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2-D eigen-decomposition

struct Director {
  double eigenvalue = 0.0;
  Eigen::Vector2d direction{0.0, 1.0};
  bool degenerate = false;
};

/// Leading eigenpair of a symmetric 2x2 tensor in closed form. The returned
/// direction has a non-negative second component (first component
/// non-negative when the second vanishes). Isotropic input (equal
/// eigenvalues) yields the direction (0, 1) with the degenerate flag set.
template <typename Derived>
Director leading_director(const Eigen::MatrixBase<Derived>& Q, double tol = 1e-14) {
  if (Q.rows() != 2 || Q.cols() != 2)
    throw std::invalid_argument("leading_director: tensor must be 2x2");
  const double a = Q(0, 0), c = Q(1, 1);
  const double b = 0.5 * (Q(0, 1) + Q(1, 0));
  const double mean = 0.5 * (a + c);
  const double half = 0.5 * (a - c);
  const double radius = std::hypot(half, b);
  Director out;
  out.eigenvalue = mean + radius;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (radius <= tol * std::max(1.0, scale)) {
    out.degenerate = true;
    return out;
  }
  // Two algebraically equivalent eigenvector forms; pick the one built from
  // the larger components.
  Eigen::Vector2d v;
  if (half >= 0.0)
    v = Eigen::Vector2d(half + radius, b);
  else
    v = Eigen::Vector2d(b, radius - half);
  v.normalize();
  if (v.y() < 0.0 || (v.y() == 0.0 && v.x() < 0.0)) v = -v;
  out.direction = v;
  return out;
}

}  // namespace lcq
