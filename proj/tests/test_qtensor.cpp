#include "lcq/qtensor.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace lcq;
using doctest::Approx;

namespace {

// Directional derivative of F_B along E by central differences.
double fd_directional(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& E, const MaterialParams& p) {
  const double h = 1e-5;
  return (bulk_potential(Eigen::MatrixXd(Q + h * E), p) - bulk_potential(Eigen::MatrixXd(Q - h * E), p)) / (2 * h);
}

// Orthonormal basis of symmetric trace-free d x d matrices.
std::vector<Eigen::MatrixXd> stf_basis(int d) {
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(d, d);
      E(i, j) = E(j, i) = 1.0 / std::sqrt(2.0);
      out.push_back(E);
    }
  for (int k = 1; k < d; ++k) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < k; ++i) E(i, i) = 1.0;
    E(k, k) = -k;
    out.push_back(E / E.norm());
  }
  return out;
}

}  // namespace

TEST_CASE("bulk potential values") {
  MaterialParams p;
  p.A0 = 0.7;
  CHECK(bulk_potential(Eigen::Matrix2d::Zero().eval(), p) == Approx(0.7));
  p.A0 = 0.0;
  Eigen::Matrix2d Q2;
  Q2 << 0.5, 0, 0, -0.5;
  CHECK(bulk_potential(Q2, p) == Approx(0.175).epsilon(1e-14));
  Eigen::Matrix3d Q3 = Eigen::Vector3d(2.0 / 3, -1.0 / 3, -1.0 / 3).asDiagonal();
  CHECK(bulk_potential(Q3, p) == Approx(-0.1 + 8.0 / 27 + 4.0 / 9).epsilon(1e-14));
  CHECK(bulk_potential(Q3, p) == Approx(0.640741).epsilon(1e-6));
}

TEST_CASE("bulk gradient closed form") {
  MaterialParams p;
  CHECK(bulk_gradient(Eigen::Matrix2d::Zero().eval(), p).norm() == 0.0);
  Eigen::Matrix2d Q;
  Q << 0.5, 0, 0, -0.5;
  // aQ + c tr(Q^2) Q = -0.15 + 4 * 0.5 * 0.5; the Q^2 deviator vanishes.
  const QTensord G = bulk_gradient(Q, p);
  CHECK(G(0, 0) == Approx(0.85).epsilon(1e-14));
  CHECK(G(1, 1) == Approx(-0.85).epsilon(1e-14));
  CHECK(G(0, 1) == 0.0);
}

TEST_CASE("bulk gradient matches finite differences in d = 2 and d = 3") {
  MaterialParams p;
  std::mt19937_64 rng(7);
  for (int d : {2, 3}) {
    const auto basis = stf_basis(d);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Eigen::MatrixXd Q = test::sym_tracefree(rng, d, 1.0);
      const QTensord G = bulk_gradient(Q, p);
      CHECK(G.trace() == Approx(0.0).epsilon(1e-12).scale(1.0));
      for (const auto& E : basis) {
        const double fd = fd_directional(Q, E, p);
        const double an = (G.array() * E.array()).sum();
        worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
      }
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("split gradients difference equals the bulk gradient") {
  MaterialParams p;
  std::mt19937_64 rng(11);
  const auto z = split_gradients(Eigen::Matrix2d::Zero().eval(), p);
  CHECK(z.convex.norm() == 0.0);
  CHECK(z.concave.norm() == 0.0);
  for (int d : {2, 3})
    for (int k = 0; k < 200; ++k) {
      const Eigen::MatrixXd Q = test::sym_tracefree(rng, d, 2.0);
      const auto s = split_gradients(Q, p);
      CHECK((s.convex - s.concave - bulk_gradient(Q, p)).cwiseAbs().maxCoeff() <= 1e-13);
      CHECK(std::abs(s.convex.trace()) <= 1e-13);
      CHECK(std::abs(s.concave.trace()) <= 1e-13);
    }
}

TEST_CASE("split gradients are monotone under the convexity hypothesis") {
  MaterialParams p;
  REQUIRE(p.splitting_is_convex());
  std::mt19937_64 rng(13);
  double worst1 = 0.0, worst2 = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const int d = k % 2 ? 3 : 2;
    const Eigen::MatrixXd A = test::sym_tracefree(rng, d, 1.5), B = test::sym_tracefree(rng, d, 1.5);
    const auto sa = split_gradients(A, p), sb = split_gradients(B, p);
    worst1 = std::min(worst1, ((sa.convex - sb.convex).array() * (A - B).array()).sum());
    worst2 = std::min(worst2, ((sa.concave - sb.concave).array() * (A - B).array()).sum());
  }
  CHECK(worst1 >= -1e-12);
  CHECK(worst2 >= -1e-12);
  p.beta2 = 1.0;
  CHECK_FALSE(p.splitting_is_convex());
}

TEST_CASE("material validation") {
  MaterialParams p;
  CHECK_NOTHROW(p.validate());
  p.c = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("exact clamp values") {
  const auto t = TruncationConfig::clamp(2.0, 0.0);
  Eigen::Matrix2d Q;
  Q << 5, 0, -3, 0.4;
  const QTensord T = truncate(Q, t);
  CHECK(T(0, 0) == 1.0);
  CHECK(T(0, 1) == 0.0);
  CHECK(T(1, 0) == -1.0);
  CHECK(T(1, 1) == 0.4);
  const QTensord P = truncate_derivative(Q, t);
  CHECK(P(0, 0) == 0.0);
  CHECK(P(1, 0) == 0.0);
  CHECK(P(1, 1) == 1.0);
  // Kink of the exact clamp: derivative taken as 0.
  Eigen::Matrix2d K = Eigen::Matrix2d::Constant(1.0);
  CHECK(truncate_derivative(K, t)(0, 0) == 0.0);
}

TEST_CASE("truncation mode none is the identity") {
  TruncationConfig t;
  std::mt19937_64 rng(3);
  const Eigen::Matrix2d Q = Eigen::Matrix2d::Random() * 10;
  CHECK(truncate(Q, t) == Q);
  CHECK(truncate_derivative(Q, t) == Eigen::Matrix2d::Ones());
  CHECK(secant_ratio(Q, Eigen::Matrix2d::Zero().eval(), t) == Eigen::Matrix2d::Ones());
}

TEST_CASE("smooth clamp profile") {
  const auto t = TruncationConfig::clamp(2.0, -1.0);
  const double cap = 1.0, eps = t.band(2);
  CHECK(eps == Approx(0.05));
  auto f2 = [&](double y) { return truncate(Eigen::Matrix2d::Constant(y), t)(0, 0); };
  auto fp2 = [&](double y) { return truncate_derivative(Eigen::Matrix2d::Constant(y), t)(0, 0); };
  const double y0 = cap - 2 * eps;
  CHECK(f2(0.0) == 0.0);
  CHECK(f2(0.5) == 0.5);
  CHECK(f2(y0) == Approx(y0));
  CHECK(fp2(y0 - 1e-9) == 1.0);
  CHECK(fp2(cap + 0.1) == 0.0);
  CHECK(f2(cap + 3.0) == Approx(cap - eps));
  CHECK(f2(-cap - 3.0) == Approx(-(cap - eps)));
  // C1: derivative continuous across both band edges, value continuous.
  CHECK(fp2(y0 + 1e-9) == Approx(1.0).epsilon(1e-6));
  CHECK(fp2(cap - 1e-9) == Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(f2(cap - 1e-12) == Approx(cap - eps).epsilon(1e-10));
  // Derivative agrees with a finite difference inside the band.
  for (double y : {y0 + 0.01, y0 + 0.05, cap - 0.01}) CHECK(fp2(y) == Approx((f2(y + 1e-7) - f2(y - 1e-7)) / 2e-7).epsilon(1e-6));
  // Odd and monotone, Frobenius bound.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  double prev = f2(-5.0);
  for (int k = 1; k <= 2000; ++k) {
    const double y = -5.0 + 10.0 * k / 2000;
    CHECK(f2(y) >= prev - 1e-15);
    CHECK(f2(-y) == -f2(y));
    prev = f2(y);
  }
  for (int k = 0; k < 10000; ++k) {
    Eigen::Matrix2d Q;
    Q << u(rng), u(rng), u(rng), u(rng);
    CHECK(truncate(Q, t).norm() <= t.R);
    const QTensord P = truncate_derivative(Q, t);
    CHECK(P.minCoeff() >= 0.0);
    CHECK(P.maxCoeff() <= 1.0);
  }
  // Idempotent on the saturated region.
  Eigen::Matrix2d S = Eigen::Matrix2d::Constant(4.0);
  const QTensord TS = truncate(S, TruncationConfig::clamp(2.0, 0.0));
  CHECK(truncate(TS, TruncationConfig::clamp(2.0, 0.0)) == TS);
}

TEST_CASE("truncation config validation") {
  CHECK_NOTHROW(TruncationConfig::clamp(2.0, 0.0).validate(2));
  CHECK_THROWS_AS(TruncationConfig::clamp(2.0, 1.0).validate(2), std::invalid_argument);
  CHECK_THROWS_AS(TruncationConfig::clamp(-1.0, 0.0).validate(2), std::invalid_argument);
}

TEST_CASE("secant ratio examples") {
  const auto t = TruncationConfig::clamp(2.0, 0.0);
  auto ratio = [&](double a, double b) {
    return secant_ratio(Eigen::Matrix2d::Constant(a), Eigen::Matrix2d::Constant(b), t)(0, 0);
  };
  CHECK(ratio(2.0, 0.5) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(ratio(0.5, 0.5) == 1.0);
  CHECK(ratio(3.0, 2.0) == 0.0);
  CHECK(ratio(0.5, 0.5 + 1e-14) == 1.0);
}

TEST_CASE("secant ratio stays in [0, 1] and is Lipschitz in its first argument") {
  const auto t = TruncationConfig::clamp(2.0, -1.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2);
  double lip = 0.0;
  for (int k = 0; k < 20000; ++k) {
    Eigen::Matrix2d A, B, D;
    A << u(rng), u(rng), u(rng), u(rng);
    B << u(rng), u(rng), u(rng), u(rng);
    D << u(rng), u(rng), u(rng), u(rng);
    const double h = 1e-4;
    const QTensord P = secant_ratio(A, B, t), Ph = secant_ratio(A + h * D, B, t);
    CHECK(P.minCoeff() >= 0.0);
    CHECK(P.maxCoeff() <= 1.0);
    for (int i = 0; i < 4; ++i)
      if (std::abs(A.data()[i] - B.data()[i]) > 1e-3)
        lip = std::max(lip, std::abs(Ph.data()[i] - P.data()[i]) / (h * std::abs(D.data()[i]) + 1e-300));
  }
  // |d/dA secant| <= sup|T''| = 1 / (2 eps); allow a factor 2 for the difference quotient.
  CHECK(lip <= 2.0 / (2.0 * t.band(2)) + 1e-6);
}

TEST_CASE("leading director") {
  Eigen::Matrix2d Q;
  Q << -0.5, 0, 0, 0.5;
  auto d = leading_director(Q);
  CHECK(d.eigenvalue == Approx(0.5));
  CHECK(d.direction.x() == Approx(0.0).scale(1.0));
  CHECK(d.direction.y() == Approx(1.0));
  Q << 0.5, 0, 0, -0.5;
  d = leading_director(Q);
  CHECK(d.eigenvalue == Approx(0.5));
  CHECK(d.direction.x() == Approx(1.0));
  CHECK(d.direction.y() == 0.0);
  Q << 0, 0.5, 0.5, 0;
  d = leading_director(Q);
  CHECK(d.eigenvalue == Approx(0.5));
  CHECK(d.direction.x() == Approx(std::sqrt(0.5)));
  CHECK(d.direction.y() == Approx(std::sqrt(0.5)));
  d = leading_director(Eigen::Matrix2d::Zero().eval());
  CHECK(d.degenerate);
  CHECK(d.eigenvalue == 0.0);
  CHECK(d.direction == Eigen::Vector2d(0, 1));

  std::mt19937_64 rng(19);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Matrix2d S = test::sym_tracefree2(rng, 3.0) + 0.3 * Eigen::Matrix2d::Identity() * (k % 3);
    const auto r = leading_director(S);
    CHECK((S * r.direction - r.eigenvalue * r.direction).norm() <= 1e-12);
    CHECK(r.direction.norm() == Approx(1.0).epsilon(1e-14));
    CHECK(r.direction.y() >= 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
    CHECK(r.eigenvalue == Approx(es.eigenvalues()[1]).epsilon(1e-12));
  }
}

TEST_CASE("uniaxial bulk minimum") {
  MaterialParams p;
  const double m = uniaxial_bulk_minimum(p, 2);
  // On the family s(n n^T - I/2): tr Q^2 = s^2/2, tr Q^3 = 0, so F = a s^2/4 + c s^4/16.
  // Minimum at s^2 = -2a/c: F = -a^2/(4c).
  CHECK(m == Approx(-p.a * p.a / (4 * p.c)).epsilon(1e-10));
}
