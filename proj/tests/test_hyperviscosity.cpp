#include <cmath>
#include <random>

#include "doctest.h"
#include "swe/error.hpp"
#include "swe/hyperviscosity.hpp"

using namespace swe;

namespace {

Eigen::MatrixXd p_matrix(const SbpOperatorPair& pair) {
  return Eigen::Map<const Eigen::VectorXd>(pair.p_weights.data(), static_cast<long>(pair.size())).asDiagonal();
}

// Direct dense evaluation of the product forms.
Eigen::MatrixXd dense_oracle(const SbpOperatorPair& pair, int order, double alpha, const Field& c) {
  const Eigen::MatrixXd dp = pair.d_plus.to_dense();
  const Eigen::MatrixXd dm = pair.d_minus.to_dense();
  const Eigen::MatrixXd p = p_matrix(pair);
  const Eigen::MatrixXd pinv = p.inverse();
  const Eigen::MatrixXd cm = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<long>(c.size())).asDiagonal();
  if (order == 4) {
    const Eigen::MatrixXd k = dm.transpose() * p * dm;
    return -alpha * pinv * (k * (cm * pinv) * k);
  }
  const Eigen::MatrixXd left = dp.transpose() * p * dp * pinv * dp.transpose();
  const Eigen::MatrixXd right = dp * pinv * dp.transpose() * p * dp;
  return -alpha * pinv * (left * (p * cm) * right);
}

}  // namespace

TEST_CASE("smooth boxcar") {
  const Grid1D g = Grid1D::bounded(200, 10.0);
  const Field c = smooth_boxcar(g, 0.1);
  CHECK(c.front() == 0.0);
  CHECK(c.back() == 0.0);
  CHECK(c[100] == 1.0);
  CHECK(c[10] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(smootherstep(0.5) == doctest::Approx(6 / 32.0 - 15 / 16.0 + 10 / 8.0));
  // One-sided second-order estimates of c' and c'' at the ends vanish at least
  // linearly under refinement.
  double prev1 = 0.0;
  double prev2 = 0.0;
  for (std::size_t n : {200u, 400u, 800u}) {
    const Grid1D gr = Grid1D::bounded(n, 10.0);
    const Field cr = smooth_boxcar(gr, 0.1);
    const double dx = gr.dx;
    const double d1 = std::abs(-3 * cr[0] + 4 * cr[1] - cr[2]) / (2 * dx);
    const double d2 = std::abs(2 * cr[0] - 5 * cr[1] + 4 * cr[2] - cr[3]) / (dx * dx);
    CHECK(d1 <= dx);
    if (prev1 > 0.0) {
      CHECK(d1 <= 0.5 * prev1);
      CHECK(d2 <= 0.5 * prev2);
    }
    prev1 = d1;
    prev2 = d2;
  }
  CHECK_THROWS_AS(smooth_boxcar(g, 0.0), Error);
  CHECK_THROWS_AS(smooth_boxcar(g, 0.6), Error);
  const Field cp = smooth_boxcar(Grid1D::periodic_grid(16, 1.0), 0.1);
  for (double v : cp) CHECK(v == 1.0);
}

TEST_CASE("hyper-viscosity matches the dense product forms") {
  for (Family fam : {Family::DP, Family::DRP, Family::Traditional}) {
    for (int q : {4, 5, 6}) {
      if (fam == Family::Traditional && q == 5) continue;
      for (int order : {4, 6}) {
        const SbpOperatorPair pair = build_operator_pair(fam, q, false, Grid1D::bounded(40, 1.0));
        const HyperViscosity hv(pair, order, 0.7, 0.2);
        const Eigen::MatrixXd ref = dense_oracle(pair, order, hv.alpha(), hv.c_profile());
        const Eigen::MatrixXd got = hv.dense();
        INFO(operator_name(fam, q), " order ", order);
        CHECK((ref - got).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("periodic order 4 equals -alpha D+ D- c D+ D-") {
  const SbpOperatorPair pair = build_operator_pair(Family::DP, 4, true, Grid1D::periodic_grid(20, 1.0));
  const HyperViscosity hv(pair, 4, 0.3);
  const Eigen::MatrixXd dp = pair.d_plus.to_dense();
  const Eigen::MatrixXd dm = pair.d_minus.to_dense();
  const Eigen::MatrixXd ref = -hv.alpha() * dp * dm * dp * dm;
  CHECK((ref - hv.dense()).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  const HyperViscosity hv6(pair, 6, 0.3);
  const Eigen::MatrixXd ref6 = hv6.alpha() * dm * dp * dm * dp * dm * dp;
  CHECK((ref6 - hv6.dense()).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, ref6.cwiseAbs().maxCoeff()));
}

TEST_CASE("periodic shortcut agrees with the reference chain") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int q : {4, 5, 6}) {
    for (int order : {4, 6}) {
      const SbpOperatorPair pair = build_operator_pair(Family::DRP, q, true, Grid1D::periodic_grid(48, 2.0));
      const HyperViscosity hv(pair, order, 1.0);
      Field f(48);
      for (double& v : f) v = uni(rng);
      Field a(48);
      Field b(48);
      hv.apply(f.data(), a.data());
      hv.apply_reference(f.data(), b.data());
      for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12);
    }
  }
}

TEST_CASE("hyper-viscosity is symmetric and negative semi-definite") {
  for (bool periodic : {false, true}) {
    for (Family fam : {Family::DP, Family::DRP}) {
      for (int q : {4, 5, 6}) {
        for (int order : {4, 6}) {
          const Grid1D g = periodic ? Grid1D::periodic_grid(32, 1.0) : Grid1D::bounded(32, 1.0);
          const SbpOperatorPair pair = build_operator_pair(fam, q, periodic, g);
          const HyperViscosity hv(pair, order, 1.0);
          const Eigen::MatrixXd a = p_matrix(pair) * hv.dense();
          const double scale = a.cwiseAbs().maxCoeff();
          CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * scale);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
          CHECK(es.eigenvalues().maxCoeff() <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("constants are annihilated and dissipation is non-positive") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const SbpOperatorPair pair = build_operator_pair(Family::DP, 6, false, Grid1D::bounded(80, 3.0));
  for (int order : {4, 6}) {
    const HyperViscosity hv(pair, order, 0.1);
    const Field z = apply_hv(hv, Field(pair.size(), 2.5));
    for (double v : z) CHECK(std::abs(v) <= 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
      Field f(pair.size());
      double nf = 0.0;
      for (double& v : f) {
        v = uni(rng);
        nf += v * v;
      }
      const Field af = apply_hv(hv, f);
      double e = 0.0;
      for (std::size_t j = 0; j < f.size(); ++j) e += f[j] * pair.p_weights[j] * af[j];
      CHECK(e <= 1e-12 * nf);
    }
  }
}

TEST_CASE("alpha scaling under refinement") {
  for (int order : {4, 6}) {
    double prev = 0.0;
    for (std::size_t n : {64u, 128u, 256u}) {
      const Grid1D g = Grid1D::periodic_grid(n, 1.0);
      const SbpOperatorPair pair = build_operator_pair(Family::DP, 6, true, g);
      const HyperViscosity hv(pair, order, 1.0);
      Field f(n);
      for (std::size_t j = 0; j < n; ++j) f[j] = std::sin(2 * M_PI * g.coords[j]);
      const Field af = apply_hv(hv, f);
      double norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) norm += g.dx * af[j] * af[j];
      norm = std::sqrt(norm);
      if (prev > 0.0) {
        const double expected = std::pow(2.0, -(order - 1));
        CHECK(norm / prev == doctest::Approx(expected).epsilon(0.3));
      }
      prev = norm;
    }
  }
}

TEST_CASE("1D dissipation tendency") {
  const SbpOperatorPair pair = build_operator_pair(Family::DP, 4, false, Grid1D::bounded(20, 1.0));
  const HyperViscosity hv(pair, 4, 0.5, 0.25);
  const FluxForm form = FluxForm::nonlinear(9.81);
  const std::size_t n = pair.size();
  State1D rest{Field(n, 2.0), Field(n, 0.0)};
  State1D t = dissipation_tendency_1d(hv, rest, form);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(std::abs(t.h[j]) <= 1e-12);
    CHECK(std::abs(t.u[j]) <= 1e-12);
  }
  State1D s{Field(n), Field(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) s.h[j] = 1.0 + 0.3 * std::sin(7.0 * j);
  t = dissipation_tendency_1d(hv, s, form);
  const Field ah = apply_hv(hv, s.h);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(t.h[j] == doctest::Approx(ah[j] / 9.81).epsilon(1e-12));
    CHECK(t.u[j] == 0.0);
  }
  // Dense oracle: W^{-1} (I2 (x) P^{-1}A) q on a random subcritical state.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    s.h[j] = 1.0 + 0.2 * uni(rng);
    s.u[j] = 0.5 * uni(rng);
  }
  const Eigen::MatrixXd a = hv.dense();
  const long nl = static_cast<long>(n);
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(2 * nl, 2 * nl);
  big.topLeftCorner(nl, nl) = a;
  big.bottomRightCorner(nl, nl) = a;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * nl, 2 * nl);
  Eigen::VectorXd q(2 * nl);
  for (long j = 0; j < nl; ++j) {
    w(j, j) = 9.81;
    w(j, nl + j) = w(nl + j, j) = 0.5 * s.u[static_cast<std::size_t>(j)];
    w(nl + j, nl + j) = 0.5 * s.h[static_cast<std::size_t>(j)];
    q(j) = s.h[static_cast<std::size_t>(j)];
    q(nl + j) = s.u[static_cast<std::size_t>(j)];
  }
  const Eigen::VectorXd ref = w.lu().solve(big * q);
  t = dissipation_tendency_1d(hv, s, form);
  for (long j = 0; j < nl; ++j) {
    CHECK(std::abs(t.h[static_cast<std::size_t>(j)] - ref(j)) <= 1e-12 * (1 + std::abs(ref(j))));
    CHECK(std::abs(t.u[static_cast<std::size_t>(j)] - ref(nl + j)) <= 1e-12 * (1 + std::abs(ref(nl + j))));
  }
  s.h[3] = -1.0;
  CHECK_THROWS_AS(dissipation_tendency_1d(hv, s, form), Error);
}

TEST_CASE("2D dissipation tendency") {
  const std::size_t n = 16;
  const Grid1D g = Grid1D::periodic_grid(n, 2.0);
  const SbpOperatorPair pair = build_operator_pair(Family::DP, 4, true, g);
  const HyperViscosity hv(pair, 4, 0.5);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  // Separable field against the Kronecker product.
  Field fx(n);
  Field gy(n);
  for (std::size_t i = 0; i < n; ++i) {
    fx[i] = uni(rng);
    gy[i] = uni(rng);
  }
  Field sep(n * n);
  for (std::size_t i = 0; i < n; ++i) for (std::size_t j = 0; j < n; ++j) sep[i * n + j] = fx[i] * gy[j];
  const Eigen::MatrixXd a = hv.dense();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(static_cast<long>(n), static_cast<long>(n));
  Eigen::MatrixXd kron(static_cast<long>(n * n), static_cast<long>(n * n));
  for (long i = 0; i < static_cast<long>(n); ++i) {
    for (long k = 0; k < static_cast<long>(n); ++k) {
      kron.block(i * static_cast<long>(n), k * static_cast<long>(n), static_cast<long>(n), static_cast<long>(n)) =
          a(i, k) * id + (i == k ? a : Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n)));
    }
  }
  const Eigen::VectorXd ref = kron * Eigen::Map<const Eigen::VectorXd>(sep.data(), static_cast<long>(n * n));
  Field rx(n * n);
  Field ry(n * n);
  sweep(n, Axis::X, sep.data(), rx.data(), [&](const double* x, double* y) { hv.apply(x, y); });
  sweep(n, Axis::Y, sep.data(), ry.data(), [&](const double* x, double* y) { hv.apply(x, y); });
  for (std::size_t k = 0; k < n * n; ++k) CHECK(std::abs(rx[k] + ry[k] - ref(static_cast<long>(k))) <= 1e-12);

  State2D s{n, Field(n * n), Field(n * n), Field(n * n)};
  State2D c{n, Field(n * n, 3.0), Field(n * n, 0.2), Field(n * n, -0.1)};
  const State2D tc = dissipation_tendency_2d(hv, hv, c, 9.81);
  for (std::size_t k = 0; k < n * n; ++k) CHECK(std::abs(tc.h[k]) + std::abs(tc.u[k]) + std::abs(tc.v[k]) <= 1e-11);
  for (int trial = 0; trial < 10; ++trial) {
    double nq = 0.0;
    for (std::size_t k = 0; k < n * n; ++k) {
      s.h[k] = 2.0 + 0.5 * uni(rng);
      s.u[k] = uni(rng);
      s.v[k] = uni(rng);
      nq += s.h[k] * s.h[k] + s.u[k] * s.u[k] + s.v[k] * s.v[k];
    }
    const State2D t = dissipation_tendency_2d(hv, hv, s, 9.81);
    double rate = 0.0;
    for (std::size_t k = 0; k < n * n; ++k) {
      const double h = s.h[k];
      const double u = s.u[k];
      const double v = s.v[k];
      const double kinetic = 9.81 * h + 0.5 * (u * u + v * v);
      rate += g.dx * g.dx * (kinetic * t.h[k] + h * u * t.u[k] + h * v * t.v[k]);
    }
    CHECK(rate <= 1e-11 * nq);
  }
}
