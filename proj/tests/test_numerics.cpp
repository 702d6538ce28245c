#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "symscat/errors.hpp"
#include "symscat/numerics.hpp"
#include "test_support.hpp"

using namespace symscat;
using symscat::testing::random_matrix;

namespace {

double identity_residual(const CMatrix& m, const CMatrix& inv) {
  return frobenius_norm(m * inv - CMatrix::identity(m.rows()));
}

}  // namespace

TEST(Numerics, InvertIdentityAndPermutation) {
  EXPECT_EQ(invert(CMatrix::identity(3)), CMatrix::identity(3));
  const CMatrix swap{{0.0, 1.0}, {1.0, 0.0}};
  EXPECT_LT(symscat::testing::max_abs_diff(invert(swap), swap), 1e-15);
}

TEST(Numerics, InvertNeedsPivotingOnZeroDiagonal) {
  // Zero leading pivot; unpivoted elimination would divide by zero.
  const CMatrix m{{0.0, 1.0, 2.0}, {1.0, 0.0, 3.0}, {4.0, -3.0, 8.0}};
  const CMatrix inv = invert(m);
  EXPECT_LE(identity_residual(m, inv), 1e-10 * std::max(1.0, frobenius_norm(m) * frobenius_norm(inv)));
}

TEST(Numerics, InvertMatchesClosedFormForGainLossResonators) {
  // Delta = H_c - 2J cos(k) for {i gamma, -i gamma, 0}; its port block and
  // determinant have closed forms in terms of e^{ik}, e^{i phi}.
  const double j = 1.3, gamma = 0.7, phi = 0.9, k = -1.1;
  const Complex e = std::exp(kI * k);
  const Complex ep = std::exp(kI * phi);
  CMatrix delta{{kI * gamma, j, j}, {j, -kI * gamma, j / ep}, {j, j * ep, 0.0}};
  for (std::size_t i = 0; i < 3; ++i) delta(i, i) -= 2.0 * j * std::cos(k);

  const Complex det = j * j * j *
                      (1.0 / ep + ep - std::pow(e, -3) - std::pow(e, 3) -
                       gamma * gamma / (j * j) * (1.0 / e + e));
  EXPECT_LT(std::abs(determinant(delta) - det), 1e-12);

  const Complex g = gamma / j;
  const Complex pre = j * j / det;
  const Complex mm = pre * (1.0 + e * e + 1.0 / (e * e) + kI * g * (e + 1.0 / e));
  const Complex mn = pre * (e + 1.0 / e + 1.0 / ep + kI * g);
  const Complex nm = pre * (e + 1.0 / e + ep + kI * g);
  const Complex nn = pre * (1.0 + e * e + 1.0 / (e * e) + g * g);

  const CMatrix inv = invert(delta);
  EXPECT_LT(std::abs(inv(0, 0) - mm), 1e-12);
  EXPECT_LT(std::abs(inv(0, 2) - mn), 1e-12);
  EXPECT_LT(std::abs(inv(2, 0) - nm), 1e-12);
  EXPECT_LT(std::abs(inv(2, 2) - nn), 1e-12);
}

TEST(Numerics, SingularMatrixIsRejected) {
  const CMatrix m{{1.0, 2.0}, {2.0, 4.0}};
  EXPECT_THROW(invert(m), SingularMatrix);
  const std::vector<Complex> b{1.0, 1.0};
  EXPECT_THROW(solve(m, b), SingularMatrix);
  EXPECT_THROW(invert(CMatrix::zeros(2, 2)), SingularMatrix);
  EXPECT_EQ(determinant(m), Complex{});
}

TEST(Numerics, NonSquareIsDimensionMismatch) {
  EXPECT_THROW(invert(CMatrix(2, 3)), DimensionMismatch);
  const std::vector<Complex> b{1.0, 2.0, 3.0};
  EXPECT_THROW(solve(CMatrix::identity(2), b), DimensionMismatch);
}

TEST(Numerics, SolveSimpleSystems) {
  const std::vector<Complex> b{{1.0, 2.0}, {-3.0, 0.5}};
  const auto x = solve(CMatrix::identity(2), b);
  EXPECT_EQ(x[0], b[0]);
  EXPECT_EQ(x[1], b[1]);

  const CMatrix two{{2.0, 0.0}, {0.0, 2.0}};
  const std::vector<Complex> ones{1.0, 1.0};
  const auto half = solve(two, ones);
  EXPECT_DOUBLE_EQ(half[0].real(), 0.5);
  EXPECT_DOUBLE_EQ(half[1].real(), 0.5);
}

TEST(Numerics, FrobeniusNorm) {
  EXPECT_EQ(frobenius_norm(CMatrix::zeros(3, 3)), 0.0);
  EXPECT_DOUBLE_EQ(frobenius_norm(CMatrix::identity(5)), std::sqrt(5.0));
  const CMatrix m{{3.0, 4.0 * kI}, {0.0, 0.0}};
  EXPECT_DOUBLE_EQ(frobenius_norm(m), 5.0);
}

TEST(NumericsProperty, SolveRoundTripAndAgreesWithInverse) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const CMatrix m = random_matrix(rng, n, n, 2.0) + CMatrix::identity(n) * 3.0;
    const CMatrix xs = random_matrix(rng, n, 1);
    const std::vector<Complex> x_star(xs.entries().begin(), xs.entries().end());
    const CVector b = m * std::span<const Complex>(x_star);
    const CVector x = solve(m, b);
    const CVector via_inverse = invert(m) * std::span<const Complex>(b);
    double err = 0.0, agree = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(x[i] - x_star[i]));
      agree = std::max(agree, std::abs(x[i] - via_inverse[i]));
    }
    EXPECT_LT(err, 1e-9);
    EXPECT_LT(agree, 1e-9 * std::max(1.0, vector_norm(x)));
    // Backward error bound.
    const CVector r = m * std::span<const Complex>(x);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::norm(r[i] - b[i]);
    EXPECT_LE(std::sqrt(res), 1e-10 * (frobenius_norm(m) * vector_norm(x) + vector_norm(b)));
  }
}

TEST(NumericsProperty, DoubleInversionIsIdentity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const CMatrix m = random_matrix(rng, n, n) + CMatrix::identity(n) * 2.0;
    const CMatrix back = invert(invert(m));
    EXPECT_LT(frobenius_norm(back - m) / frobenius_norm(m), 1e-9);
    const CMatrix inv = invert(m);
    EXPECT_LE(identity_residual(m, inv),
              1e-10 * std::max(1.0, frobenius_norm(m) * frobenius_norm(inv)));
  }
}

TEST(NumericsProperty, UnitaryPredicate) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 50; ++trial) {
    // Householder reflection times a diagonal phase matrix: unitary.
    const std::size_t n = 2 + trial % 5;
    const CMatrix v = random_matrix(rng, n, 1);
    const double vv = std::pow(frobenius_norm(v), 2);
    CMatrix u = CMatrix::identity(n) - v * v.adjoint() * (2.0 / vv);
    CVector phases(n);
    for (auto& p : phases) p = std::polar(1.0, angle(rng));
    u = u * CMatrix::diagonal(phases);
    EXPECT_TRUE(is_unitary(u));
    EXPECT_FALSE(is_unitary(u * 1.001));
  }
  EXPECT_FALSE(is_unitary(CMatrix(2, 3)));
}
