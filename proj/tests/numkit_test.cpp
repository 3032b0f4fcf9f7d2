#include <blochfact/numkit.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace blochfact;

namespace {

CMatrix random_matrix(int r, int c, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix a(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) a(i, j) = complex_gaussian(rng);
  return a;
}

double svd_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

TEST(Opnorm, ScalarModulus) {
  CMatrix a(1, 1);
  a(0, 0) = cplx(3, 4);
  EXPECT_NEAR(opnorm(a), 5.0, 1e-12);
}

TEST(Opnorm, Identity) {
  for (int n : {1, 2, 5, 17}) EXPECT_NEAR(opnorm(CMatrix::Identity(n, n)), 1.0, 1e-12);
}

TEST(Opnorm, JordanBlockMatchesGramQuadratic) {
  CMatrix a(2, 2);
  a << 1, 1, 0, 1;
  // A^H A = [[1,1],[1,2]]: eigenvalues (3 +- sqrt 5)/2
  const double lam = (3.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(opnorm(a), std::sqrt(lam), 1e-10 * std::sqrt(lam));
  EXPECT_NEAR(opnorm(a), std::numbers::phi, 1e-10);
}

TEST(Opnorm, RejectsNonFinite) {
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 1) = cplx(std::nan(""), 0);
  EXPECT_THROW(opnorm(a), InvalidInput);
}

TEST(Opnorm, AgreesWithSvdOnRandomMatrices) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const int r = 1 + static_cast<int>(s % 7), c = 1 + static_cast<int>((s * 3) % 9);
    CMatrix a = random_matrix(r, c, s);
    EXPECT_NEAR(opnorm(a), svd_norm(a), 1e-10 * svd_norm(a)) << "seed " << s;
  }
}

TEST(Opnorm, NormAxioms) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    CMatrix a = random_matrix(4, 5, 100 + s), b = random_matrix(4, 5, 200 + s);
    EXPECT_LE(opnorm(a + b), opnorm(a) + opnorm(b) + 1e-9);
    const cplx alpha(-1.3, 0.7);
    EXPECT_NEAR(opnorm(alpha * a), std::abs(alpha) * opnorm(a), 1e-9);
  }
}

TEST(Opnorm, UnitaryInvariance) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    CMatrix a = random_matrix(5, 5, 300 + s);
    CMatrix u = haar_unitary(5, 400 + s), v = haar_unitary(5, 500 + s);
    EXPECT_NEAR(opnorm(u * a * v), opnorm(a), 1e-8);
  }
}

TEST(LeastNorm, SingleCoordinateConstraint) {
  std::vector<LinearConstraint> cons{{CVector::Unit(3, 0), cplx(2.0)}};
  auto res = least_norm_solve(cons, 3);
  EXPECT_NEAR(std::abs(res.x(0) - 2.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(res.x(1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(res.x(2)), 0.0, 1e-12);
}

TEST(LeastNorm, EmptyGivesZero) {
  auto res = least_norm_solve({}, 4);
  EXPECT_EQ(res.x.size(), 4);
  EXPECT_EQ(res.x.norm(), 0.0);
}

TEST(LeastNorm, MatchesProjectionFormula) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    CMatrix a = random_matrix(2, 4, 600 + s);
    CVector b = random_matrix(2, 1, 700 + s);
    std::vector<LinearConstraint> cons{{a.row(0).transpose(), b(0)}, {a.row(1).transpose(), b(1)}};
    auto res = least_norm_solve(cons, 4);
    // oracle: x = A^H (A A^H)^{-1} b, with A acting bilinearly
    CVector oracle = a.adjoint() * (a * a.adjoint()).fullPivLu().solve(b);
    EXPECT_LE((res.x - oracle).norm(), 1e-9 * (1 + oracle.norm()));
    // orthogonal to the null space of A: x lies in the row space spanned by conj rows
    Eigen::FullPivLU<CMatrix> lu(a);
    CMatrix null = lu.kernel();
    EXPECT_LE((null.adjoint() * res.x).norm(), 1e-8);
  }
}

TEST(LeastNorm, InconsistentReportsResidual) {
  std::vector<LinearConstraint> cons{{CVector::Unit(2, 0), cplx(1.0)}, {CVector::Unit(2, 0), cplx(2.0)}};
  try {
    least_norm_solve(cons, 2);
    FAIL() << "expected Infeasible";
  } catch (const Infeasible& e) {
    EXPECT_GT(e.residual, 0.1);
  }
}

TEST(LpFeasible, SingleLowerBound) {
  std::vector<AffineInequality> q{{{1.0, 0.0}, 0.5}};
  auto w = lp_feasible(q, 2);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->valid());
  EXPECT_GE(w->weights[0], 0.5 - 1e-8);
}

TEST(LpFeasible, ContradictoryPair) {
  std::vector<AffineInequality> q{{{1.0, 0.0}, 0.9}, {{0.0, 1.0}, 0.9}};
  EXPECT_FALSE(lp_feasible(q, 2).has_value());
}

TEST(LpFeasible, DimensionMismatch) {
  std::vector<AffineInequality> q{{{1.0, 0.0, 0.0}, 0.1}};
  EXPECT_THROW(lp_feasible(q, 2), InvalidInput);
}

// Exhaustive search over the simplex grid with step 1/64 is the oracle.
TEST(LpFeasible, AgreesWithSimplexGridSearch) {
  constexpr int kSteps = 64;
  int feasible_count = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    Rng rng(split_seed(s, 77));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // Plant a feasible point for half the systems.
    const double a0 = std::uniform_real_distribution<double>(0, 1)(rng);
    const double a1 = std::uniform_real_distribution<double>(0, 1 - a0)(rng);
    const std::vector<double> planted{a0, a1, 1 - a0 - a1};
    std::vector<AffineInequality> q;
    for (int t = 0; t < 20; ++t) {
      AffineInequality ineq{{u(rng), u(rng), u(rng)}, 0.0};
      double lhs = 0;
      for (int k = 0; k < 3; ++k) lhs += ineq.coeffs[k] * planted[k];
      ineq.rhs = (s % 2 == 0) ? lhs - 0.05 * std::abs(u(rng)) : lhs + 0.3 * u(rng);
      q.push_back(ineq);
    }
    double grid_best = -1e9;
    for (int i = 0; i <= kSteps; ++i)
      for (int j = 0; i + j <= kSteps; ++j) {
        SimplexWeights w{{double(i) / kSteps, double(j) / kSteps, double(kSteps - i - j) / kSteps}};
        grid_best = std::max(grid_best, min_slack(q, w));
      }
    auto res = lp_feasible(q, 3);
    if (grid_best >= 0) {
      ASSERT_TRUE(res.has_value()) << "grid found a feasible point, seed " << s;
    }
    if (res) {
      ++feasible_count;
      EXPECT_TRUE(res->valid(1e-12));
      EXPECT_GE(min_slack(q, *res), -1e-8);
    } else {
      EXPECT_LT(grid_best, 0.0);
    }
    // The LP optimum dominates every grid point's min-slack once rows are
    // normalised identically, so compare the game values directly.
    RMatrix m(20, 3);
    for (int t = 0; t < 20; ++t)
      for (int k = 0; k < 3; ++k) m(t, k) = q[t].coeffs[k] - q[t].rhs;
    const double v = solve_matrix_game(m).value;
    EXPECT_GE(v, grid_best - 1e-9);
    EXPECT_LE(v, grid_best + 2.0 * 2.0 / kSteps);
  }
  EXPECT_GT(feasible_count, 10);
}

TEST(MatrixGame, MatchingPennies) {
  RMatrix m(2, 2);
  m << 1, -1, -1, 1;
  auto g = solve_matrix_game(m);
  EXPECT_NEAR(g.value, 0.0, 1e-12);
  EXPECT_NEAR(g.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(g.row_mixture[0], 0.5, 1e-12);
}

TEST(Haar, UnimodularScalar) {
  for (std::uint64_t s = 0; s < 10; ++s) EXPECT_NEAR(std::abs(haar_unitary(1, s)(0, 0)), 1.0, 1e-12);
}

TEST(Haar, Unitary) {
  CMatrix u = haar_unitary(4, 42);
  EXPECT_LE((u.adjoint() * u - CMatrix::Identity(4, 4)).norm(), 1e-10);
  EXPECT_THROW(haar_unitary(65, 1), InvalidInput);
}

TEST(Haar, FirstEntryModulusMonteCarlo) {
  double acc = 0.0;
  constexpr int kDraws = 1000;
  for (int s = 0; s < kDraws; ++s) acc += std::norm(haar_unitary(2, split_seed(9, 1, s))(0, 0));
  EXPECT_NEAR(acc / kDraws, 0.5, 0.05);
}

TEST(Haar, Deterministic) {
  EXPECT_EQ(haar_unitary(6, 123), haar_unitary(6, 123));
}
