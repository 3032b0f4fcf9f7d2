#include <gtest/gtest.h>

#include <numbers>

#include "blochfact/duality.hpp"

using namespace blochfact;

namespace {

VecMolecule random_vec_molecule(std::uint64_t seed, int d, int n) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VecMolecule g(d);
  for (int i = 0; i < n; ++i) {
    CVector x(d);
    for (int k = 0; k < d; ++k) x(k) = complex_gaussian(rng);
    g.add(complex_gaussian(rng), DiscPoint(std::polar(0.9 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng))), x);
  }
  return g;
}

}  // namespace

TEST(VecPairing, KernelExtremality) {
  const DiscPoint z(cplx(0.3, -0.4));
  VecMolecule g(2);
  g.add(1.0, z, CVector::Unit(2, 0));
  const BlochFunc f = BlochFunc::kernel(z, CVector::Unit(2, 0));
  EXPECT_NEAR(std::abs(vec_pairing(f, g) - 1.0 / (1.0 - 0.25)), 0.0, 1e-12);
}

TEST(VecPairing, ZeroPayloadAndBilinearity) {
  VecMolecule g(3);
  g.add(2.0, DiscPoint(0.1), CVector::Zero(3));
  const BlochFunc f = random_ball_function_cheap(6, 3, 1);
  EXPECT_EQ(vec_pairing(f, g), cplx(0.0));
  const VecMolecule h = random_vec_molecule(3, 3, 4);
  EXPECT_NEAR(std::abs(vec_pairing(f, cplx(2.0) * h) - 2.0 * vec_pairing(f, h)), 0.0, 1e-12);
  EXPECT_THROW(vec_pairing(random_ball_function_cheap(4, 2, 0), h), InvalidInput);
}

TEST(W2Upper, SingleTermAndZero) {
  const CVector x = CVector::Constant(2, cplx(1.0, 1.0));
  VecMolecule g(2);
  g.add(cplx(0, 3), DiscPoint(0.5), x);
  EXPECT_LE(w2_ub(g).value, x.norm() * 3.0 / 0.75 + 1e-12);
  EXPECT_EQ(w2_ub(VecMolecule(2)).value, 0.0);
}

TEST(W2Upper, MergedNoLargerThanSplit) {
  const CVector x = CVector::Unit(2, 1);
  VecMolecule split(2), merged(2);
  split.add(1.0, DiscPoint(0.4), x).add(1.0, DiscPoint(0.4), x);
  merged.add(2.0, DiscPoint(0.4), x);
  EXPECT_LE(w2_ub(merged).value, w2_ub(split).value + 1e-12);
}

TEST(W2Upper, SeminormAxioms) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const VecMolecule a = random_vec_molecule(10 + s, 3, 3), b = random_vec_molecule(500 + s, 3, 2);
    EXPECT_LE(w2_ub(a + b).value, w2_ub(a).value + w2_ub(b).value + 1e-9);
    const cplx alpha(-1.5, 0.7);
    EXPECT_NEAR(w2_ub(alpha * a).value, std::abs(alpha) * w2_ub(a).value, 1e-9 * w2_ub(a).value);
  }
}

TEST(W2Lower, RankOneTightness) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const VecMolecule g = random_vec_molecule(70 + s, 1 + static_cast<int>(s % 4), 1);
    const double lb = w2_lb(g), ub = w2_ub(g).value;
    const auto& t = g.terms[0];
    EXPECT_NEAR(lb, std::abs(t.lambda) * t.x.norm() / t.z.weight(), 2e-2 * lb);
    EXPECT_LE(ub / lb, 1.05);
  }
  EXPECT_EQ(w2_lb(VecMolecule(2)), 0.0);
}

TEST(W2Lower, SandwichOnRandomMolecules) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const VecMolecule g = random_vec_molecule(900 + s, 1 + static_cast<int>(s % 4), 1 + static_cast<int>(s % 6));
    EXPECT_LE(w2_lb(g), w2_ub(g).value + 1e-9);
  }
}

TEST(W2Lower, ZeroBoundCandidateInconsistent) {
  VecMolecule g(1);
  g.add(1.0, DiscPoint(0.2), CVector::Ones(1));
  std::vector<DualCandidate> c{{BlochFunc::monomial(1), 0.0, "bad"}};
  EXPECT_THROW(w2_lb(g, c), InternalInconsistency);
}

TEST(Crossnorm, KernelEqualityAndZero) {
  const DiscPoint z(0.6);
  const CVector x = CVector::Unit(2, 0);
  VecMolecule g(2);
  g.add(1.0, z, x);
  const auto r = crossnorm_checks(g, BlochFunc::kernel(z), x);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, r.rhs, 2e-3 * r.rhs);
  const auto zero = crossnorm_checks(g, BlochFunc(1), x);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.margin, zero.rhs * (1 + 1e-9));
}

TEST(Crossnorm, RandomTrials) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const VecMolecule g = random_vec_molecule(2000 + s, 2, 3);
    Rng rng(s);
    CVector xs(2);
    xs << complex_gaussian(rng), complex_gaussian(rng);
    EXPECT_TRUE(crossnorm_checks(g, random_ball_function_cheap(6, 1, s), xs).pass);
  }
}
