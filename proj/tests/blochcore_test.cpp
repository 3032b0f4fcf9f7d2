#include <blochfact/blochcore.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace blochfact;

TEST(DiscPoint, RejectsBoundary) {
  EXPECT_THROW(DiscPoint(1.0), InvalidInput);
  EXPECT_THROW(DiscPoint(cplx(0.8, 0.8)), InvalidInput);
  EXPECT_NO_THROW(DiscPoint(0.999));
}

TEST(DerivEval, MonomialOneIsPayload) {
  CVector x(2);
  x << cplx(1, 2), cplx(-3, 0.5);
  auto f = BlochFunc::monomial(1, x);
  for (cplx w : {cplx(0, 0), cplx(0.3, -0.2), cplx(-0.9, 0)})
    EXPECT_LE((deriv_eval(f, w) - x).norm(), 1e-15);
}

TEST(DerivEval, KernelAtOwnPointIsExtremal) {
  for (cplx z : {cplx(0, 0), cplx(0, 0.3), cplx(0.7, 0), cplx(-0.5, 0.2)}) {
    auto f = BlochFunc::kernel(z);
    const cplx d = deriv_eval(f, z)(0);
    EXPECT_NEAR(std::abs((1.0 - std::norm(z)) * d - 1.0), 0.0, 1e-14);
  }
}

TEST(DerivEval, KernelHalfAtOriginFiniteDifference) {
  auto f = BlochFunc::kernel(0.5);
  const cplx d = deriv_eval(f, 0.0)(0);
  EXPECT_NEAR(std::abs(d - 0.75), 0.0, 1e-15);
  const double h = 1e-6;
  const cplx fd = (f.value(h)(0) - f.value(-h)(0)) / (2 * h);
  EXPECT_NEAR(std::abs(fd - 0.75), 0.0, 1e-9);
}

TEST(DerivEval, FiniteDifferencesOnMixedCombination) {
  BlochFunc f(2);
  CVector a(2), b(2), c(2);
  a << 1, cplx(0, 1);
  b << cplx(0.5, -1), 2;
  c << -1, cplx(0.3, 0.3);
  f.add(a, Monomial{3}).add(b, Kernel{DiscPoint(0.4, 0.5)}).add(c, Monomial{1});
  const cplx w(0.2, -0.35);
  const double h = 1e-6;
  CVector fd = (f.value(w + h) - f.value(w - h)) / (2 * h);
  EXPECT_LE((fd - f.deriv(w)).norm(), 1e-8);
  EXPECT_LE(f.value(0.0).norm(), 0.0);
}

TEST(DerivEval, Linearity) {
  auto f = BlochFunc::kernel(DiscPoint(0.2, 0.1), CVector::Constant(2, cplx(1, -1)));
  BlochFunc g(2);
  g.add(CVector::Constant(2, cplx(0.5, 2)), Monomial{4});
  const cplx alpha(2.0, -0.5);
  for (cplx w : {cplx(0.1, 0.1), cplx(-0.6, 0.2)}) {
    EXPECT_LE(((f + g).deriv(w) - f.deriv(w) - g.deriv(w)).norm(), 1e-14);
    EXPECT_LE(((alpha * f).deriv(w) - alpha * f.deriv(w)).norm(), 1e-14);
  }
}

TEST(BlochSeminorm, KernelsBracketOne) {
  for (cplx z : {cplx(0, 0), cplx(0, 0.3), cplx(0.7, 0)}) {
    auto br = bloch_seminorm(BlochFunc::kernel(z));
    EXPECT_LE(br.lower, 1.0 + 1e-12);
    EXPECT_GE(br.certified_upper, 1.0);
    EXPECT_GE(br.lower, 1.0 - 1e-3);
    EXPECT_LE(br.certified_upper, 1.0 + 1e-3);
    EXPECT_LE(std::abs(br.grid_argmax - z), GridSpec{}.cell_diameter_at(z)) << z;
  }
}

TEST(BlochSeminorm, MonomialOneIsExactlyOne) {
  auto br = bloch_seminorm(BlochFunc::monomial(1));
  EXPECT_EQ(br.lower, 1.0);
  EXPECT_LE(br.certified_upper, 1.0 + 2e-6);
}

TEST(BlochSeminorm, MonomialTwoCalculus) {
  const double exact = 4.0 / (3.0 * std::sqrt(3.0));
  // dense radial oracle of (1-r^2) 2r
  double oracle = 0;
  for (int i = 0; i <= 1000000; ++i) {
    const double r = i / 1000000.0;
    oracle = std::max(oracle, (1 - r * r) * 2 * r);
  }
  EXPECT_NEAR(oracle, exact, 1e-10);
  auto br = bloch_seminorm(BlochFunc::monomial(2));
  EXPECT_NEAR(br.lower, exact, 1e-4);
  EXPECT_NEAR(br.certified_upper, exact, 1e-4);
  EXPECT_LE(br.lower, exact + 1e-15);
  EXPECT_GE(br.certified_upper, exact);
  EXPECT_NEAR(basis_fn::monomial_seminorm(2), exact, 1e-15);
}

TEST(BlochSeminorm, ZeroFunction) {
  BlochFunc f(3);
  auto br = bloch_seminorm(f);
  EXPECT_EQ(br.lower, 0.0);
  EXPECT_EQ(br.certified_upper, 0.0);
}

TEST(BlochSeminorm, LipschitzModeIsAlsoSound) {
  GridSpec g = GridSpec::coarse();
  g.mode = DerivativeBound::Lipschitz;
  g.rel_tol = 1e-4;
  auto br = bloch_seminorm(BlochFunc::kernel(DiscPoint(0.3, -0.4)), g);
  EXPECT_LE(br.lower, 1.0 + 1e-12);
  EXPECT_GE(br.certified_upper, 1.0);
  EXPECT_LE(br.certified_upper, 1.0 + 1e-3);
}

TEST(BlochSeminorm, RefinementMonotone) {
  std::vector<BlochFunc> fs{BlochFunc::kernel(DiscPoint(0.7, 0.1)), BlochFunc::monomial(2),
                            BlochFunc::monomial(5, cplx(0, 2)),
                            random_ball_function(6, 2, 11), random_ball_function(12, 1, 12)};
  for (const auto& f : fs) {
    GridSpec g1;
    g1.n_r = 16;
    g1.n_theta = 16;
    GridSpec g2 = g1;
    g2.n_r = 32;
    g2.n_theta = 32;
    auto b1 = bloch_seminorm(f, g1), b2 = bloch_seminorm(f, g2);
    EXPECT_GE(b2.grid_lower, b1.grid_lower);
    EXPECT_GE(b2.lower, b1.lower - 1e-12);
    EXPECT_LE(b2.certified_upper, b1.certified_upper + 1e-12);
    EXPECT_LE(b1.lower, b1.certified_upper);
  }
}

TEST(BlochSeminorm, Homogeneity) {
  auto f = random_ball_function(8, 2, 5);
  const cplx alpha(-0.4, 1.7);
  GridSpec g = GridSpec::coarse();
  auto b = bloch_seminorm(f, g), ba = bloch_seminorm(alpha * f, g);
  EXPECT_NEAR(ba.grid_lower, std::abs(alpha) * b.grid_lower, 1e-12);
  EXPECT_NEAR(ba.lower, std::abs(alpha) * b.lower, 1e-12);
}

TEST(BlochSeminorm, DenseSamplingNeverExceedsUpper) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    auto f = random_ball_function(10, 2, 100 + s);
    f = f + BlochFunc::kernel(DiscPoint(0.6, -0.3), CVector::Constant(2, cplx(0.2, 0.1)));
    auto br = bloch_seminorm(f, GridSpec::coarse());
    Rng rng(s);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20000; ++i) {
      const cplx w = std::polar(std::sqrt(u(rng)) * 0.99999, 2 * std::numbers::pi * u(rng));
      EXPECT_LE((1 - std::norm(w)) * f.deriv(w).norm(), br.certified_upper);
    }
  }
}

TEST(RandomBall, InsideUnitBall) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto f = random_ball_function(1 + static_cast<int>(s) * 7, 2, s);
    EXPECT_LE(bloch_seminorm(f, GridSpec::coarse()).certified_upper, 1.0 + 1e-12);
    EXPECT_LE(bloch_seminorm(f).certified_upper, 1.0 + 1e-12);
  }
}

TEST(RandomBall, DegreeOneIsNormalisedIdentity) {
  auto f = random_ball_function(1, 1, 3);
  ASSERT_EQ(f.terms.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<Monomial>(f.terms[0].basis));
  EXPECT_NEAR(bloch_seminorm(f).lower, 1.0, 2e-6);
}

TEST(RandomBall, SeedsDiffer) {
  auto a = random_ball_function(5, 1, 1), b = random_ball_function(5, 1, 2);
  EXPECT_NE(a.terms[0].payload(0), b.terms[0].payload(0));
  auto c = random_ball_function(5, 1, 1);
  EXPECT_EQ(a.terms[2].payload(0), c.terms[2].payload(0));
}

TEST(RandomBall, CheapSamplerInsideBall) {
  for (std::uint64_t s = 0; s < 8; ++s)
    EXPECT_LE(bloch_seminorm(random_ball_function_cheap(20, 2, s), GridSpec::coarse()).lower, 1.0);
}

TEST(SelfMap, ZeroParameter) {
  auto h = self_map_blaschke(0.0);
  EXPECT_NEAR(std::abs(h.value(0.5) + 0.25), 0.0, 1e-15);
  EXPECT_EQ(h.value(0.0), cplx(0.0));
}

TEST(SelfMap, FixesOriginAndMapsIntoDisc) {
  for (cplx a : {cplx(0.5, 0), cplx(-0.3, 0.6), cplx(0, 0.9)}) {
    auto h = self_map_blaschke(a);
    EXPECT_EQ(h.value(0.0), cplx(0.0));
    double mx = 0;
    for (const cplx& w : GridSpec{}.points()) mx = std::max(mx, std::abs(h.value(w)));
    EXPECT_LT(mx, 1.0);
    const cplx w(0.3, 0.2);
    const double step = 1e-6;
    EXPECT_NEAR(std::abs((h.value(w + step) - h.value(w - step)) / (2 * step) - h.deriv(w)), 0.0, 1e-8);
  }
}

TEST(SeminormLower, CompositionOfMonomial) {
  // f = w x, h(w) = -w^2  => f o h = -w^2 x
  CVector x = CVector::Constant(2, cplx(1, 1));
  ComposedMap m{CMatrix::Identity(2, 2), BlochFunc::monomial(1, x), self_map_blaschke(0.0)};
  auto br = seminorm_lower(m, GridSpec::coarse());
  EXPECT_NEAR(br.lower, 4.0 / (3.0 * std::sqrt(3.0)) * x.norm(), 1e-9);
}
