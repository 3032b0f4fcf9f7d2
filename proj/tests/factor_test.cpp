#include <gtest/gtest.h>

#include <numbers>

#include "blochfact/factor.hpp"

using namespace blochfact;

namespace {

CVector vec(std::initializer_list<cplx> il) {
  CVector v(static_cast<Eigen::Index>(il.size()));
  Eigen::Index i = 0;
  for (cplx c : il) v(i++) = c;
  return v;
}

const double kMono2 = 4.0 / (3.0 * std::sqrt(3.0));

}  // namespace

TEST(RankOne, KernelBracket) {
  const CVector x = vec({1.0, cplx(0, 2), -0.5});
  const auto r = rank_one(BlochFunc::kernel(DiscPoint(0.4)), x);
  EXPECT_LE(r.lower, x.norm() * (1 + 1e-12));
  EXPECT_GE(r.upper, x.norm() * (1 - 1e-12));
  EXPECT_LE((r.upper - r.lower) / x.norm(), 2e-3);
  EXPECT_EQ(r.f.dim, 3);
  EXPECT_NEAR((r.f.deriv(0.2) - BlochFunc::kernel(DiscPoint(0.4)).deriv(0.2)(0) * x).norm(), 0.0, 1e-14);
}

TEST(RankOne, ZeroVectorAndMonomial) {
  const auto z = rank_one(BlochFunc::monomial(1), CVector::Zero(2));
  EXPECT_EQ(z.lower, 0.0);
  EXPECT_EQ(z.upper, 0.0);
  const auto m = rank_one(BlochFunc::monomial(2), vec({2.0}));
  EXPECT_NEAR(m.lower, 2 * kMono2, 1e-5);
  EXPECT_GE(m.upper, 2 * kMono2 * (1 - 1e-12));
}

TEST(Kwapien, SingletonsReachSeminorm) {
  const BlochFunc f = BlochFunc::monomial(2, vec({1.0, cplx(0, 1)}));
  const double rho = bloch_seminorm(f).lower;
  EXPECT_GE(kwapien_lb(f, 50, 1), rho - 1e-9);
  EXPECT_LE(kwapien_lb(f, 50, 1), rho * (1 + 1e-6));
}

TEST(Kwapien, ZeroAndRankOneKernel) {
  EXPECT_EQ(kwapien_lb(BlochFunc(2), 10, 0), 0.0);
  const CVector x = vec({0.6, 0.8, cplx(0, 1)});
  const BlochFunc f = rank_one(BlochFunc::kernel(DiscPoint(0.6)), x).f;
  const double v = kwapien_lb(f, 1000, 7);
  EXPECT_GE(v, x.norm() * (1 - 2e-3));
  EXPECT_LE(v, x.norm() * (1 + 1e-9));
}

TEST(Pietsch, SingleKernelSampleIsExact) {
  const DiscPoint z(cplx(0.2, 0.3));
  const CVector x = vec({1.0, 2.0});
  const BlochFunc f = rank_one(BlochFunc::kernel(z), x).f;
  std::vector<PietschSample> fam{{BlochFunc::kernel(z), SampleKind::GridKernel, {}, 1.0}};
  const auto r = pietsch_ub_family(f, fam, 0.0);
  EXPECT_NEAR(r.c, x.norm(), 1e-9 * x.norm());
  EXPECT_LE(certificate_violation(f, r.cert), 1e-8);
}

TEST(Pietsch, ZeroMapping) {
  const auto r = pietsch_ub(BlochFunc(2));
  EXPECT_EQ(r.c, 0.0);
  const auto w = build_factorization(BlochFunc(2), r.cert);
  EXPECT_EQ(w.residual, 0.0);
  EXPECT_EQ(w.opnorm_t, 0.0);
}

TEST(Pietsch, MonomialSandwich) {
  const CVector x = vec({1.0, -1.0});
  const BlochFunc f = BlochFunc::monomial(2, x);
  const auto r = pietsch_ub(f);
  const double rho = bloch_seminorm(f).lower;
  EXPECT_GE(r.c, rho);
  EXPECT_LE(r.c, kMono2 * x.norm() * 1.02);
  EXPECT_LE(certificate_violation(f, r.cert), 1e-8);
  EXPECT_TRUE(r.cert.weights.valid(1e-9));
  EXPECT_LE(r.cert.samples.size(), 256u);
}

TEST(Pietsch, TwoTermSumAndFactorization) {
  BlochFunc f = BlochFunc::monomial(1, vec({1.0, 0.0, 0.0}));
  f.add(vec({0.0, 1.0, 0.5}), Monomial{2});
  f.add(vec({0.3, 0.0, cplx(0, 0.2)}), Kernel{DiscPoint(cplx(-0.5, 0.2))});
  const auto r = pietsch_ub(f);
  EXPECT_LE(certificate_violation(f, r.cert), 1e-8);
  const double rho = bloch_seminorm(f).lower;
  EXPECT_GE(r.c, rho);
  const auto w = build_factorization(f, r.cert);
  EXPECT_LE(w.residual, 1e-6);
  EXPECT_GE(w.bound(), rho * (1 - 1e-9));
  EXPECT_LE(w.bound(), r.c * 1.02);
  EXPECT_GE(kwapien_lb(f, 100, 3), rho - 1e-9);
  EXPECT_LE(kwapien_lb(f, 100, 3), r.c);
}

TEST(Factorization, RankOneKernel) {
  const DiscPoint z(0.5);
  const CVector x = vec({cplx(0, 1), 2.0});
  const BlochFunc f = rank_one(BlochFunc::kernel(z), x).f;
  const auto r = pietsch_ub(f);
  EXPECT_NEAR(r.c, x.norm(), 2e-2 * x.norm());
  const auto w = build_factorization(f, r.cert);
  EXPECT_LE(w.residual, 1e-6);
  EXPECT_NEAR(w.bound(), x.norm(), 2e-2 * x.norm());
}

TEST(Factorization, MonomialOneIdentityLike) {
  const CVector x = vec({3.0, 4.0});
  const BlochFunc f = BlochFunc::monomial(1, x);
  const auto r = pietsch_ub(f);
  const auto w = build_factorization(f, r.cert);
  EXPECT_LE(w.residual, 1e-6);
  EXPECT_NEAR(w.opnorm_t * w.rho_g_upper, 5.0, 5e-3);
}

TEST(Unitary, ZeroAndRankOne) {
  EXPECT_EQ(unitary_criterion_check(BlochFunc(2), 1.0, 4, 50, 0).max_ratio, 0.0);
  const CVector x = vec({1.0, cplx(0, 1)});
  const BlochFunc f = rank_one(BlochFunc::kernel(DiscPoint(0.3)), x).f;
  const auto rep = unitary_criterion_check(f, x.norm(), 8, 1000, 11);
  EXPECT_LE(rep.max_ratio, 1 + 1e-6);
  EXPECT_GT(rep.max_ratio, 0.0);
  EXPECT_THROW(unitary_criterion_check(f, 1.0, 17, 1, 0), InvalidInput);
}

TEST(Unitary, SizeOneIsSingletonKwapien) {
  const BlochFunc f = BlochFunc::monomial(2, vec({1.0}));
  const auto rep = unitary_criterion_check(f, kMono2, 1, 500, 5);
  EXPECT_LE(rep.max_ratio, 1 + 1e-9);
}

TEST(Ideal, IdentityKernel) {
  const CVector x = vec({1.0, 0.5});
  const BlochFunc f = rank_one(BlochFunc::kernel(DiscPoint(0.5)), x).f;
  const auto r = ideal_inequality_check(CMatrix::Identity(2, 2), f, DiscPoint(0.0), 1);
  EXPECT_GE(r.contraction_margin, 0.0);
  EXPECT_GE(r.ideal_margin, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Ideal, ZeroOperatorAndMonomialDrop) {
  const CVector x = vec({1.0});
  const BlochFunc f = BlochFunc::monomial(1, x);
  const auto z = ideal_inequality_check(CMatrix::Zero(1, 1), f, DiscPoint(0.0), 1);
  EXPECT_EQ(z.kwapien_tfh, 0.0);
  const auto r = ideal_inequality_check(CMatrix::Identity(1, 1), f, DiscPoint(0.0), 1);
  EXPECT_NEAR(r.rho_fh_lower, kMono2, 1e-6);
  EXPECT_NEAR(r.rho_f_upper, 1.0, 1e-5);
}

TEST(Psum2, ZeroAndKernelSingleton) {
  EXPECT_EQ(psum2_ub(BlochFunc(1), 10, 10).estimate, 0.0);
  const CVector x = vec({2.0});
  const BlochFunc f = rank_one(BlochFunc::kernel(DiscPoint(0.4)), x).f;
  const auto p = psum2_ub(f, 50, 50);
  EXPECT_NEAR(p.estimate, 2.0, 2e-3 * 2.0);
}

TEST(Psum2, DominatesPietschAndMonotone) {
  BlochFunc f = BlochFunc::monomial(1, vec({1.0, 0.0}));
  f.add(vec({0.0, 1.0}), Monomial{2});
  const auto pu = pietsch_ub(f);
  const auto p1 = psum2_ub(f, 100, 20);
  const auto p2 = psum2_ub(f, 100, 40);
  EXPECT_GE(p1.estimate * 1.05, pu.c);
  EXPECT_LE(p2.estimate, p1.estimate);
}
