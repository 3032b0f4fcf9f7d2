#pragma once

// Scalar Bloch molecules sum_i lambda_i gamma_{z_i}, where gamma_z(f) = f'(z),
// and two-sided estimates of their norm in the predual of the Bloch space.

#include <cmath>
#include <cstdint>
#include <vector>

#include "blochcore.hpp"

namespace blochfact {

struct WeightedPair {
  cplx lambda;
  DiscPoint z;
};

/// Finite sequence (lambda_i, z_i) in C x D.
struct WeightedSeq {
  std::vector<WeightedPair> pairs;

  [[nodiscard]] std::size_t size() const { return pairs.size(); }
  [[nodiscard]] bool empty() const { return pairs.empty(); }
};

/// The functional sum_i lambda_i gamma_{z_i}.
struct Molecule {
  WeightedSeq seq;

  Molecule() = default;
  explicit Molecule(WeightedSeq s) : seq(std::move(s)) {}
  Molecule(std::initializer_list<WeightedPair> il) { seq.pairs.assign(il); }
};

/// Lambda(f)(m) = sum_i lambda_i f'(z_i) for scalar f.
inline cplx pairing(const Molecule& m, const BlochFunc& f) {
  if (f.dim != 1) throw InvalidInput("pairing: function must be scalar-valued");
  cplx acc = 0.0;
  for (const auto& p : m.seq.pairs) acc += p.lambda * f.deriv(p.z.value())(0);
  return acc;
}

/// sum_i |lambda_i| / (1 - |z_i|^2); the atoms have norm 1/(1-|z|^2).
inline double molecule_norm_ub_triangle(const Molecule& m) {
  double s = 0.0;
  for (const auto& p : m.seq.pairs) s += std::abs(p.lambda) / p.z.weight();
  return s;
}

/// Lower bound max |pairing(m, g)| over unit-ball test functions: N random
/// polynomials (triangle-normalised), the kernels f_{z_i} and phase-aligned
/// kernel combinations (normalised by their certified seminorm).
inline double molecule_norm_lb(const Molecule& m, int n_samples, int degree, std::uint64_t seed,
                               const GridSpec& cert_grid = GridSpec::coarse()) {
  if (n_samples < 0 || n_samples > 100000) throw InvalidInput("molecule_norm_lb: N must lie in [0, 1e5]");
  double best = 0.0;
  if (m.seq.empty()) return 0.0;

  for (const auto& p : m.seq.pairs) {
    // rho(f_z) = 1 exactly
    best = std::max(best, std::abs(pairing(m, BlochFunc::kernel(p.z))));
  }
  for (int variant = 0; variant < 2; ++variant) {
    BlochFunc g(1);
    for (const auto& p : m.seq.pairs) {
      const double a = std::abs(p.lambda);
      if (a == 0.0) continue;
      const cplx c = variant == 0 ? std::conj(p.lambda) / a : std::conj(p.lambda);
      g.add(CVector::Constant(1, c), Kernel{p.z});
    }
    if (g.terms.empty()) continue;
    const double up = bloch_seminorm(g, cert_grid).certified_upper;
    if (up > 0.0) best = std::max(best, std::abs(pairing(m, g)) / up);
  }
  for (int i = 0; i < n_samples; ++i) {
    const BlochFunc g = random_ball_function_cheap(degree, 1, split_seed(seed, 0x301, static_cast<std::uint64_t>(i)));
    best = std::max(best, std::abs(pairing(m, g)));
  }
  return best;
}

struct MoleculeNormBracket {
  double lower = 0.0;          // certified: |pairing| / certified seminorm of the optimiser
  double upper = 0.0;          // discretised program optimum (plus barrier gap)
  double program_value = 0.0;
  double duality_gap = 0.0;
  int degree = 0;
  int n_r = 0, n_theta = 0;
  double r_cert = 0.0;
  std::size_t constraint_count = 0;
  int newton_steps = 0;
  std::vector<cplx> coefficients;  // h(w) = sum_k a_k w^k at the optimum
};

/// Constraint mesh defaults for molecule_norm_opt.
inline GridSpec molecule_grid() {
  GridSpec g;
  g.n_r = 64;
  g.n_theta = 128;
  return g;
}

/// Discretised dual program
///   maximise Re sum_i lambda_i h(z_i) over polynomials h of degree < D
///   subject to (1-|w_s|^2) |h(w_s)| <= 1 on the grid plus the support points,
/// solved by a log-barrier path-following Newton method. The optimiser's
/// antiderivative, divided by its certified seminorm, supplies the lower bound.
inline MoleculeNormBracket molecule_norm_opt(const Molecule& m, int degree = 32,
                                             const GridSpec& grid = molecule_grid(), double tol = 1e-4,
                                             int max_newton = 600) {
  if (degree < 1 || degree > 64) throw InvalidInput("molecule_norm_opt: degree must lie in [1, 64]");
  grid.validate();
  MoleculeNormBracket out;
  out.degree = degree;
  out.n_r = grid.n_r;
  out.n_theta = grid.n_theta;
  out.r_cert = grid.r_cert;

  const double triangle = molecule_norm_ub_triangle(m);
  if (triangle == 0.0) return out;

  std::vector<cplx> pts = grid.points();
  for (const auto& p : m.seq.pairs) pts.push_back(p.z.value());
  const auto ns = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index nd = degree;
  const Eigen::Index nx = 2 * nd;
  out.constraint_count = pts.size();

  // Real-coordinate constraint rows: v_s . a = alpha_s . x + i beta_s . x
  RMatrix alpha(ns, nx), beta(ns, nx);
  for (Eigen::Index s = 0; s < ns; ++s) {
    const cplx w = pts[static_cast<std::size_t>(s)];
    cplx v = 1.0 - std::norm(w);
    for (Eigen::Index k = 0; k < nd; ++k) {
      alpha(s, k) = v.real();
      alpha(s, nd + k) = -v.imag();
      beta(s, k) = v.imag();
      beta(s, nd + k) = v.real();
      v *= w;
    }
  }
  RVector obj(nx);
  for (Eigen::Index k = 0; k < nd; ++k) {
    cplx c = 0.0;
    for (const auto& p : m.seq.pairs) c += p.lambda * std::pow(p.z.value(), static_cast<int>(k));
    obj(k) = c.real();
    obj(nd + k) = -c.imag();
  }

  RVector x = RVector::Zero(nx);
  auto slack = [&](const RVector& xx, RVector& p, RVector& q) {
    p = alpha * xx;
    q = beta * xx;
    return RVector((1.0 - p.array().square() - q.array().square()).matrix());
  };

  const double nu = static_cast<double>(ns);
  double t = nu / (10.0 * triangle);
  int steps = 0;
  RVector p, q;
  while (true) {
    // Newton on F(x) = t obj.x + sum log(phi)
    for (;;) {
      RVector phi = slack(x, p, q);
      const RVector inv = phi.cwiseInverse();
      const RVector wp = (p.array() * inv.array()).matrix();
      const RVector wq = (q.array() * inv.array()).matrix();
      RVector grad = t * obj - 2.0 * (alpha.transpose() * wp + beta.transpose() * wq);
      RMatrix wrow = alpha.array().colwise() * wp.array() + beta.array().colwise() * wq.array();
      RMatrix sa = alpha.array().colwise() * inv.array().sqrt();
      RMatrix sb = beta.array().colwise() * inv.array().sqrt();
      RMatrix negh = 2.0 * (sa.transpose() * sa + sb.transpose() * sb) + 4.0 * wrow.transpose() * wrow;
      Eigen::LLT<RMatrix> llt(negh);
      RVector dx = llt.solve(grad);
      const double dec2 = grad.dot(dx);
      if (++steps > max_newton)
        throw BudgetExceeded("molecule_norm_opt: Newton budget exceeded", obj.dot(x));
      if (dec2 / 2.0 <= 1e-10) break;
      double step = 1.0;
      auto merit = [&](const RVector& xx, bool& ok) {
        RVector pp, qq;
        RVector ph = slack(xx, pp, qq);
        ok = (ph.array() > 0.0).all();
        return ok ? t * obj.dot(xx) + ph.array().log().sum() : 0.0;
      };
      bool ok = true;
      const double f0 = merit(x, ok);
      RVector xn;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        xn = x + step * dx;
        const double f1 = merit(xn, ok);
        if (ok && f1 >= f0 + 0.25 * step * dec2) break;
        if (ls == 59) step = 0.0;
      }
      if (step == 0.0) break;
      x = xn;
    }
    const double gap = nu / t;
    const double val = obj.dot(x);
    if (gap <= tol * std::max(val, 1e-300) || gap <= 1e-14) {
      out.program_value = val;
      out.duality_gap = gap;
      break;
    }
    t *= 20.0;
  }
  out.newton_steps = steps;
  out.upper = std::min(out.program_value + out.duality_gap, triangle);

  // Certified lower bound from the optimiser.
  BlochFunc g(1);
  out.coefficients.resize(static_cast<std::size_t>(nd));
  for (Eigen::Index k = 0; k < nd; ++k) {
    const cplx a(x(k), x(nd + k));
    out.coefficients[static_cast<std::size_t>(k)] = a;
    if (a != cplx(0.0)) g.add(CVector::Constant(1, a / static_cast<double>(k + 1)), Monomial{static_cast<int>(k) + 1});
  }
  if (!g.terms.empty()) {
    const double up = bloch_seminorm(g, GridSpec::coarse()).certified_upper;
    if (up > 0.0) out.lower = std::abs(pairing(m, g)) / up;
  }
  out.lower = std::min(out.lower, out.upper);
  return out;
}

}  // namespace blochfact
