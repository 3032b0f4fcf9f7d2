#pragma once

// Vector-valued molecules sum_i lambda_i gamma_{z_i} (x) x_i, the w2 cross-norm
// bracket and the duality pairing against C^d-valued Bloch mappings.

#include <optional>
#include <vector>

#include "factor.hpp"

namespace blochfact {

struct VecTerm {
  cplx lambda;
  DiscPoint z;
  CVector x;
};

struct VecMolecule {
  int dim = 1;
  std::vector<VecTerm> terms;

  VecMolecule() = default;
  explicit VecMolecule(int d) : dim(d) {
    if (d < 1) throw InvalidInput("VecMolecule: dimension must be positive");
  }

  VecMolecule& add(cplx lambda, DiscPoint z, const CVector& x) {
    if (x.size() != dim) throw InvalidInput("VecMolecule: payload dimension mismatch");
    terms.push_back({lambda, z, x});
    return *this;
  }

  friend VecMolecule operator+(const VecMolecule& a, const VecMolecule& b) {
    if (a.dim != b.dim) throw InvalidInput("VecMolecule: dimension mismatch in sum");
    VecMolecule out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
  }

  friend VecMolecule operator*(cplx alpha, const VecMolecule& m) {
    VecMolecule out = m;
    for (auto& t : out.terms) t.lambda *= alpha;
    return out;
  }
};

/// sum_i lambda_i sum_k f'(z_i)_k x_ik (bilinear).
inline cplx vec_pairing(const BlochFunc& f, const VecMolecule& g) {
  if (f.dim != g.dim) throw InvalidInput("vec_pairing: dimension mismatch");
  cplx acc = 0.0;
  for (const auto& t : g.terms) {
    if (t.x.size() != f.dim) throw InvalidInput("vec_pairing: payload dimension mismatch");
    acc += t.lambda * (f.deriv(t.z.value()).transpose() * t.x)(0);
  }
  return acc;
}

/// Payload y_p = sum_{z_i = p} lambda_i x_i per distinct point, first-occurrence order.
inline std::vector<std::pair<DiscPoint, CVector>> regroup(const VecMolecule& g) {
  std::vector<std::pair<DiscPoint, CVector>> out;
  for (const auto& t : g.terms) {
    bool found = false;
    for (auto& [p, y] : out)
      if (p == t.z) {
        y += t.lambda * t.x;
        found = true;
        break;
      }
    if (!found) out.emplace_back(t.z, t.lambda * t.x);
  }
  return out;
}

struct W2Upper {
  double value = 0.0;
  std::string representation;
  int candidates = 0;
};

namespace detail {

/// Representation sum_p gamma_p (x) (y_p / s_p) with dominating sequence (s_p, p):
/// (sum ||y_p||^2 / s_p^2)^(1/2) (sum s_p^2 / (1-|p|^2)^2)^(1/2).
inline double w2_candidate(const std::vector<std::pair<DiscPoint, CVector>>& groups, const std::vector<double>& s) {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const double n = groups[k].second.norm();
    if (n == 0.0) continue;
    const double wt = groups[k].first.weight();
    a += n * n / (s[k] * s[k]);
    b += s[k] * s[k] / (wt * wt);
  }
  return std::sqrt(a) * std::sqrt(b);
}

}  // namespace detail

/// Minimum of the representation bound over: the identity representation,
/// payload regrouping with the optimal per-point mass shift
/// (giving sum_p ||y_p|| / (1-|p|^2)) and `budget` random mass shifts.
inline W2Upper w2_ub(const VecMolecule& g, int budget = 64, std::uint64_t seed = 0) {
  if (budget < 0 || budget > 100000) throw InvalidInput("w2_ub: budget must lie in [0, 1e5]");
  W2Upper out;
  if (g.terms.empty()) return out;

  double best = std::numeric_limits<double>::infinity();
  auto take = [&](double v, const char* name) {
    ++out.candidates;
    if (v < best) {
      best = v;
      out.representation = name;
    }
  };

  {
    double xs = 0.0, ms = 0.0;
    for (const auto& t : g.terms) {
      if (t.lambda == cplx(0.0) || t.x.norm() == 0.0) continue;
      xs += t.x.squaredNorm();
      ms += std::norm(t.lambda) / (t.z.weight() * t.z.weight());
    }
    take(std::sqrt(xs) * std::sqrt(ms), "identity");
  }

  const auto groups = regroup(g);
  double proj = 0.0;
  for (const auto& [p, y] : groups) proj += y.norm() / p.weight();
  take(proj, "regrouped-optimal-shift");

  std::vector<double> s(groups.size());
  Rng rng(split_seed(seed, 0x901, 0));
  std::lognormal_distribution<double> jitter(0.0, 0.5);
  for (int i = 0; i < budget; ++i) {
    for (std::size_t k = 0; k < groups.size(); ++k)
      s[k] = std::sqrt(std::max(groups[k].second.norm(), 1e-300) * groups[k].first.weight()) * jitter(rng);
    take(detail::w2_candidate(groups, s), "regrouped-random-shift");
  }
  out.value = best;
  if (proj == 0.0) out.value = 0.0;
  return out;
}

/// A test mapping with an upper bound for its gamma_2 norm.
struct DualCandidate {
  BlochFunc f;
  double gamma2_upper = 0.0;
  std::string label;
};

/// Rank-one kernels at each support point with payload conj(y_p)/||y_p||
/// (gamma_2 = 1 exactly), plus their sum normalised by its certified seminorm.
inline std::vector<DualCandidate> default_dual_candidates(const VecMolecule& g,
                                                          const GridSpec& grid = GridSpec::coarse()) {
  std::vector<DualCandidate> out;
  const auto groups = regroup(g);
  BlochFunc sum(g.dim);
  for (const auto& [p, y] : groups) {
    const double n = y.norm();
    if (n == 0.0) continue;
    const CVector xs = y.conjugate() / n;
    out.push_back({BlochFunc::kernel(p, xs), 1.0, "kernel"});
    sum.add(xs, Kernel{p});
  }
  if (out.size() > 1) {
    const double up = bloch_seminorm(sum, grid).certified_upper;
    if (up > 0.0) out.push_back({sum, up, "kernel-sum"});
  }
  return out;
}

/// max over candidates of |vec_pairing(f, g)| / gamma2_upper(f).
inline double w2_lb(const VecMolecule& g, const std::vector<DualCandidate>& candidates) {
  double best = 0.0;
  for (const auto& c : candidates) {
    const double v = std::abs(vec_pairing(c.f, g));
    if (c.gamma2_upper == 0.0) {
      if (v != 0.0) throw InternalInconsistency("w2_lb: candidate with zero norm bound pairs non-trivially");
      continue;
    }
    best = std::max(best, v / c.gamma2_upper);
  }
  return best;
}

inline double w2_lb(const VecMolecule& g) { return w2_lb(g, default_dual_candidates(g)); }

struct CrossnormReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

/// |sum_i lambda_i g'(z_i) <x*, x_i>| <= rho(g) ||x*|| w2(gamma).
inline CrossnormReport crossnorm_checks(const VecMolecule& gam, const BlochFunc& g, const CVector& xstar,
                                        const GridSpec& grid = GridSpec::coarse()) {
  if (g.dim != 1) throw InvalidInput("crossnorm_checks: g must be scalar-valued");
  if (xstar.size() != gam.dim) throw InvalidInput("crossnorm_checks: dimension mismatch");
  CrossnormReport r;
  cplx acc = 0.0;
  for (const auto& t : gam.terms) acc += t.lambda * g.deriv(t.z.value())(0) * (xstar.transpose() * t.x)(0);
  r.lhs = std::abs(acc);
  const double rho = g.terms.empty() ? 0.0 : bloch_seminorm(g, grid).certified_upper;
  r.rhs = rho * xstar.norm() * w2_ub(gam).value;
  r.margin = r.rhs * (1.0 + 1e-9) - r.lhs;
  r.pass = r.margin >= 0.0;
  return r;
}

}  // namespace blochfact
