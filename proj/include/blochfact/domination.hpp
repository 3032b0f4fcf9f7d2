#pragma once

// Bloch domination between finite weighted sequences:
//   a is dominated by b  iff  sum |lambda_i|^2 |g'(z_i)|^2 <= sum |mu_j|^2 |g'(w_j)|^2  for all g.
// Three routes: pointwise mass comparison, contraction matrices, explicit violations.

#include <optional>
#include <string>
#include <vector>

#include "molecules.hpp"

namespace blochfact {

/// Aggregated squared weight per distinct point, in first-occurrence order.
struct MassProfile {
  std::vector<std::pair<DiscPoint, double>> entries;

  [[nodiscard]] double at(const DiscPoint& p) const {
    for (const auto& [q, m] : entries)
      if (q == p) return m;
    return 0.0;
  }
};

inline MassProfile mass_profile(const WeightedSeq& s) {
  MassProfile out;
  for (const auto& [lam, z] : s.pairs) {
    bool found = false;
    for (auto& [q, m] : out.entries) {
      if (q == z) {
        m += std::norm(lam);
        found = true;
        break;
      }
    }
    if (!found) out.entries.emplace_back(z, std::norm(lam));
  }
  return out;
}

inline WeightedSeq canonicalize(const WeightedSeq& s) {
  WeightedSeq out;
  for (const auto& [p, m] : mass_profile(s).entries) out.pairs.push_back({std::sqrt(m), p});
  return out;
}

/// True when no support point repeats.
inline bool is_canonical(const WeightedSeq& s) {
  for (std::size_t i = 0; i < s.pairs.size(); ++i)
    for (std::size_t j = i + 1; j < s.pairs.size(); ++j)
      if (s.pairs[i].z == s.pairs[j].z) return false;
  return true;
}

inline bool pointwise_mass_dominates(const WeightedSeq& a, const WeightedSeq& b) {
  const MassProfile pa = mass_profile(a), pb = mass_profile(b);
  for (const auto& [p, m] : pa.entries)
    if (m > pb.at(p) + 1e-12) return false;
  return true;
}

struct ViolationWitness {
  BlochFunc g;
  double lhs = 0.0;
  double rhs = 0.0;

  [[nodiscard]] double margin() const { return lhs - rhs; }
};

/// Both sides of the defining inequality for a given g.
inline std::pair<double, double> domination_sides(const BlochFunc& g, const WeightedSeq& a, const WeightedSeq& b) {
  double l = 0.0, r = 0.0;
  for (const auto& [lam, z] : a.pairs) l += std::norm(lam) * deriv_eval(g, z).squaredNorm();
  for (const auto& [mu, w] : b.pairs) r += std::norm(mu) * deriv_eval(g, w).squaredNorm();
  return {l, r};
}

inline ViolationWitness make_violation(BlochFunc g, const WeightedSeq& a, const WeightedSeq& b) {
  ViolationWitness v{std::move(g)};
  std::tie(v.lhs, v.rhs) = domination_sides(v.g, a, b);
  return v;
}

inline constexpr double kViolationMargin = 1e-10;
inline constexpr double kCoincidenceGuard = 1e-9;

namespace detail {

inline std::vector<DiscPoint> joint_support(const WeightedSeq& a, const WeightedSeq& b) {
  std::vector<DiscPoint> pts;
  auto push = [&](const DiscPoint& z) {
    for (const auto& q : pts)
      if (q == z) return;
    pts.push_back(z);
  };
  for (const auto& p : a.pairs) push(p.z);
  for (const auto& p : b.pairs) push(p.z);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i].value() - pts[j].value()) < kCoincidenceGuard)
        throw IllConditioned("near-coincident support points (distance < 1e-9); canonicalize or merge them first");
  return pts;
}

/// g with g(0) = 0 and g' the Lagrange polynomial equal to 1 at pts[k], 0 at the other nodes.
inline BlochFunc lagrange_bump(const std::vector<DiscPoint>& pts, std::size_t k) {
  std::vector<cplx> c{1.0};
  const cplx p = pts[k].value();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == k) continue;
    const cplx q = pts[j].value();
    const cplx s = 1.0 / (p - q);
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i] * s;
      next[i] -= c[i] * q * s;
    }
    c = std::move(next);
  }
  BlochFunc g(1);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != cplx(0.0))
      g.add(CVector::Constant(1, c[i] / static_cast<double>(i + 1)), Monomial{static_cast<int>(i) + 1});
  return g;
}

inline void require_canonical(const WeightedSeq& a, const WeightedSeq& b, const char* who) {
  if (!is_canonical(a) || !is_canonical(b))
    throw IllConditioned(std::string(who) + ": repeated support point; canonicalize the sequences first");
}

}  // namespace detail

inline std::optional<ViolationWitness> lagrange_violation(const WeightedSeq& a, const WeightedSeq& b) {
  detail::require_canonical(a, b, "lagrange_violation");
  const auto pts = detail::joint_support(a, b);
  const MassProfile pa = mass_profile(a), pb = mass_profile(b);
  std::optional<std::size_t> best;
  double excess = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double e = pa.at(pts[k]) - pb.at(pts[k]);
    if (e > 1e-12 && e > excess) {
      excess = e;
      best = k;
    }
  }
  if (!best) return std::nullopt;
  ViolationWitness v = make_violation(detail::lagrange_bump(pts, *best), a, b);
  if (v.margin() > 0.0 && v.margin() < kViolationMargin) {
    // homogeneous inequality: rescale to a comfortable margin
    const double s = std::sqrt(100.0 * kViolationMargin / v.margin());
    v = make_violation(cplx(s) * v.g, a, b);
  }
  if (!(v.margin() > 0.0))
    throw InternalInconsistency("lagrange_violation: bump failed to separate an excess-mass point");
  return v;
}

/// Randomised falsification over N ball samples and every Lagrange bump; one-sided.
inline std::optional<ViolationWitness> sampled_violation(const WeightedSeq& a, const WeightedSeq& b, int n_samples,
                                                         int degree, std::uint64_t seed) {
  if (n_samples < 0 || n_samples > 100000) throw InvalidInput("sampled_violation: N must lie in [0, 1e5]");
  std::optional<ViolationWitness> best;
  auto consider = [&](BlochFunc g) {
    ViolationWitness v = make_violation(std::move(g), a, b);
    if (v.margin() >= kViolationMargin && (!best || v.margin() > best->margin())) best = std::move(v);
  };
  for (int i = 0; i < n_samples; ++i)
    consider(random_ball_function_cheap(degree, 1, split_seed(seed, 0x401, static_cast<std::uint64_t>(i))));
  if (!a.pairs.empty() || !b.pairs.empty()) {
    const auto pts = detail::joint_support(a, b);
    for (std::size_t k = 0; k < pts.size(); ++k) consider(detail::lagrange_bump(pts, k));
  }
  return best;
}

struct ContractionWitness {
  CMatrix a;  // n x m
  double opnorm = 0.0;
  double residual = 0.0;
  bool accepted = false;
};

/// Largest per-point coefficient mismatch of lambda_i gamma_{z_i} - sum_j A_ij mu_j gamma_{w_j}.
inline double contraction_residual(const CMatrix& A, const WeightedSeq& a, const WeightedSeq& b) {
  double res = 0.0;
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    std::vector<std::pair<DiscPoint, cplx>> coeff{{a.pairs[i].z, a.pairs[i].lambda}};
    for (std::size_t j = 0; j < b.pairs.size(); ++j) {
      const cplx t = A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * b.pairs[j].lambda;
      bool found = false;
      for (auto& [q, c] : coeff)
        if (q == b.pairs[j].z) {
          c -= t;
          found = true;
        }
      if (!found) coeff.emplace_back(b.pairs[j].z, -t);
    }
    for (const auto& [q, c] : coeff) res = std::max(res, std::abs(c));
  }
  return res;
}

inline std::optional<ContractionWitness> contraction_witness(const WeightedSeq& a, const WeightedSeq& b) {
  detail::require_canonical(a, b, "contraction_witness");
  const auto n = static_cast<Eigen::Index>(a.pairs.size());
  const auto m = static_cast<Eigen::Index>(b.pairs.size());
  ContractionWitness out;
  out.a = CMatrix::Zero(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [lam, z] = a.pairs[static_cast<std::size_t>(i)];
    std::vector<LinearConstraint> cons;
    bool z_in_b = false;
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& [mu, w] = b.pairs[static_cast<std::size_t>(j)];
      CVector row = CVector::Zero(m);
      row(j) = mu;
      const bool same = (w == z);
      z_in_b = z_in_b || same;
      cons.push_back({row, same ? lam : cplx(0.0)});
    }
    if (!z_in_b && lam != cplx(0.0)) return std::nullopt;
    try {
      out.a.row(i) = least_norm_solve(cons, m).x.transpose();
    } catch (const Infeasible&) {
      return std::nullopt;
    }
  }
  out.residual = contraction_residual(out.a, a, b);
  if (out.residual > 1e-9) throw InternalInconsistency("contraction_witness: residual above 1e-9 after solve");
  out.opnorm = opnorm(out.a);
  out.accepted = out.opnorm <= 1.0 + 1e-8;
  return out;
}

enum class Tristate { False, True, Unknown };

inline const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::True: return "true";
    case Tristate::False: return "false";
    default: return "unknown";
  }
}

/// Outcome of all routes on one instance; `agree` is false for a three-way disagreement.
struct DominationVerdict {
  Tristate dominates = Tristate::Unknown;
  std::string route;
  bool mass = false;
  std::optional<ContractionWitness> contraction;
  std::optional<ViolationWitness> lagrange;
  std::optional<ViolationWitness> sampled;
  bool agree = true;
};

inline DominationVerdict decide_domination(const WeightedSeq& a_in, const WeightedSeq& b_in, int n_samples = 10000,
                                           int degree = 8, std::uint64_t seed = 0) {
  const WeightedSeq a = canonicalize(a_in), b = canonicalize(b_in);
  DominationVerdict v;
  v.mass = pointwise_mass_dominates(a, b);
  v.contraction = contraction_witness(a, b);
  v.lagrange = lagrange_violation(a, b);
  v.sampled = sampled_violation(a, b, n_samples, degree, seed);
  const bool accepts = v.contraction && v.contraction->accepted;
  v.agree = (v.mass == accepts) && (v.mass == !v.lagrange) && (v.mass == !v.sampled);
  if (!v.agree) {
    v.dominates = Tristate::Unknown;
    v.route = "mass";
  } else if (v.mass) {
    v.dominates = Tristate::True;
    v.route = "mass";
  } else {
    v.dominates = Tristate::False;
    v.route = "lagrange";
  }
  return v;
}

}  // namespace blochfact
