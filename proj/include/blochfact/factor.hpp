#pragma once

// Brackets for the Hilbert-factorisation norm gamma_2 of a Bloch mapping:
// Kwapien-type lower bounds over dominated pairs, a discrete Pietsch
// certificate with an explicit factorisation f' = T g' above.

#include <algorithm>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "domination.hpp"

namespace blochfact {

/// Test grid for Pietsch constraints: origin plus 8 rings of 16 points.
inline GridSpec pietsch_grid() {
  GridSpec g;
  g.n_r = 8;
  g.n_theta = 16;
  return g;
}

enum class SampleKind { GridKernel, ArgmaxKernel, Adapted, Random };

inline const char* to_string(SampleKind k) {
  switch (k) {
    case SampleKind::GridKernel: return "grid-kernel";
    case SampleKind::ArgmaxKernel: return "argmax-kernel";
    case SampleKind::Adapted: return "adapted";
    default: return "random";
  }
}

struct PietschSample {
  BlochFunc k;          // scalar, certified rho <= 1
  SampleKind kind = SampleKind::Random;
  CVector direction;    // adapted samples: k = <f, direction> / scale
  double scale = 0.0;
};

struct PietschCertificate {
  std::vector<PietschSample> samples;
  SimplexWeights weights;
  double c = 0.0;
  GridSpec test_grid = pietsch_grid();
};

struct PietschOptions {
  int max_samples = 256;
  int random_samples = 32;
  int degree = 8;
  std::uint64_t seed = 0;
  GridSpec test_grid = pietsch_grid();
  GridSpec cert_grid = {};  // for rho(f) and the adapted normalisations
};

struct PietschResult {
  double c = 0.0;
  PietschCertificate cert;
  double game_c = 0.0;      // smallest feasible c on the test grid
  double rho_lower = 0.0;   // floor of the search interval
  std::vector<double> dual_mixture;  // optimal constraint mixture (adversarial family)
};

/// Largest violation ||f'(z)||^2 - c^2 sum pi_s |k_s'(z)|^2 over the test grid.
inline double certificate_violation(const BlochFunc& f, const PietschCertificate& cert) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const cplx& z : cert.test_grid.points()) {
    double rhs = 0.0;
    for (std::size_t s = 0; s < cert.samples.size(); ++s) {
      const double p = cert.weights.weights[s];
      if (p > 0.0) rhs += p * std::norm(cert.samples[s].k.deriv(z)(0));
    }
    worst = std::max(worst, f.deriv(z).squaredNorm() - cert.c * cert.c * rhs);
  }
  return worst;
}

namespace detail {

/// Eigen-directions of sum_t (1-|z_t|^2)^2 f'(z_t) f'(z_t)^* with the
/// normalised scalar components <f, v_j>.
inline std::vector<PietschSample> adapted_samples(const BlochFunc& f, const GridSpec& test, const GridSpec& cert) {
  CMatrix m = CMatrix::Zero(f.dim, f.dim);
  for (const cplx& z : test.points()) {
    const CVector d = f.deriv(z) * (1.0 - std::norm(z));
    m += d * d.adjoint();
  }
  std::vector<PietschSample> out;
  if (m.norm() == 0.0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const double top = es.eigenvalues().maxCoeff();
  for (Eigen::Index j = f.dim - 1; j >= 0; --j) {
    if (es.eigenvalues()(j) <= 1e-14 * top) continue;
    const CVector v = es.eigenvectors().col(j);
    const BlochFunc comp = f.mapped(v.adjoint());
    const double up = bloch_seminorm(comp, cert).certified_upper;
    if (!(up > 0.0)) continue;
    out.push_back({cplx(1.0 / up) * comp, SampleKind::Adapted, v, up});
  }
  return out;
}

struct PietschFamily {
  std::vector<PietschSample> samples;
  SeminormBracket rho;
};

inline PietschFamily pietsch_family(const BlochFunc& f, const PietschOptions& opt) {
  if (opt.max_samples < 1 || opt.max_samples > 256) throw InvalidInput("pietsch_ub: sample count must lie in [1, 256]");
  PietschFamily fam;
  fam.rho = bloch_seminorm(f, opt.cert_grid);
  auto& s = fam.samples;
  for (const cplx& z : opt.test_grid.points())
    s.push_back({BlochFunc::kernel(DiscPoint(z)), SampleKind::GridKernel, {}, 1.0});
  if (fam.rho.lower > 0.0) s.push_back({BlochFunc::kernel(DiscPoint(fam.rho.argmax)), SampleKind::ArgmaxKernel, {}, 1.0});
  for (auto& a : adapted_samples(f, opt.test_grid, opt.cert_grid)) s.push_back(std::move(a));
  if (s.size() > static_cast<std::size_t>(opt.max_samples))
    throw InvalidInput("pietsch_ub: sample count below the structural family size");
  const int room = opt.max_samples - static_cast<int>(s.size());
  for (int i = 0; i < std::min(room, opt.random_samples); ++i)
    s.push_back({random_ball_function(opt.degree, 1, split_seed(opt.seed, 0x501, static_cast<std::uint64_t>(i))),
                 SampleKind::Random, {}, 1.0});
  return fam;
}

/// Payoff K_ts / F_t over the grid points with F_t > 0.
struct PietschGame {
  RMatrix payoff;
  RMatrix k;       // |k_s'(z_t)|^2 on kept rows
  RVector fsq;     // ||f'(z_t)||^2 on kept rows
  std::vector<cplx> points;
};

inline PietschGame pietsch_game(const BlochFunc& f, const std::vector<PietschSample>& samples, const GridSpec& test) {
  PietschGame g;
  const auto pts = test.points();
  double fmax = 0.0;
  std::vector<double> fs;
  for (const cplx& z : pts) {
    fs.push_back(f.deriv(z).squaredNorm());
    fmax = std::max(fmax, fs.back());
  }
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < pts.size(); ++t)
    if (fs[t] > 1e-30 * fmax && fs[t] > 0.0) keep.push_back(t);
  const auto nt = static_cast<Eigen::Index>(keep.size());
  const auto ns = static_cast<Eigen::Index>(samples.size());
  g.k.resize(nt, ns);
  g.fsq.resize(nt);
  for (Eigen::Index t = 0; t < nt; ++t) {
    const cplx z = pts[keep[static_cast<std::size_t>(t)]];
    g.points.push_back(z);
    g.fsq(t) = fs[keep[static_cast<std::size_t>(t)]];
    for (Eigen::Index s = 0; s < ns; ++s) g.k(t, s) = std::norm(samples[static_cast<std::size_t>(s)].k.deriv(z)(0));
  }
  g.payoff = g.k.array().colwise() / g.fsq.array();
  return g;
}

}  // namespace detail

/// Smallest c on [rho lower, inf) with a sample mixture pi satisfying
/// ||f'(z_t)||^2 <= c^2 sum_s pi_s |k_s'(z_t)|^2 on the test grid, for a fixed family.
inline PietschResult pietsch_ub_family(const BlochFunc& f, std::vector<PietschSample> samples, double floor_c,
                                       const GridSpec& test = pietsch_grid()) {
  PietschResult out;
  out.rho_lower = floor_c;
  out.cert.test_grid = test;
  if (samples.empty()) throw InvalidInput("pietsch_ub: empty sample family");
  out.cert.samples = std::move(samples);
  const auto game = detail::pietsch_game(f, out.cert.samples, test);
  const std::size_t ns = out.cert.samples.size();
  if (game.payoff.rows() == 0) {
    out.cert.weights.weights.assign(ns, 1.0 / static_cast<double>(ns));
    out.c = out.cert.c = floor_c;
    return out;
  }
  const GameSolution sol = solve_matrix_game(game.payoff);
  RVector w = Eigen::Map<const RVector>(sol.weights.data(), static_cast<Eigen::Index>(ns));
  const double v = ((game.k * w).array() / game.fsq.array()).minCoeff();
  if (!(v > 0.0)) throw Infeasible("pietsch_ub: certificate unavailable; raise the sample count or degree", 0.0);
  out.game_c = 1.0 / std::sqrt(v);
  out.c = std::max(out.game_c, floor_c) * (1.0 + 1e-12);
  out.cert.c = out.c;
  out.cert.weights.weights = sol.weights;
  out.dual_mixture = sol.row_mixture;
  return out;
}

inline PietschResult pietsch_ub(const BlochFunc& f, const PietschOptions& opt = {}) {
  if (!f.valid()) throw InvalidInput("pietsch_ub: invalid BlochFunc");
  auto fam = detail::pietsch_family(f, opt);
  return pietsch_ub_family(f, std::move(fam.samples), fam.rho.lower, opt.test_grid);
}

// ---------------------------------------------------------------------------

struct FactorizationWitness {
  std::vector<std::size_t> sample_index;  // certificate samples used by g
  std::vector<double> weights;            // pi_s for those samples
  BlochFunc g;                            // z -> (sqrt(pi_s) k_s(z))_s
  CMatrix t;                              // d x S
  double opnorm_t = 0.0;
  double rho_g_upper = 0.0;
  double residual = 0.0;                  // max ||f' - T g'|| / (1 + ||f'||) over the fit grid
  GridSpec fit_grid;
  std::string route;                      // "lp-support" or "adapted"

  [[nodiscard]] double bound() const { return opnorm_t * rho_g_upper; }
};

inline GridSpec factorization_fit_grid(const GridSpec& test) {
  GridSpec g = test;
  g.n_r *= 4;
  g.n_theta *= 4;
  return g;
}

namespace detail {

inline FactorizationWitness fit_factorization(const BlochFunc& f, const PietschCertificate& cert,
                                              const std::vector<std::size_t>& idx, const std::vector<double>& pi,
                                              const GridSpec& fit, const GridSpec& cert_grid, bool certify) {
  FactorizationWitness w;
  w.sample_index = idx;
  w.weights = pi;
  w.fit_grid = fit;
  const auto ns = static_cast<Eigen::Index>(idx.size());
  w.g = BlochFunc(static_cast<int>(std::max<Eigen::Index>(ns, 1)));
  for (Eigen::Index s = 0; s < ns; ++s) {
    const auto& k = cert.samples[idx[static_cast<std::size_t>(s)]].k;
    for (const auto& term : k.terms) {
      CVector p = CVector::Zero(w.g.dim);
      p(s) = std::sqrt(pi[static_cast<std::size_t>(s)]) * term.payload(0);
      w.g.add(p, term.basis);
    }
  }
  const auto pts = fit.points();
  const auto np = static_cast<Eigen::Index>(pts.size());
  CMatrix gm(np, w.g.dim), fm(np, f.dim);
  for (Eigen::Index i = 0; i < np; ++i) {
    gm.row(i) = w.g.deriv(pts[static_cast<std::size_t>(i)]).transpose();
    fm.row(i) = f.deriv(pts[static_cast<std::size_t>(i)]).transpose();
  }
  // T^T = (G^T)^+ F^T
  w.t = gm.completeOrthogonalDecomposition().solve(fm).transpose();
  for (Eigen::Index i = 0; i < np; ++i) {
    const double r = (fm.row(i) - gm.row(i) * w.t.transpose()).norm() / (1.0 + fm.row(i).norm());
    w.residual = std::max(w.residual, r);
  }
  w.opnorm_t = opnorm(w.t);
  if (certify) w.rho_g_upper = bloch_seminorm(w.g, cert_grid).certified_upper;
  return w;
}

}  // namespace detail

inline constexpr double kReconstructionTol = 1e-6;

/// Explicit factorisation f' = T g' with g built from certificate samples.
/// The LP support of the certificate is tried first; when it does not span f'
/// the adapted samples, weighted by their squared normalisations, are used.
inline FactorizationWitness build_factorization(const BlochFunc& f, const PietschCertificate& cert,
                                                const GridSpec& cert_grid = GridSpec::coarse()) {
  const GridSpec fit = factorization_fit_grid(cert.test_grid);
  FactorizationWitness zero;
  zero.fit_grid = fit;
  zero.route = "zero";
  zero.g = BlochFunc(1);
  zero.t = CMatrix::Zero(f.dim, 1);
  if (f.terms.empty()) return zero;

  std::optional<FactorizationWitness> best;
  {
    std::vector<std::size_t> idx;
    std::vector<double> pi;
    for (std::size_t s = 0; s < cert.samples.size(); ++s)
      if (cert.weights.weights[s] > 1e-12) {
        idx.push_back(s);
        pi.push_back(cert.weights.weights[s]);
      }
    if (!idx.empty() && idx.size() <= 8) {
      auto w = detail::fit_factorization(f, cert, idx, pi, fit, cert_grid, false);
      if (w.residual <= kReconstructionTol) {
        w.rho_g_upper = bloch_seminorm(w.g, cert_grid).certified_upper;
        w.route = "lp-support";
        best = std::move(w);
      }
    }
  }
  {
    std::vector<std::size_t> idx;
    std::vector<double> pi;
    double total = 0.0;
    for (std::size_t s = 0; s < cert.samples.size(); ++s)
      if (cert.samples[s].kind == SampleKind::Adapted) {
        idx.push_back(s);
        pi.push_back(cert.samples[s].scale * cert.samples[s].scale);
        total += pi.back();
      }
    if (!idx.empty()) {
      for (double& p : pi) p /= total;
      auto w = detail::fit_factorization(f, cert, idx, pi, fit, cert_grid, true);
      w.route = "adapted";
      if (w.residual <= kReconstructionTol && (!best || w.bound() < best->bound())) best = std::move(w);
    }
  }
  if (!best) {
    // f vanished on the test grid
    double fmax = 0.0;
    for (const cplx& z : fit.points()) fmax = std::max(fmax, f.deriv(z).norm());
    if (fmax == 0.0) return zero;
    throw InternalInconsistency("build_factorization: reconstruction residual above 1e-6 (certificate inconsistent with grid)");
  }
  return *best;
}

// ---------------------------------------------------------------------------

/// rank-one mapping z -> g(z) x with its exact gamma_2 = rho(g) ||x|| bracketed.
struct RankOne {
  BlochFunc f;
  double lower = 0.0;
  double upper = 0.0;
};

inline RankOne rank_one(const BlochFunc& g, const CVector& x, const GridSpec& grid = {}) {
  if (g.dim != 1) throw InvalidInput("rank_one: g must be scalar-valued");
  if (x.size() < 1) throw InvalidInput("rank_one: empty vector");
  RankOne out;
  out.f = BlochFunc(static_cast<int>(x.size()));
  for (const auto& t : g.terms) out.f.terms.push_back({t.payload(0) * x, t.basis});
  const double nx = x.norm();
  if (nx == 0.0 || g.terms.empty()) return out;
  const auto b = bloch_seminorm(g, grid);
  out.lower = b.lower * nx;
  out.upper = b.certified_upper * nx;
  return out;
}

struct GammaBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_source;
  std::string upper_source;
};

// ---------------------------------------------------------------------------

namespace detail {

inline DiscPoint random_disc_point(Rng& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return DiscPoint(std::polar(rmax * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));
}

template <DerivativeMap F>
double kwapien_ratio(const F& f, const WeightedSeq& a, const WeightedSeq& b) {
  double num = 0.0, den = 0.0;
  for (const auto& [lam, z] : a.pairs) num += std::norm(lam) * CVector(f.deriv(z.value())).squaredNorm();
  for (const auto& [mu, w] : b.pairs) den += std::norm(mu) / (w.weight() * w.weight());
  if (!(den > 0.0)) return -1.0;
  return std::sqrt(num / den);
}

}  // namespace detail

/// Max over dominated pairs a < b of sqrt(sum |l|^2 ||f'(z)||^2 / sum |m|^2 / (1-|w|^2)^2).
/// Pairs: singletons at grid points and at the seminorm maximiser, plus `budget`
/// random pairs accepted by contraction_witness.
template <DerivativeMap F>
double kwapien_lb(const F& f, int budget, std::uint64_t seed, const GridSpec& grid = GridSpec::coarse()) {
  if (budget < 0 || budget > 100000) throw InvalidInput("kwapien_lb: budget must lie in [0, 1e5]");
  double best = 0.0;
  auto singleton = [&](cplx z) {
    const WeightedSeq s{{{1.0, DiscPoint(z)}}};
    best = std::max(best, detail::kwapien_ratio(f, s, s));
  };
  for (const cplx& z : grid.points()) singleton(z);
  if constexpr (std::is_same_v<F, BlochFunc>) {
    singleton(bloch_seminorm(f, grid).argmax);
    singleton(bloch_seminorm(f).argmax);
  } else {
    singleton(seminorm_lower(f, grid).argmax);
  }

  Rng rng(split_seed(seed, 0x601, 0));
  std::uniform_int_distribution<int> count(1, 4);
  std::exponential_distribution<double> excess(2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < budget; ++i) {
    WeightedSeq a, b;
    const int n = count(rng);
    for (int j = 0; j < n; ++j) {
      const DiscPoint z = detail::random_disc_point(rng);
      const cplx lam = complex_gaussian(rng);
      a.pairs.push_back({lam, z});
      b.pairs.push_back({lam * std::sqrt(1.0 + excess(rng)), z});
    }
    if (u(rng) < 0.5) b.pairs.push_back({complex_gaussian(rng), detail::random_disc_point(rng)});
    a = canonicalize(a);
    b = canonicalize(b);
    std::optional<ContractionWitness> w;
    try {
      w = contraction_witness(a, b);
    } catch (const IllConditioned&) {
      continue;
    }
    if (!w || !w->accepted) continue;
    best = std::max(best, detail::kwapien_ratio(f, a, b));
  }
  return best;
}

struct UnitaryReport {
  double max_ratio = 0.0;
  int n = 0;
  int trials = 0;
  long worst_trial = -1;
};

/// Haar-unitary form of the Kwapien criterion: max over trials of
/// sum_i ||sum_j mu_j a_ij f'(w_j)||^2 / (c^2 sum_j |mu_j|^2 / (1-|w_j|^2)^2).
template <DerivativeMap F>
UnitaryReport unitary_criterion_check(const F& f, double c, int n, int trials, std::uint64_t seed) {
  if (n < 1 || n > 16) throw InvalidInput("unitary_criterion_check: n must lie in [1, 16]");
  if (trials < 0) throw InvalidInput("unitary_criterion_check: negative trial count");
  UnitaryReport rep;
  rep.n = n;
  rep.trials = trials;
  for (int tr = 0; tr < trials; ++tr) {
    Rng rng(split_seed(seed, 0x701, static_cast<std::uint64_t>(tr)));
    const CMatrix a = haar_unitary(n, split_seed(seed, 0x702, static_cast<std::uint64_t>(tr)));
    std::vector<CVector> fd;
    std::vector<cplx> mu;
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
      const DiscPoint w = detail::random_disc_point(rng);
      mu.push_back(complex_gaussian(rng));
      fd.emplace_back(f.deriv(w.value()));
      den += std::norm(mu.back()) / (w.weight() * w.weight());
    }
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
      CVector acc = CVector::Zero(fd[0].size());
      for (int j = 0; j < n; ++j) acc += mu[static_cast<std::size_t>(j)] * a(i, j) * fd[static_cast<std::size_t>(j)];
      lhs += acc.squaredNorm();
    }
    double ratio;
    if (lhs == 0.0) ratio = 0.0;
    else if (c == 0.0) ratio = std::numeric_limits<double>::infinity();
    else ratio = lhs / (c * c * den);
    if (ratio > rep.max_ratio || rep.worst_trial < 0) {
      rep.max_ratio = std::max(rep.max_ratio, ratio);
      rep.worst_trial = tr;
    }
  }
  return rep;
}

struct IdealCheckReport {
  double rho_f_upper = 0.0;
  double rho_fh_lower = 0.0;
  double contraction_margin = 0.0;  // rho(f)(1+tol) - rho(f o h)
  double kwapien_tfh = 0.0;
  double opnorm_t = 0.0;
  double pietsch_f = 0.0;
  double ideal_margin = 0.0;        // ||T|| pietsch(f)(1+tol) - kwapien(T f h)
  bool pass = false;
};

/// (i) rho(f o h) <= rho(f)(1 + 1e-6) and (ii) kwapien(T o f o h) <= ||T|| pietsch(f)(1 + 2%).
inline IdealCheckReport ideal_inequality_check(const CMatrix& t, const BlochFunc& f, DiscPoint a, std::uint64_t seed,
                                               const PietschOptions& popt = {}, int kwapien_budget = 200) {
  if (t.cols() != f.dim) throw InvalidInput("ideal_inequality_check: operator dimension mismatch");
  IdealCheckReport r;
  const auto h = self_map_blaschke(a);
  const ComposedMap fh{CMatrix::Identity(f.dim, f.dim), f, h};
  r.rho_f_upper = bloch_seminorm(f, popt.cert_grid).certified_upper;
  r.rho_fh_lower = seminorm_lower(fh, popt.cert_grid).lower;
  r.contraction_margin = r.rho_f_upper * (1.0 + 1e-6) - r.rho_fh_lower;

  const ComposedMap tfh{t, f, h};
  r.kwapien_tfh = kwapien_lb(tfh, kwapien_budget, seed);
  r.opnorm_t = opnorm(t);
  r.pietsch_f = f.terms.empty() ? 0.0 : pietsch_ub(f, popt).c;
  r.ideal_margin = r.opnorm_t * r.pietsch_f * 1.02 - r.kwapien_tfh;
  r.pass = r.contraction_margin >= 0.0 && r.ideal_margin >= 0.0;
  return r;
}

// ---------------------------------------------------------------------------

struct Psum2Report {
  double estimate = 0.0;
  std::string source;  // family that attained the estimate
  int families = 0;
  int test_functions = 0;
};

/// Empirical 2-summing constant: max over (lambda, z)-families of
/// sqrt(sum |l|^2 ||f'(z)||^2) / sup_g sqrt(sum |l|^2 |g'(z)|^2), the sup over the
/// Pietsch family, `sampler_budget` extra ball samples and the family's own kernels.
/// Families: the dual mixture of the Pietsch game, grid singletons, the seminorm
/// maximiser and `point_budget` random families.
inline Psum2Report psum2_ub(const BlochFunc& f, int point_budget, int sampler_budget, const PietschOptions& opt = {}) {
  if (point_budget < 0 || point_budget > 10000 || sampler_budget < 0 || sampler_budget > 10000)
    throw InvalidInput("psum2_ub: budgets must lie in [0, 1e4]");
  Psum2Report rep;
  if (f.terms.empty()) return rep;

  auto fam = detail::pietsch_family(f, opt);
  std::vector<BlochFunc> tests;
  for (const auto& s : fam.samples) tests.push_back(s.k);
  for (int i = 0; i < sampler_budget; ++i)
    tests.push_back(random_ball_function_cheap(opt.degree, 1, split_seed(opt.seed, 0x801, static_cast<std::uint64_t>(i))));
  rep.test_functions = static_cast<int>(tests.size());

  auto consider = [&](const WeightedSeq& fam_seq, const char* src) {
    double num = 0.0;
    for (const auto& [lam, z] : fam_seq.pairs) num += std::norm(lam) * f.deriv(z.value()).squaredNorm();
    if (num == 0.0) return;
    auto denom_of = [&](const BlochFunc& g) {
      double d = 0.0;
      for (const auto& [lam, z] : fam_seq.pairs) d += std::norm(lam) * std::norm(g.deriv(z.value())(0));
      return d;
    };
    double den = 0.0;
    for (const auto& g : tests) den = std::max(den, denom_of(g));
    for (const auto& p : fam_seq.pairs) den = std::max(den, denom_of(BlochFunc::kernel(p.z)));
    if (!(den > 0.0)) return;
    ++rep.families;
    const double r = std::sqrt(num / den);
    if (r > rep.estimate) {
      rep.estimate = r;
      rep.source = src;
    }
  };

  // adversarial family from the game's dual mixture: |l_t|^2 = y_t / F_t
  {
    const auto game = detail::pietsch_game(f, fam.samples, opt.test_grid);
    if (game.payoff.rows() > 0) {
      const GameSolution sol = solve_matrix_game(game.payoff);
      WeightedSeq s;
      for (Eigen::Index t = 0; t < game.payoff.rows(); ++t) {
        const double y = sol.row_mixture[static_cast<std::size_t>(t)];
        if (y > 0.0) s.pairs.push_back({std::sqrt(y / game.fsq(t)), DiscPoint(game.points[static_cast<std::size_t>(t)])});
      }
      if (!s.empty()) consider(s, "dual-mixture");
    }
  }
  for (const cplx& z : opt.test_grid.points()) consider(WeightedSeq{{{1.0, DiscPoint(z)}}}, "grid-singleton");
  consider(WeightedSeq{{{1.0, DiscPoint(fam.rho.argmax)}}}, "argmax-singleton");

  Rng rng(split_seed(opt.seed, 0x802, 0));
  std::uniform_int_distribution<int> count(1, 4);
  for (int i = 0; i < point_budget; ++i) {
    WeightedSeq s;
    const int n = count(rng);
    for (int j = 0; j < n; ++j) s.pairs.push_back({complex_gaussian(rng), detail::random_disc_point(rng)});
    consider(s, "random");
  }
  return rep;
}

}  // namespace blochfact
