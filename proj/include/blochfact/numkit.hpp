#pragma once

// Dense complex linear algebra and the small convex kernels the rest of the
// library is built on: spectral norm, least-norm solves, simplex-weight
// feasibility and Haar unitaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace blochfact {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

struct Infeasible : Error {
  double residual;
  Infeasible(const std::string& what, double res) : Error(what), residual(res) {}
};

struct BudgetExceeded : Error {
  double best;
  BudgetExceeded(const std::string& what, double best_value)
      : Error(what), best(best_value) {}
};

struct IllConditioned : Error {
  using Error::Error;
};

struct InternalInconsistency : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Seeds

/// splitmix64 finalizer; used to derive independent per-sample seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t index = 0) noexcept {
  return mix_seed(mix_seed(seed ^ mix_seed(stream)) + index);
}

using Rng = std::mt19937_64;

inline cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Operator norm

/// Largest singular value by power iteration on A^H A.
///
/// The start vector is drawn from a fixed seed so the result is reproducible.
/// Iteration stops when the Rayleigh quotient stagnates to machine precision
/// or after 10^4 steps.
inline double opnorm(const CMatrix& a) {
  if (!all_finite(a)) throw InvalidInput("opnorm: non-finite entry");
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) {
    // Rank one by shape; the norm is the Euclidean length.
    return a.norm();
  }
  const double fro = a.norm();
  if (fro == 0.0) return 0.0;

  Rng rng(0x5EEDF00DULL);
  CVector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_gaussian(rng);
  v.normalize();

  const CMatrix gram = a.adjoint() * a;
  double lambda = 0.0;
  int stall = 0;
  for (int it = 0; it < 10000; ++it) {
    CVector w = gram * v;
    const double next = std::real(v.dot(w));  // Rayleigh quotient, ||v|| = 1
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (std::abs(next - lambda) <= 1e-15 * std::max(next, 1e-300)) {
      if (++stall >= 3) {
        lambda = next;
        break;
      }
    } else {
      stall = 0;
    }
    lambda = next;
  }
  // One final quotient with the converged vector.
  lambda = std::max(lambda, std::real(v.dot(gram * v)));
  return std::sqrt(std::max(lambda, 0.0));
}

// ---------------------------------------------------------------------------
// Least-norm solve

struct LinearConstraint {
  CVector row;  // coefficient vector c, constraint is sum_k c_k x_k = rhs
  cplx rhs;
};

struct LeastNormResult {
  CVector x;
  double residual = 0.0;
};

/// Minimal Euclidean-norm x with <row, x> = rhs for every constraint
/// (bilinear: sum_k row_k x_k). Gram system C C^H y = b with a 1e-12 ridge,
/// relative to the Gram diagonal, followed by one refinement step.
inline LeastNormResult least_norm_solve(std::span<const LinearConstraint> cons,
                                        Eigen::Index dim) {
  LeastNormResult out;
  out.x = CVector::Zero(dim);
  if (cons.empty()) return out;

  const auto k = static_cast<Eigen::Index>(cons.size());
  CMatrix c(k, dim);
  CVector b(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& con = cons[static_cast<std::size_t>(i)];
    if (con.row.size() != dim)
      throw InvalidInput("least_norm_solve: constraint row has wrong dimension");
    c.row(i) = con.row.transpose();
    b(i) = con.rhs;
  }
  if (!all_finite(c) || !all_finite(b))
    throw InvalidInput("least_norm_solve: non-finite constraint");

  CMatrix gram = c * c.adjoint();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) scale = std::max(scale, gram(i, i).real());
  const double ridge = 1e-12 * std::max(scale, 1e-300);
  gram.diagonal().array() += ridge;
  Eigen::LDLT<CMatrix> ldlt(gram);

  CVector x = c.adjoint() * ldlt.solve(b);
  CVector r = b - c * x;
  x += c.adjoint() * ldlt.solve(r);
  r = b - c * x;

  out.x = std::move(x);
  out.residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (out.residual > 1e-9 * bscale)
    throw Infeasible("least_norm_solve: inconsistent constraints", out.residual);
  return out;
}

// ---------------------------------------------------------------------------
// Simplex-weight feasibility

/// sum_s coeffs[s] * w_s >= rhs
struct AffineInequality {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

struct SimplexWeights {
  std::vector<double> weights;

  [[nodiscard]] bool valid(double tol = 1e-12) const {
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) return false;
      sum += w;
    }
    return std::abs(sum - 1.0) <= tol;
  }
};

/// Solution of the matrix game max_{w in simplex} min_t (M w)_t.
struct GameSolution {
  double value = 0.0;                 // max-min payoff
  std::vector<double> weights;        // maximizing column mixture
  std::vector<double> row_mixture;    // minimizing row mixture (dual certificate)
  long pivots = 0;
};

namespace detail {

/// Dense tableau simplex for max 1^T y s.t. G^T y <= 1, y >= 0 with G > 0.
/// Rows of the tableau are the columns of G (one per weight); the dual prices
/// of the slack columns give the maximizing weights.
inline GameSolution solve_positive_game(const RMatrix& g, long max_pivots) {
  const Eigen::Index k = g.rows();  // inequalities (row player)
  const Eigen::Index n = g.cols();  // weights (column player)
  const Eigen::Index cols = k + n;

  RMatrix tab = RMatrix::Zero(n + 1, cols + 1);
  tab.topLeftCorner(n, k) = g.transpose();
  tab.block(0, k, n, n).setIdentity();
  tab.topRightCorner(n, 1).setOnes();
  tab.bottomLeftCorner(1, k).setConstant(-1.0);

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) basis[static_cast<std::size_t>(i)] = k + i;

  constexpr double eps = 1e-12;
  long pivots = 0;
  int degenerate_run = 0;
  while (true) {
    const bool bland = degenerate_run > 50;
    Eigen::Index enter = -1;
    double best = -eps;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double rc = tab(n, j);
      if (bland) {
        if (rc < -eps) {
          enter = j;
          break;
        }
      } else if (rc < best) {
        best = rc;
        enter = j;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = tab(i, enter);
      if (a > eps) {
        const double r = tab(i, cols) / a;
        if (r < ratio - 1e-15 ||
            (std::abs(r - ratio) <= 1e-15 && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          ratio = r;
          leave = i;
        }
      }
    }
    if (leave < 0) throw InternalInconsistency("game LP unbounded; payoff matrix not positive");
    degenerate_run = (ratio <= 1e-14) ? degenerate_run + 1 : 0;

    const double piv = tab(leave, enter);
    tab.row(leave) /= piv;
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i == leave) continue;
      const double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
    if (++pivots > max_pivots)
      throw BudgetExceeded("game LP exceeded pivot budget", tab(n, cols));
  }

  GameSolution sol;
  sol.pivots = pivots;
  const double total = tab(n, cols);  // = 1 / value
  sol.value = 1.0 / total;

  sol.weights.assign(static_cast<std::size_t>(n), 0.0);
  double xs = 0.0;
  for (Eigen::Index s = 0; s < n; ++s) {
    const double x = std::max(0.0, tab(n, k + s));
    sol.weights[static_cast<std::size_t>(s)] = x;
    xs += x;
  }
  for (double& w : sol.weights) w /= xs;

  sol.row_mixture.assign(static_cast<std::size_t>(k), 0.0);
  double ys = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index b = basis[static_cast<std::size_t>(i)];
    if (b < k) {
      const double y = std::max(0.0, tab(i, cols));
      sol.row_mixture[static_cast<std::size_t>(b)] = y;
      ys += y;
    }
  }
  if (ys > 0)
    for (double& y : sol.row_mixture) y /= ys;
  return sol;
}

}  // namespace detail

/// Value of the zero-sum game max_{w in simplex} min_t sum_s m(t,s) w_s.
inline GameSolution solve_matrix_game(const RMatrix& m, long max_pivots = 100000) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("solve_matrix_game: empty payoff");
  if (!m.allFinite()) throw InvalidInput("solve_matrix_game: non-finite payoff");
  const double shift = 1.0 - m.minCoeff();
  RMatrix g = m.array() + shift;
  GameSolution sol = detail::solve_positive_game(g, max_pivots);
  // Re-evaluate the payoff of the returned mixture directly.
  RVector w = Eigen::Map<const RVector>(sol.weights.data(),
                                        static_cast<Eigen::Index>(sol.weights.size()));
  sol.value = (m * w).minCoeff();
  return sol;
}

/// Minimum slack min_t (a_t . w - b_t) of a weight vector.
inline double min_slack(std::span<const AffineInequality> ineqs, const SimplexWeights& w) {
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& q : ineqs) {
    double lhs = 0.0;
    for (std::size_t s = 0; s < q.coeffs.size(); ++s) lhs += q.coeffs[s] * w.weights[s];
    slack = std::min(slack, lhs - q.rhs);
  }
  return slack;
}

/// Finds simplex weights satisfying every inequality to slack -1e-8, or
/// returns nullopt when the max-min LP value certifies infeasibility.
///
/// Rows are normalised by their largest coefficient magnitude before solving;
/// the returned weights are re-checked against the unnormalised system.
inline std::optional<SimplexWeights> lp_feasible(std::span<const AffineInequality> ineqs,
                                                 std::size_t n_weights) {
  if (n_weights == 0) throw InvalidInput("lp_feasible: no weights");
  if (n_weights > 256 || ineqs.size() > 500)
    throw InvalidInput("lp_feasible: problem exceeds 500 inequalities / 256 weights");
  for (const auto& q : ineqs)
    if (q.coeffs.size() != n_weights) throw InvalidInput("lp_feasible: dimension mismatch");

  if (ineqs.empty()) {
    SimplexWeights w;
    w.weights.assign(n_weights, 1.0 / static_cast<double>(n_weights));
    return w;
  }

  const auto k = static_cast<Eigen::Index>(ineqs.size());
  const auto n = static_cast<Eigen::Index>(n_weights);
  RMatrix m(k, n);
  for (Eigen::Index t = 0; t < k; ++t) {
    const auto& q = ineqs[static_cast<std::size_t>(t)];
    double scale = std::abs(q.rhs);
    for (double c : q.coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) scale = 1.0;
    for (Eigen::Index s = 0; s < n; ++s)
      m(t, s) = (q.coeffs[static_cast<std::size_t>(s)] - q.rhs) / scale;
  }
  const GameSolution sol = solve_matrix_game(m);
  SimplexWeights w{sol.weights};
  if (sol.value < -1e-8) return std::nullopt;
  if (min_slack(ineqs, w) < -1e-8) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------
// Haar unitaries

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal absorbed into Q.
inline CMatrix haar_unitary(int n, std::uint64_t seed) {
  if (n < 1 || n > 64) throw InvalidInput("haar_unitary: n must lie in [1, 64]");
  Rng rng(seed);
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = complex_gaussian(rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double ad = std::abs(d);
    q.col(j) *= (ad > 0 ? d / ad : cplx(1.0));
  }
  return q;
}

}  // namespace blochfact
