#pragma once

// Vanishing-at-origin holomorphic maps on the unit disc, built from monomials
// w^k and the extremal kernels f_zeta(w) = (1-|zeta|^2) w / (1 - conj(zeta) w),
// together with a certified evaluation of the Bloch seminorm
//   rho(f) = sup_{|w|<1} (1-|w|^2) ||f'(w)||.

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <queue>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "numkit.hpp"

namespace blochfact {

/// A point of the open unit disc, kept at least 1e-9 away from the boundary.
class DiscPoint {
 public:
  static constexpr double kMaxModulus = 1.0 - 1e-9;

  DiscPoint() = default;
  DiscPoint(cplx v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > kMaxModulus)
      throw InvalidInput("DiscPoint: value must lie strictly inside the unit disc");
  }
  DiscPoint(double re, double im = 0.0) : DiscPoint(cplx(re, im)) {}

  [[nodiscard]] cplx value() const noexcept { return value_; }
  [[nodiscard]] double abs() const noexcept { return std::abs(value_); }
  /// 1 - |z|^2
  [[nodiscard]] double weight() const noexcept { return 1.0 - std::norm(value_); }

  friend bool operator==(const DiscPoint&, const DiscPoint&) = default;

 private:
  cplx value_{0.0, 0.0};
};

struct Monomial {
  int k = 1;  // w^k, k >= 1
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct Kernel {
  DiscPoint zeta;  // f_zeta
  friend bool operator==(const Kernel&, const Kernel&) = default;
};

using Basis = std::variant<Monomial, Kernel>;

namespace basis_fn {

/// Value and first three derivatives of a basis element at w.
inline std::array<cplx, 4> jet(const Basis& b, cplx w) {
  if (const auto* m = std::get_if<Monomial>(&b)) {
    const int k = m->k;
    const double kd = k;
    auto pw = [&](int e) { return e < 0 ? cplx(0.0) : std::pow(w, e); };
    return {pw(k), kd * pw(k - 1), kd * (kd - 1) * pw(k - 2),
            kd * (kd - 1) * (kd - 2) * pw(k - 3)};
  }
  const cplx z = std::get<Kernel>(b).zeta.value();
  const cplx zc = std::conj(z);
  const double s = 1.0 - std::norm(z);
  const cplx q = 1.0 / (1.0 - zc * w);
  return {s * w * q, s * q * q, 2.0 * zc * s * q * q * q, 6.0 * zc * zc * s * q * q * q * q};
}

/// Upper bound for |b^{(m)}(w)| over |w| <= r, m = 1, 2, 3.
inline double deriv_bound(const Basis& b, int m, double r) {
  if (const auto* mono = std::get_if<Monomial>(&b)) {
    const int k = mono->k;
    double c = 1.0;
    for (int i = 0; i < m; ++i) c *= (k - i);
    if (c <= 0.0) return 0.0;
    return c * std::pow(r, k - m);
  }
  const double a = std::get<Kernel>(b).zeta.abs();
  const double s = 1.0 - a * a;
  const double denom = 1.0 - a * r;
  const double fact = (m == 1) ? 1.0 : (m == 2 ? 2.0 : 6.0);
  return s * fact * std::pow(a, m - 1) / std::pow(denom, m + 1);
}

/// rho(w^k) = max_r (1-r^2) k r^{k-1}, attained at r^2 = (k-1)/(k+1).
inline double monomial_seminorm(int k) {
  if (k == 1) return 1.0;
  const double kd = k;
  return kd * (2.0 / (kd + 1.0)) * std::pow((kd - 1.0) / (kd + 1.0), (kd - 1.0) / 2.0);
}

}  // namespace basis_fn

struct Term {
  CVector payload;
  Basis basis;
};

/// Finite combination sum_t payload_t * basis_t(w), a map D -> C^dim with f(0) = 0.
struct BlochFunc {
  int dim = 1;
  std::vector<Term> terms;

  BlochFunc() = default;
  explicit BlochFunc(int d) : dim(d) {
    if (d < 1) throw InvalidInput("BlochFunc: dimension must be positive");
  }

  static BlochFunc monomial(int k, const CVector& x) {
    if (k < 1) throw InvalidInput("BlochFunc: monomial degree must be >= 1");
    BlochFunc f(static_cast<int>(x.size()));
    f.terms.push_back({x, Monomial{k}});
    return f;
  }
  static BlochFunc monomial(int k, cplx x = 1.0) { return monomial(k, CVector::Constant(1, x)); }

  static BlochFunc kernel(DiscPoint z, const CVector& x) {
    BlochFunc f(static_cast<int>(x.size()));
    f.terms.push_back({x, Kernel{z}});
    return f;
  }
  static BlochFunc kernel(DiscPoint z, cplx x = 1.0) { return kernel(z, CVector::Constant(1, x)); }

  BlochFunc& add(const CVector& payload, Basis b) {
    if (payload.size() != dim) throw InvalidInput("BlochFunc: payload dimension mismatch");
    if (const auto* m = std::get_if<Monomial>(&b); m && m->k < 1)
      throw InvalidInput("BlochFunc: monomial degree must be >= 1");
    terms.push_back({payload, b});
    return *this;
  }

  /// Term concatenation; exact sum of the represented maps.
  friend BlochFunc operator+(const BlochFunc& a, const BlochFunc& b) {
    if (a.dim != b.dim) throw InvalidInput("BlochFunc: dimension mismatch in sum");
    BlochFunc out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
  }

  friend BlochFunc operator*(cplx alpha, const BlochFunc& f) {
    BlochFunc out = f;
    for (auto& t : out.terms) t.payload *= alpha;
    return out;
  }

  /// Left-multiplies every payload by a matrix (T o f).
  [[nodiscard]] BlochFunc mapped(const CMatrix& t) const {
    if (t.cols() != dim) throw InvalidInput("BlochFunc: operator dimension mismatch");
    BlochFunc out(static_cast<int>(t.rows()));
    for (const auto& term : terms) out.terms.push_back({t * term.payload, term.basis});
    return out;
  }

  [[nodiscard]] CVector value(cplx w) const {
    CVector v = CVector::Zero(dim);
    for (const auto& t : terms) v += t.payload * basis_fn::jet(t.basis, w)[0];
    return v;
  }

  [[nodiscard]] CVector deriv(cplx w) const {
    CVector v = CVector::Zero(dim);
    for (const auto& t : terms) v += t.payload * basis_fn::jet(t.basis, w)[1];
    return v;
  }

  [[nodiscard]] bool valid() const {
    if (dim < 1) return false;
    for (const auto& t : terms) {
      if (t.payload.size() != dim || !all_finite(t.payload)) return false;
      if (const auto* m = std::get_if<Monomial>(&t.basis); m && m->k < 1) return false;
    }
    return true;
  }
};

/// Exact derivative f'(w).
inline CVector deriv_eval(const BlochFunc& f, DiscPoint w) { return f.deriv(w.value()); }

/// Anything with dim() and deriv(w) -> C^dim. Used for sup estimates of maps
/// that are not closed-form combinations (compositions, for instance).
template <class F>
concept DerivativeMap = requires(const F& f, cplx w) {
  { f.deriv(w) } -> std::convertible_to<CVector>;
};

// ---------------------------------------------------------------------------
// Grid and seminorm

enum class DerivativeBound {
  Lipschitz,    // first-order cell bounds
  SecondOrder,  // gradient at the cell centre plus a Hessian bound
};

struct GridSpec {
  int n_r = 256;
  int n_theta = 256;
  double r_cert = 0.999;
  DerivativeBound mode = DerivativeBound::SecondOrder;
  double rel_tol = 1e-6;        // branch-and-bound stopping gap
  long max_evaluations = 4'000'000;

  void validate() const {
    if (n_r < 8 || n_theta < 8) throw InvalidInput("GridSpec: resolutions must be >= 8");
    if (!(r_cert > 0.0 && r_cert <= 0.999)) throw InvalidInput("GridSpec: r_cert must lie in (0, 0.999]");
    if (!(rel_tol > 0.0)) throw InvalidInput("GridSpec: rel_tol must be positive");
  }

  [[nodiscard]] double radius_at(double t) const {
    const double u = 1.0 - t;
    return r_cert * (1.0 - u * u);
  }

  /// Origin followed by n_r rings of n_theta points, radii clustered towards r_cert.
  [[nodiscard]] std::vector<cplx> points() const {
    validate();
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(n_r) * n_theta + 1);
    pts.emplace_back(0.0, 0.0);
    for (int i = 1; i <= n_r; ++i) {
      const double r = radius_at(static_cast<double>(i) / n_r);
      for (int j = 0; j < n_theta; ++j)
        pts.push_back(std::polar(r, 2.0 * std::numbers::pi * j / n_theta));
    }
    return pts;
  }

  /// Euclidean size of the grid cell that contains w.
  [[nodiscard]] double cell_diameter_at(cplx w) const {
    const double r = std::abs(w);
    // invert r = r_cert (1 - (1-t)^2)
    const double t = 1.0 - std::sqrt(std::max(0.0, 1.0 - std::min(r, r_cert) / r_cert));
    const double t0 = std::floor(t * n_r) / n_r;
    const double t1 = std::min(1.0, t0 + 1.0 / n_r);
    const double r0 = radius_at(t0), r1 = radius_at(t1);
    return (r1 - r0) + r1 * 2.0 * std::numbers::pi / n_theta;
  }

  static GridSpec coarse() {
    GridSpec g;
    g.n_r = 32;
    g.n_theta = 32;
    return g;
  }
};

struct SeminormBracket {
  double lower = 0.0;            // value at a point of the disc
  double certified_upper = 0.0;  // provable sup bound
  cplx argmax{0.0, 0.0};         // where `lower` is attained
  double grid_lower = 0.0;       // max over the raw grid points
  cplx grid_argmax{0.0, 0.0};
  double tail_bound = 0.0;       // bound on the annulus r > r_cert
  long evaluations = 0;
  bool budget_hit = false;
};

namespace detail {

/// Merged, matrix-form evaluator: same-degree monomials and same-point kernels
/// are combined so evaluation cost is independent of the term count.
class CompiledBloch {
 public:
  explicit CompiledBloch(const BlochFunc& f) : dim_(f.dim) {
    int kmax = 0;
    for (const auto& t : f.terms)
      if (const auto* m = std::get_if<Monomial>(&t.basis)) kmax = std::max(kmax, m->k);
    mono_ = CMatrix::Zero(dim_, kmax);
    for (const auto& t : f.terms) {
      if (const auto* m = std::get_if<Monomial>(&t.basis)) {
        mono_.col(m->k - 1) += t.payload;
      } else {
        const cplx z = std::get<Kernel>(t.basis).zeta.value();
        std::size_t idx = zetas_.size();
        for (std::size_t i = 0; i < zetas_.size(); ++i)
          if (zetas_[i] == z) idx = i;
        if (idx == zetas_.size()) {
          zetas_.push_back(z);
          kern_cols_.push_back(t.payload);
        } else {
          kern_cols_[idx] += t.payload;
        }
      }
    }
    kern_ = CMatrix::Zero(dim_, static_cast<Eigen::Index>(zetas_.size()));
    for (std::size_t i = 0; i < zetas_.size(); ++i)
      kern_.col(static_cast<Eigen::Index>(i)) = kern_cols_[i];
    mono_norms_.resize(static_cast<std::size_t>(mono_.cols()));
    for (Eigen::Index k = 0; k < mono_.cols(); ++k) mono_norms_[static_cast<std::size_t>(k)] = mono_.col(k).norm();
    kern_norms_.resize(zetas_.size());
    for (std::size_t i = 0; i < zetas_.size(); ++i) kern_norms_[i] = kern_.col(static_cast<Eigen::Index>(i)).norm();
  }

  [[nodiscard]] int dim() const { return dim_; }

  /// f', f'', f''' at w.
  void derivs(cplx w, CVector& d1, CVector& d2, CVector& d3) const {
    const Eigen::Index km = mono_.cols();
    CVector e1(km), e2(km), e3(km);
    // powers w^{k-1}, w^{k-2}, w^{k-3}
    cplx p = 1.0;  // w^{k-1}
    cplx pm1 = 0.0, pm2 = 0.0;
    for (Eigen::Index k = 1; k <= km; ++k) {
      const double kd = static_cast<double>(k);
      e1(k - 1) = kd * p;
      e2(k - 1) = kd * (kd - 1) * pm1;
      e3(k - 1) = kd * (kd - 1) * (kd - 2) * pm2;
      pm2 = pm1;
      pm1 = p;
      p *= w;
    }
    const auto nk = static_cast<Eigen::Index>(zetas_.size());
    CVector q1(nk), q2(nk), q3(nk);
    for (Eigen::Index i = 0; i < nk; ++i) {
      const cplx z = zetas_[static_cast<std::size_t>(i)];
      const cplx zc = std::conj(z);
      const double s = 1.0 - std::norm(z);
      const cplx q = 1.0 / (1.0 - zc * w);
      const cplx q2v = q * q;
      q1(i) = s * q2v;
      q2(i) = 2.0 * zc * s * q2v * q;
      q3(i) = 6.0 * zc * zc * s * q2v * q2v;
    }
    d1 = mono_ * e1 + kern_ * q1;
    d2 = mono_ * e2 + kern_ * q2;
    d3 = mono_ * e3 + kern_ * q3;
  }

  [[nodiscard]] CVector deriv(cplx w) const {
    CVector d1, d2, d3;
    derivs(w, d1, d2, d3);
    return d1;
  }

  /// Bound on ||f^{(m)}(w)|| over |w| <= r.
  [[nodiscard]] double bound(int m, double r) const {
    double b = 0.0;
    for (std::size_t k = 0; k < mono_norms_.size(); ++k)
      if (mono_norms_[k] > 0) b += mono_norms_[k] * basis_fn::deriv_bound(Monomial{static_cast<int>(k) + 1}, m, r);
    for (std::size_t i = 0; i < zetas_.size(); ++i)
      if (kern_norms_[i] > 0) b += kern_norms_[i] * basis_fn::deriv_bound(Kernel{DiscPoint(zetas_[i])}, m, r);
    return b;
  }

 private:
  int dim_;
  CMatrix mono_;
  CMatrix kern_;
  std::vector<cplx> zetas_;
  std::vector<CVector> kern_cols_;
  std::vector<double> mono_norms_;
  std::vector<double> kern_norms_;
};

inline double hyperbolic_weight(cplx w) { return 1.0 - std::norm(w); }

/// Compass-pattern local ascent of (1-|w|^2)||F'(w)||, used to sharpen the
/// grid maximiser. Stays inside |w| <= 1 - 1e-9.
template <class Eval>
std::pair<double, cplx> polish_max(const Eval& phi, cplx start, double start_value, double step) {
  cplx best = start;
  double val = start_value;
  static const std::array<cplx, 8> dirs = {cplx(1, 0),  cplx(-1, 0), cplx(0, 1),
                                           cplx(0, -1), cplx(0.70710678118654752, 0.70710678118654752),
                                           cplx(-0.70710678118654752, 0.70710678118654752),
                                           cplx(0.70710678118654752, -0.70710678118654752),
                                           cplx(-0.70710678118654752, -0.70710678118654752)};
  int iters = 0;
  while (step > 1e-14 && iters < 4000) {
    ++iters;
    bool moved = false;
    for (const cplx& d : dirs) {
      const cplx cand = best + step * d;
      if (std::abs(cand) > DiscPoint::kMaxModulus) continue;
      const double v = phi(cand);
      if (v > val) {
        val = v;
        best = cand;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return {val, best};
}

}  // namespace detail

/// Grid maximum of (1-|w|^2)||f'(w)|| sharpened by local ascent; a lower bound
/// on rho for any derivative map. No upper certificate.
template <DerivativeMap F>
SeminormBracket seminorm_lower(const F& f, const GridSpec& grid) {
  SeminormBracket out;
  auto phi = [&](cplx w) { return detail::hyperbolic_weight(w) * CVector(f.deriv(w)).norm(); };
  for (const cplx& w : grid.points()) {
    const double v = phi(w);
    ++out.evaluations;
    if (v > out.grid_lower) {
      out.grid_lower = v;
      out.grid_argmax = w;
    }
  }
  auto [val, at] = detail::polish_max(phi, out.grid_argmax, out.grid_lower, 0.5 / grid.n_r);
  out.lower = val;
  out.argmax = at;
  out.certified_upper = std::numeric_limits<double>::infinity();
  return out;
}

/// Certified bracket lower <= rho(f) <= certified_upper.
///
/// The inner disc |w| <= r_cert is covered by polar grid cells which are
/// refined branch-and-bound style until every cell's bound on
/// psi = (1-|w|^2)^2 ||f'(w)||^2 falls below the running best times
/// (1 + rel_tol)^2. The annulus beyond r_cert is bounded by
/// (1 - r_cert^2) * sup_{|w|<=1} ||f'||.
inline SeminormBracket bloch_seminorm(const BlochFunc& f, const GridSpec& grid = {}) {
  grid.validate();
  if (!f.valid()) throw InvalidInput("bloch_seminorm: invalid BlochFunc");
  const detail::CompiledBloch cf(f);
  SeminormBracket out;

  CVector d1, d2, d3;
  auto psi_at = [&](cplx w) {
    cf.derivs(w, d1, d2, d3);
    const double u = detail::hyperbolic_weight(w);
    return u * u * d1.squaredNorm();
  };
  auto phi = [&](cplx w) { return detail::hyperbolic_weight(w) * cf.deriv(w).norm(); };

  // Raw grid.
  for (const cplx& w : grid.points()) {
    const double v = std::sqrt(psi_at(w));
    ++out.evaluations;
    if (v > out.grid_lower) {
      out.grid_lower = v;
      out.grid_argmax = w;
    }
  }
  double best = out.grid_lower;
  cplx best_at = out.grid_argmax;
  {
    auto [v, w] = detail::polish_max(phi, best_at, best, 0.5 / grid.n_r);
    best = v;
    best_at = w;
  }

  // Cells in (t, theta) parameter space.
  struct Cell {
    double t0, t1, th0, th1;
    double bound;  // on psi
    bool operator<(const Cell& o) const { return bound < o.bound; }
  };
  const double two_pi = 2.0 * std::numbers::pi;

  auto make_cell = [&](double t0, double t1, double th0, double th1) {
    const double tc = 0.5 * (t0 + t1), thc = 0.5 * (th0 + th1);
    const double r0 = grid.radius_at(t0), r1 = grid.radius_at(t1), rc = grid.radius_at(tc);
    const cplx c = std::polar(rc, thc);
    const double delta = std::max(r1 - rc, rc - r0) + rc * 2.0 * std::sin(0.25 * (th1 - th0));

    cf.derivs(c, d1, d2, d3);
    ++out.evaluations;
    const double u = detail::hyperbolic_weight(c);
    const double q = d1.squaredNorm();
    const double psi = u * u * q;
    const double phic = std::sqrt(psi);
    if (phic > best) {
      best = phic;
      best_at = c;
    }

    const double b1 = cf.bound(1, r1), b2 = cf.bound(2, r1);
    const double umax = 1.0 - r0 * r0;
    double bound;
    if (grid.mode == DerivativeBound::Lipschitz) {
      // |grad phi| <= 2 r ||f'|| + (1 - r^2) ||f''||
      const double lip = 2.0 * r1 * b1 + umax * b2;
      const double ph = phic + lip * delta;
      bound = ph * ph;
    } else {
      const double b3 = cf.bound(3, r1);
      // gradient of psi = u^2 q at the centre
      const cplx fq = d1.dot(d2);  // <F, F'>
      const double gu_x = -2.0 * c.real(), gu_y = -2.0 * c.imag();
      const double gq_x = 2.0 * fq.real(), gq_y = -2.0 * fq.imag();
      const double gx = 2.0 * u * q * gu_x + u * u * gq_x;
      const double gy = 2.0 * u * q * gu_y + u * u * gq_y;
      const double grad = std::hypot(gx, gy);
      // Hessian bound over the cell
      const double qmax = b1 * b1;
      const double gqmax = 2.0 * b1 * b2;
      const double hqmax = 2.0 * (b2 * b2 + b1 * b3);
      const double gumax = 2.0 * r1;
      const double hess = 2.0 * qmax * gumax * gumax + 4.0 * umax * qmax +
                          4.0 * umax * gumax * gqmax + umax * umax * hqmax;
      bound = psi + grad * delta + 0.5 * hess * delta * delta;
    }
    return Cell{t0, t1, th0, th1, bound};
  };

  std::priority_queue<Cell> heap;
  for (int i = 0; i < grid.n_r; ++i) {
    const double t0 = static_cast<double>(i) / grid.n_r, t1 = static_cast<double>(i + 1) / grid.n_r;
    for (int j = 0; j < grid.n_theta; ++j) {
      heap.push(make_cell(t0, t1, two_pi * j / grid.n_theta, two_pi * (j + 1) / grid.n_theta));
    }
  }

  auto target = [&] {
    const double tb = best * (1.0 + grid.rel_tol);
    return std::max(tb * tb, best * best + 1e-28);
  };

  while (!heap.empty() && heap.top().bound > target()) {
    if (out.evaluations >= grid.max_evaluations) {
      out.budget_hit = true;
      break;
    }
    const Cell c = heap.top();
    heap.pop();
    const double tm = 0.5 * (c.t0 + c.t1), thm = 0.5 * (c.th0 + c.th1);
    heap.push(make_cell(c.t0, tm, c.th0, thm));
    heap.push(make_cell(tm, c.t1, c.th0, thm));
    heap.push(make_cell(c.t0, tm, thm, c.th1));
    heap.push(make_cell(tm, c.t1, thm, c.th1));
  }

  double inner_upper;
  if (out.budget_hit) {
    inner_upper = std::max(best, std::sqrt(heap.top().bound));
  } else {
    // Every remaining cell is below the target; report the relative gap
    // unless only the absolute floor was met.
    const double rel = best * (1.0 + grid.rel_tol);
    inner_upper = heap.top().bound <= rel * rel ? rel : std::sqrt(heap.top().bound);
  }

  // Final sharpening of the best point and the leading cells.
  {
    std::vector<cplx> starts{best_at};
    for (int i = 0; i < 4 && !heap.empty(); ++i) {
      const Cell c = heap.top();
      heap.pop();
      starts.push_back(std::polar(grid.radius_at(0.5 * (c.t0 + c.t1)), 0.5 * (c.th0 + c.th1)));
    }
    for (const cplx& s : starts) {
      auto [v, w] = detail::polish_max(phi, s, phi(s), 1e-3);
      if (v > best) {
        best = v;
        best_at = w;
      }
    }
  }
  if (!out.budget_hit) inner_upper = std::max(inner_upper, best * (1.0 + grid.rel_tol));

  out.tail_bound = (1.0 - grid.r_cert * grid.r_cert) * cf.bound(1, 1.0);
  out.lower = best;
  out.argmax = best_at;
  out.certified_upper = std::max({inner_upper, out.tail_bound, best});
  return out;
}

// ---------------------------------------------------------------------------
// Samplers and self-maps

namespace detail {
inline BlochFunc random_monomial_combination(int degree, int d, std::uint64_t seed) {
  Rng rng(seed);
  BlochFunc f(d);
  for (int k = 1; k <= degree; ++k) {
    CVector c(d);
    for (int i = 0; i < d; ++i) c(i) = complex_gaussian(rng) / static_cast<double>(k);
    f.terms.push_back({c, Monomial{k}});
  }
  return f;
}
}  // namespace detail

/// Random monomial combination of degree <= D scaled into the Bloch unit ball
/// by its certified seminorm upper bound.
inline BlochFunc random_ball_function(int degree, int d, std::uint64_t seed,
                                      const GridSpec& grid = GridSpec::coarse()) {
  if (degree < 1 || degree > 64) throw InvalidInput("random_ball_function: degree must lie in [1, 64]");
  if (d < 1) throw InvalidInput("random_ball_function: dimension must be positive");
  for (std::uint64_t attempt = 0;; ++attempt) {
    BlochFunc f = detail::random_monomial_combination(degree, d, split_seed(seed, 0xB011, attempt));
    const double up = bloch_seminorm(f, grid).certified_upper;
    if (up > 0.0) return cplx(1.0 / up) * f;
  }
}

/// Same sampler, normalised by the triangle bound sum_k ||c_k|| rho(w^k).
/// Cheaper and still inside the ball, but strictly inside in general.
inline BlochFunc random_ball_function_cheap(int degree, int d, std::uint64_t seed) {
  if (degree < 1 || degree > 64) throw InvalidInput("random_ball_function: degree must lie in [1, 64]");
  for (std::uint64_t attempt = 0;; ++attempt) {
    BlochFunc f = detail::random_monomial_combination(degree, d, split_seed(seed, 0xB011, attempt));
    double up = 0.0;
    for (const auto& t : f.terms)
      up += t.payload.norm() * basis_fn::monomial_seminorm(std::get<Monomial>(t.basis).k);
    if (up > 0.0) return cplx(1.0 / up) * f;
  }
}

/// h(w) = w (a - w) / (1 - conj(a) w): holomorphic self-map of the disc, h(0) = 0.
struct BlaschkeSelfMap {
  DiscPoint a;

  [[nodiscard]] cplx value(cplx w) const {
    const cplx av = a.value();
    return w * (av - w) / (1.0 - std::conj(av) * w);
  }
  [[nodiscard]] cplx deriv(cplx w) const {
    const cplx av = a.value();
    const cplx den = 1.0 - std::conj(av) * w;
    return (av - 2.0 * w + std::conj(av) * w * w) / (den * den);
  }
};

inline BlaschkeSelfMap self_map_blaschke(DiscPoint a) { return BlaschkeSelfMap{a}; }

/// w -> T f(h(w)); derivative T f'(h(w)) h'(w).
struct ComposedMap {
  CMatrix t;
  BlochFunc f;
  BlaschkeSelfMap h;

  [[nodiscard]] int dim() const { return static_cast<int>(t.rows()); }
  [[nodiscard]] CVector deriv(cplx w) const {
    const cplx hw = h.value(w);
    return t * f.deriv(hw) * h.deriv(w);
  }
};

}  // namespace blochfact
