#pragma once

// Property-based acceptance suite, criteria 1-11. Each criterion records its
// metrics as JSON; the determinism criterion reruns 1-10 and compares digests.

#include <chrono>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "io.hpp"

namespace blochfact::acceptance {

using io::json;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;
  std::string summary;
  json metrics;
};

inline std::string metrics_digest(const CriterionResult& r) {
  return io::hex64(io::fnv1a(r.metrics.dump()));
}

inline json to_json(const CriterionResult& r) {
  return {{"id", r.id},         {"name", r.name},       {"pass", r.pass},
          {"seconds", r.seconds}, {"limit_seconds", r.limit_seconds}, {"summary", r.summary},
          {"digest", metrics_digest(r)}, {"metrics", r.metrics}};
}

/// 20 mappings: rank-one kernels, rank-one monomials and two-term sums, d <= 4.
inline std::vector<std::pair<std::string, BlochFunc>> suite_mappings() {
  auto vec = [](std::initializer_list<cplx> il) {
    CVector v(static_cast<Eigen::Index>(il.size()));
    Eigen::Index i = 0;
    for (cplx c : il) v(i++) = c;
    return v;
  };
  std::vector<std::pair<std::string, BlochFunc>> s;
  s.emplace_back("kernel(0)x", BlochFunc::kernel(DiscPoint(0.0), vec({1.0, cplx(0, 1)})));
  s.emplace_back("kernel(0.3i)x", BlochFunc::kernel(DiscPoint(cplx(0, 0.3)), vec({2.0})));
  s.emplace_back("kernel(0.6)x", BlochFunc::kernel(DiscPoint(0.6), vec({1.0, -1.0, 0.5})));
  s.emplace_back("kernel(-0.5+0.2i)x", BlochFunc::kernel(DiscPoint(cplx(-0.5, 0.2)), vec({0.3, cplx(0.4, 0.1), 1.0, -0.2})));
  s.emplace_back("kernel(0.8e^i)x", BlochFunc::kernel(DiscPoint(std::polar(0.8, 1.0)), vec({cplx(1, 1), 0.5})));
  s.emplace_back("kernel(0.7i)x", BlochFunc::kernel(DiscPoint(cplx(0, 0.7)), vec({1.0, 2.0, 0.0, cplx(0, -1)})));
  s.emplace_back("w x", BlochFunc::monomial(1, vec({3.0, 4.0})));
  s.emplace_back("w^2 x", BlochFunc::monomial(2, vec({1.0, cplx(0, 1), 1.0})));
  s.emplace_back("w^3 x", BlochFunc::monomial(3, vec({0.5})));
  s.emplace_back("w^5 x", BlochFunc::monomial(5, vec({1.0, 0.0, cplx(0.2, 0.7), -1.0})));
  s.emplace_back("w^2 x'", BlochFunc::monomial(2, vec({cplx(0.6, -0.8)})));
  s.emplace_back("w^8 x", BlochFunc::monomial(8, vec({1.0, 1.0})));
  auto two = [&](const char* name, int d, Basis b1, CVector x1, Basis b2, CVector x2) {
    BlochFunc f(d);
    f.add(x1, b1).add(x2, b2);
    s.emplace_back(name, f);
  };
  two("w e1 + w^2 e2", 2, Monomial{1}, vec({1.0, 0.0}), Monomial{2}, vec({0.0, 1.0}));
  two("k(0.5) e1 + k(-0.5) e2", 2, Kernel{DiscPoint(0.5)}, vec({1.0, 0.0}), Kernel{DiscPoint(-0.5)}, vec({0.0, 1.0}));
  two("k(0.3i) x + w^3 y", 3, Kernel{DiscPoint(cplx(0, 0.3))}, vec({1.0, 0.5, 0.0}), Monomial{3},
      vec({0.0, cplx(0, 1), 1.0}));
  two("k(0.6) + k(0.6i) scalar", 1, Kernel{DiscPoint(0.6)}, vec({1.0}), Kernel{DiscPoint(cplx(0, 0.6))}, vec({cplx(0, 1)}));
  two("w x + k(0.7) y", 4, Monomial{1}, vec({1.0, 0.0, 1.0, 0.0}), Kernel{DiscPoint(0.7)}, vec({0.0, 1.0, 0.0, -1.0}));
  two("w^2 + w^4 scalar", 1, Monomial{2}, vec({1.0}), Monomial{4}, vec({-0.5}));
  two("k(0.2-0.4i) x + k(0.8) y", 2, Kernel{DiscPoint(cplx(0.2, -0.4))}, vec({cplx(0.5, 0.5), 1.0}),
      Kernel{DiscPoint(0.8)}, vec({1.0, -0.3}));
  two("w^6 x + w y", 3, Monomial{6}, vec({1.0, 1.0, 1.0}), Monomial{1}, vec({0.2, 0.0, -0.2}));
  return s;
}

namespace detail {

inline CVector gaussian_vector(Rng& rng, int d) {
  CVector v(d);
  for (int k = 0; k < d; ++k) v(k) = complex_gaussian(rng);
  return v;
}

inline DiscPoint uniform_point(Rng& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return DiscPoint(std::polar(rmax * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));
}

inline VecMolecule random_vec_molecule(Rng& rng, int d, int n) {
  VecMolecule g(d);
  for (int i = 0; i < n; ++i) g.add(complex_gaussian(rng), uniform_point(rng, 0.9), gaussian_vector(rng, d));
  return g;
}

/// Random pair over a shared pool of <= 6 points, mixing dominated, boundary and violating cases.
inline std::pair<WeightedSeq, WeightedSeq> domination_instance(Rng& rng) {
  std::uniform_int_distribution<int> pool_size(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DiscPoint> pool;
  const int np = pool_size(rng);
  for (int i = 0; i < np; ++i) pool.push_back(uniform_point(rng, 0.9));
  WeightedSeq a, b;
  const double mode = u(rng);
  for (const auto& p : pool) {
    if (u(rng) < 0.75) {
      const cplx lam = complex_gaussian(rng);
      a.pairs.push_back({lam, p});
      if (mode < 0.35) b.pairs.push_back({lam * (1.0 + u(rng)), p});               // dominated
      else if (mode < 0.5) b.pairs.push_back({lam * std::polar(1.0, 6.0 * u(rng)), p});  // equal mass
      else if (u(rng) < 0.8) b.pairs.push_back({complex_gaussian(rng), p});        // unstructured
    } else if (u(rng) < 0.5) {
      b.pairs.push_back({complex_gaussian(rng), p});
    }
  }
  return {canonicalize(a), canonicalize(b)};
}

template <class Fn>
CriterionResult timed(int id, std::string name, double limit, Fn&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.limit_seconds = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.summary = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.limit_seconds) {
    r.pass = false;
    r.summary += " [runtime limit exceeded]";
  }
  return r;
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CriterionResult kernel_extremality(std::uint64_t) {
  return detail::timed(1, "kernel extremality", 5.0, [](CriterionResult& r) {
    const GridSpec grid;
    bool ok = true;
    double worst_width = 0.0;
    r.metrics = json::array();
    for (cplx z : {cplx(0.0), cplx(0.0, 0.3), cplx(0.7), cplx(-0.5, 0.2)}) {
      const auto b = bloch_seminorm(BlochFunc::kernel(DiscPoint(z)), grid);
      const double width = b.certified_upper - b.lower;
      const double dist = std::abs(b.grid_argmax - z);
      const double cell = grid.cell_diameter_at(z);
      const bool pass = b.lower <= 1.0 + 1e-12 && b.certified_upper >= 1.0 && width <= 2e-3 && dist <= cell;
      ok = ok && pass;
      worst_width = std::max(worst_width, width);
      r.metrics.push_back({{"z", io::to_json(z)}, {"bracket", io::to_json(b)}, {"argmax_distance", dist},
                           {"cell", cell}, {"pass", pass}});
    }
    r.pass = ok;
    r.summary = "max width " + detail::fmt(worst_width);
  });
}

inline CriterionResult atom_norm(std::uint64_t) {
  return detail::timed(2, "atom norm", 120.0, [](CriterionResult& r) {
    bool ok = true;
    double worst = 0.0;
    r.metrics = json::array();
    for (cplx z : {cplx(0.0), cplx(0.5), cplx(0.0, 0.8), cplx(-0.6, 0.3)}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto b = molecule_norm_opt(Molecule{{1.0, DiscPoint(z)}});
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double truth = 1.0 / (1.0 - std::norm(z));
      const double width = (b.upper - b.lower) / truth;
      const bool pass = b.lower <= truth && truth <= b.upper && width <= 0.02 && secs <= 30.0;
      ok = ok && pass;
      worst = std::max(worst, width);
      r.metrics.push_back({{"z", io::to_json(z)}, {"lower", b.lower}, {"upper", b.upper}, {"truth", truth},
                           {"relative_width", width}, {"pass", pass}});
    }
    r.pass = ok;
    r.summary = "max relative width " + detail::fmt(worst);
  });
}

struct DominationRun {
  int instances = 0;
  int disagreements = 0;
  int dominated = 0;
  std::vector<std::tuple<WeightedSeq, WeightedSeq, DominationVerdict>> verdicts;
};

inline DominationRun run_domination(std::uint64_t seed, int instances, int n_samples) {
  DominationRun run;
  Rng rng(split_seed(seed, 0xA03, 0));
  for (int i = 0; i < instances; ++i) {
    auto [a, b] = detail::domination_instance(rng);
    auto v = decide_domination(a, b, n_samples, 8, split_seed(seed, 0xA04, static_cast<std::uint64_t>(i)));
    ++run.instances;
    run.dominated += v.mass;
    run.disagreements += !v.agree;
    run.verdicts.emplace_back(std::move(a), std::move(b), std::move(v));
  }
  return run;
}

inline CriterionResult domination_agreement(std::uint64_t seed, const DominationRun& run, double seconds) {
  CriterionResult r;
  r.id = 3;
  r.name = "domination three-way agreement";
  r.limit_seconds = 120.0;
  r.seconds = seconds;
  json findings = json::array();
  for (std::size_t i = 0; i < run.verdicts.size(); ++i) {
    const auto& [a, b, v] = run.verdicts[i];
    if (!v.agree) findings.push_back({{"instance", i}, {"a", io::to_json(a)}, {"b", io::to_json(b)}, {"verdict", io::to_json(v)}});
  }
  r.metrics = {{"seed", seed}, {"instances", run.instances}, {"dominated", run.dominated},
               {"disagreements", run.disagreements}, {"findings", findings}};
  r.pass = run.instances == 200 && run.disagreements == 0 && r.seconds <= r.limit_seconds;
  r.summary = std::to_string(run.instances) + " instances, " + std::to_string(run.dominated) + " dominated, " +
              std::to_string(run.disagreements) + " disagreements";
  return r;
}

inline CriterionResult witness_soundness(const DominationRun& run) {
  return detail::timed(4, "witness soundness", 60.0, [&](CriterionResult& r) {
    int contraction = 0, contraction_ok = 0, violation = 0, violation_ok = 0;
    double worst_residual = 0.0, worst_norm_gap = 0.0, min_margin = std::numeric_limits<double>::infinity();
    auto check_violation = [&](const ViolationWitness& w, const WeightedSeq& a, const WeightedSeq& b) {
      ++violation;
      // recompute from the serialised witness
      const BlochFunc g = io::blochfunc_from_json(json::parse(io::to_json(w.g).dump()));
      const auto [l, rr] = domination_sides(g, a, b);
      min_margin = std::min(min_margin, l - rr);
      violation_ok += (l - rr >= 1e-10 && l == w.lhs && rr == w.rhs);
    };
    for (const auto& [a, b, v] : run.verdicts) {
      if (v.contraction) {
        ++contraction;
        const double res = contraction_residual(v.contraction->a, a, b);
        double sv = 0.0;
        if (v.contraction->a.size() > 0) sv = Eigen::JacobiSVD<CMatrix>(v.contraction->a).singularValues()(0);
        const double gap = std::abs(sv - v.contraction->opnorm);
        worst_residual = std::max(worst_residual, res);
        worst_norm_gap = std::max(worst_norm_gap, gap);
        contraction_ok += (res <= 1e-9 && gap <= 1e-8);
      }
      if (v.lagrange) check_violation(*v.lagrange, a, b);
      if (v.sampled) check_violation(*v.sampled, a, b);
    }
    r.metrics = {{"contraction_witnesses", contraction}, {"contraction_verified", contraction_ok},
                 {"max_residual", worst_residual},       {"max_norm_gap", worst_norm_gap},
                 {"violation_witnesses", violation},     {"violation_verified", violation_ok},
                 {"min_margin", violation ? min_margin : 0.0}};
    r.pass = contraction_ok == contraction && violation_ok == violation && contraction + violation > 0;
    r.summary = std::to_string(contraction_ok) + "/" + std::to_string(contraction) + " contraction, " +
                std::to_string(violation_ok) + "/" + std::to_string(violation) + " violation witnesses verified";
  });
}

/// Pietsch results for the suite, computed once per criterion that needs them.
inline std::vector<PietschResult> suite_pietsch(const std::vector<std::pair<std::string, BlochFunc>>& maps,
                                                std::uint64_t seed) {
  std::vector<PietschResult> out;
  PietschOptions opt;
  opt.seed = split_seed(seed, 0xA05, 0);
  for (const auto& [name, f] : maps) out.push_back(pietsch_ub(f, opt));
  return out;
}

inline CriterionResult gamma2_sandwich(std::uint64_t seed) {
  return detail::timed(5, "gamma2 sandwich", 300.0, [&](CriterionResult& r) {
    const auto maps = suite_mappings();
    const auto ps = suite_pietsch(maps, seed);
    bool ok = true;
    r.metrics = json::array();
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto& [name, f] = maps[i];
      const double rho = bloch_seminorm(f).lower;
      const double kw = kwapien_lb(f, 200, split_seed(seed, 0xA06, i));
      const auto w = build_factorization(f, ps[i].cert);
      const double viol = certificate_violation(f, ps[i].cert);
      const bool pass = rho - 1e-9 <= kw && kw <= ps[i].c && w.residual <= 1e-6 && w.bound() <= ps[i].c * 1.02 &&
                        viol <= 1e-8;
      ok = ok && pass;
      r.metrics.push_back({{"mapping", name}, {"rho_lower", rho}, {"kwapien_lb", kw}, {"pietsch_ub", ps[i].c},
                           {"certificate_violation", viol}, {"factorization_bound", w.bound()},
                           {"residual", w.residual}, {"route", w.route}, {"pass", pass}});
    }
    r.pass = ok;
    r.summary = std::to_string(maps.size()) + " mappings";
  });
}

inline CriterionResult n2_equality(std::uint64_t seed) {
  return detail::timed(6, "N2 equality", 60.0, [&](CriterionResult& r) {
    Rng rng(split_seed(seed, 0xA07, 0));
    std::vector<BlochFunc> scalars;
    for (cplx z : {cplx(0.0), cplx(0.4), cplx(0.0, -0.6), cplx(0.5, 0.5), cplx(-0.8)})
      scalars.push_back(BlochFunc::kernel(DiscPoint(z)));
    for (int k : {1, 2, 3, 5}) scalars.push_back(BlochFunc::monomial(k));
    scalars.push_back(random_ball_function(6, 1, split_seed(seed, 0xA08, 0)));
    PietschOptions opt;
    opt.seed = split_seed(seed, 0xA09, 0);
    bool ok = true;
    double worst = 0.0;
    r.metrics = json::array();
    for (std::size_t i = 0; i < scalars.size(); ++i) {
      const int d = 1 + static_cast<int>(i % 4);
      const CVector x = detail::gaussian_vector(rng, d);
      const auto ro = rank_one(scalars[i], x);
      const double truth = 0.5 * (ro.lower + ro.upper);
      const double c = pietsch_ub(ro.f, opt).c;
      const double rel = std::abs(c - truth) / truth;
      const bool pass = rel <= 0.02;
      ok = ok && pass;
      worst = std::max(worst, rel);
      r.metrics.push_back({{"g", io::to_json(scalars[i])}, {"x", io::to_json(x)}, {"rho_x", truth}, {"pietsch_ub", c},
                           {"relative_gap", rel}, {"pass", pass}});
    }
    r.pass = ok;
    r.summary = "max relative gap " + detail::fmt(worst);
  });
}

inline CriterionResult unitary_criterion(std::uint64_t seed) {
  return detail::timed(7, "unitary criterion", 120.0, [&](CriterionResult& r) {
    const auto maps = suite_mappings();
    const auto ps = suite_pietsch(maps, seed);
    bool ok = true;
    double worst = 0.0;
    r.metrics = json::array();
    for (std::size_t i = 0; i < maps.size(); ++i) {
      double m = 0.0;
      for (int n : {1, 2, 4, 8, 16}) {
        const auto rep = unitary_criterion_check(maps[i].second, ps[i].c, n, 200, split_seed(seed, 0xA0A, i * 32 + n));
        m = std::max(m, rep.max_ratio);
      }
      const bool pass = m <= 1.0 + 1e-6;
      ok = ok && pass;
      worst = std::max(worst, m);
      r.metrics.push_back({{"mapping", maps[i].first}, {"c", ps[i].c}, {"trials", 1000}, {"max_ratio", m}, {"pass", pass}});
    }
    r.pass = ok;
    r.summary = "max ratio " + detail::fmt(worst);
  });
}

inline CriterionResult ideal_composition(std::uint64_t seed) {
  return detail::timed(8, "ideal/composition", 120.0, [&](CriterionResult& r) {
    const auto maps = suite_mappings();
    Rng rng(split_seed(seed, 0xA0B, 0));
    PietschOptions opt;
    opt.seed = split_seed(seed, 0xA05, 0);
    bool ok = true;
    r.metrics = json::array();
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto& f = maps[i].second;
      const DiscPoint a = i % 5 == 0 ? DiscPoint(0.0) : detail::uniform_point(rng, 0.9);
      const int rows = 1 + static_cast<int>(i % 3);
      CMatrix t(rows, f.dim);
      for (Eigen::Index p = 0; p < t.rows(); ++p)
        for (Eigen::Index q = 0; q < t.cols(); ++q) t(p, q) = complex_gaussian(rng);
      const auto rep = ideal_inequality_check(t, f, a, split_seed(seed, 0xA0C, i), opt);
      ok = ok && rep.pass;
      r.metrics.push_back({{"mapping", maps[i].first}, {"a", io::to_json(a.value())}, {"rho_f_upper", rep.rho_f_upper},
                           {"rho_fh_lower", rep.rho_fh_lower}, {"contraction_margin", rep.contraction_margin},
                           {"kwapien_tfh", rep.kwapien_tfh}, {"opnorm_T", rep.opnorm_t}, {"pietsch_f", rep.pietsch_f},
                           {"ideal_margin", rep.ideal_margin}, {"pass", rep.pass}});
    }
    r.pass = ok;
    r.summary = std::to_string(maps.size()) + " (f, a) pairs";
  });
}

inline CriterionResult two_summing(std::uint64_t seed) {
  return detail::timed(9, "2-summing direction", 120.0, [&](CriterionResult& r) {
    const auto maps = suite_mappings();
    PietschOptions opt;
    opt.seed = split_seed(seed, 0xA05, 0);
    bool ok = true;
    double worst = 0.0;
    r.metrics = json::array();
    for (const auto& [name, f] : maps) {
      const double c = pietsch_ub(f, opt).c;
      const auto p = psum2_ub(f, 200, 100, opt);
      const double ratio = c / p.estimate;
      const bool pass = c <= p.estimate * 1.05;
      ok = ok && pass;
      worst = std::max(worst, ratio);
      r.metrics.push_back({{"mapping", name}, {"pietsch_ub", c}, {"psum2", p.estimate}, {"source", p.source},
                           {"ratio", ratio}, {"pass", pass}});
    }
    r.pass = ok;
    r.summary = "max pietsch/psum2 " + detail::fmt(worst);
  });
}

inline CriterionResult duality(std::uint64_t seed) {
  return detail::timed(10, "duality", 180.0, [&](CriterionResult& r) {
    Rng rng(split_seed(seed, 0xA0D, 0));
    std::uniform_int_distribution<int> dim(1, 4), terms(1, 6);
    int sandwich_fail = 0;
    double sandwich_worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
      const VecMolecule g = detail::random_vec_molecule(rng, dim(rng), terms(rng));
      const double lb = w2_lb(g), ub = w2_ub(g, 64, split_seed(seed, 0xA0E, static_cast<std::uint64_t>(i))).value;
      sandwich_worst = std::max(sandwich_worst, lb - ub);
      sandwich_fail += lb > ub + 1e-9;
    }

    const auto maps = suite_mappings();
    const auto ps = suite_pietsch(maps, seed);
    int pairing_fail = 0;
    double pairing_worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const std::size_t m = static_cast<std::size_t>(i) % maps.size();
      const auto& f = maps[m].second;
      const VecMolecule g = detail::random_vec_molecule(rng, f.dim, terms(rng));
      const double lhs = std::abs(vec_pairing(f, g));
      const double rhs = ps[m].c * w2_ub(g).value;
      pairing_worst = std::max(pairing_worst, lhs / rhs);
      pairing_fail += lhs > rhs * 1.02;
    }

    int tight_fail = 0;
    double tight_worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const VecMolecule g = detail::random_vec_molecule(rng, dim(rng), 1);
      const double ratio = w2_ub(g).value / w2_lb(g);
      tight_worst = std::max(tight_worst, ratio);
      tight_fail += ratio > 1.05;
    }
    r.metrics = {{"sandwich_trials", 1000},  {"sandwich_failures", sandwich_fail}, {"max_lb_minus_ub", sandwich_worst},
                 {"pairing_trials", 1000},   {"pairing_failures", pairing_fail},   {"max_pairing_ratio", pairing_worst},
                 {"tightness_trials", 100},  {"tightness_failures", tight_fail},   {"max_ub_over_lb", tight_worst}};
    r.pass = sandwich_fail == 0 && pairing_fail == 0 && tight_fail == 0;
    r.summary = "max pairing ratio " + detail::fmt(pairing_worst) + ", max single-term ub/lb " + detail::fmt(tight_worst);
  });
}

/// Every criterion id, 1-11.
inline std::set<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}; }

/// Runs the selected criteria among 1-10 in id order.
inline std::vector<CriterionResult> run_core(std::uint64_t seed, const std::set<int>& ids,
                                             const std::function<void(const CriterionResult&)>& on_done = {}) {
  for (int id : ids)
    if (id < 1 || id > 11) throw InvalidInput("acceptance: unknown criterion " + std::to_string(id));
  std::vector<CriterionResult> out;
  auto push = [&](CriterionResult r) {
    if (on_done) on_done(r);
    out.push_back(std::move(r));
  };
  auto want = [&](int id) { return ids.count(id) > 0; };
  if (want(1)) push(kernel_extremality(seed));
  if (want(2)) push(atom_norm(seed));
  if (want(3) || want(4)) {
    const auto t0 = std::chrono::steady_clock::now();
    DominationRun run;
    CriterionResult c3;
    try {
      run = run_domination(seed, 200, 10000);
      c3 = domination_agreement(seed, run, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    } catch (const std::exception& e) {
      c3.id = 3;
      c3.name = "domination three-way agreement";
      c3.summary = std::string("error: ") + e.what();
    }
    if (want(3)) push(c3);
    if (want(4)) push(witness_soundness(run));
  }
  if (want(5)) push(gamma2_sandwich(seed));
  if (want(6)) push(n2_equality(seed));
  if (want(7)) push(unitary_criterion(seed));
  if (want(8)) push(ideal_composition(seed));
  if (want(9)) push(two_summing(seed));
  if (want(10)) push(duality(seed));
  return out;
}

/// Criterion 11 from two runs of the same criteria.
inline CriterionResult determinism(const std::vector<CriterionResult>& first, const std::vector<CriterionResult>& second,
                                   double seconds) {
  CriterionResult r;
  r.id = 11;
  r.name = "determinism";
  r.limit_seconds = std::numeric_limits<double>::infinity();
  r.seconds = seconds;
  json digests = json::array();
  bool same = first.size() == second.size();
  for (std::size_t i = 0; same && i < first.size(); ++i) {
    const std::string a = metrics_digest(first[i]), b = metrics_digest(second[i]);
    same = same && a == b && first[i].pass == second[i].pass;
    digests.push_back({{"id", first[i].id}, {"first", a}, {"second", b}});
  }
  r.metrics = {{"digests", digests}};
  r.pass = same;
  r.summary = same ? "rerun reproduced every criterion digest" : "rerun digests differ";
  return r;
}

/// Criterion 11, when selected, reruns the other selected criteria (all of 1-10 if none).
inline std::vector<CriterionResult> run_suite(std::uint64_t seed, const std::set<int>& ids = all_criteria(),
                                              const std::function<void(const CriterionResult&)>& on_done = {}) {
  std::set<int> core = ids;
  core.erase(11);
  const bool rerun = ids.count(11) > 0;
  if (rerun && core.empty()) core = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto first = run_core(seed, core, ids.count(11) && ids.size() == 1 ? std::function<void(const CriterionResult&)>{} : on_done);
  if (!rerun) return first;
  const auto t0 = std::chrono::steady_clock::now();
  const auto second = run_core(seed, core);
  auto det = determinism(first, second, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  if (on_done) on_done(det);
  if (ids.size() == 1) return {det};
  first.push_back(std::move(det));
  return first;
}

inline std::string line(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] criterion %2d  %-32s %8.2fs  %s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.summary.c_str());
  return buf;
}

}  // namespace blochfact::acceptance
