#pragma once

// JSON (de)serialisation of the toolkit's objects and report fragments.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "duality.hpp"

namespace blochfact::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& ctx, const std::string& msg) {
  throw InvalidInput(ctx + ": " + msg);
}

inline void require_keys(const json& j, const std::string& ctx, std::initializer_list<std::string_view> required,
                         std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) fail(ctx, "expected an object");
  for (auto k : required)
    if (!j.contains(std::string(k))) fail(ctx, "missing key '" + std::string(k) + "'");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (auto r : required) known = known || k == r;
    for (auto o : optional) known = known || k == o;
    if (!known) fail(ctx, "unknown key '" + k + "'");
  }
}

inline double number(const json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx, "expected a number");
  return j.get<double>();
}

}  // namespace detail

inline json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2) detail::fail(ctx, "expected [re, im]");
  return {detail::number(j[0], ctx + "[0]"), detail::number(j[1], ctx + "[1]")};
}

inline json to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline CVector vector_from_json(const json& j, const std::string& ctx) {
  if (!j.is_array()) detail::fail(ctx, "expected an array of [re, im]");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], ctx + "[" + std::to_string(i) + "]");
  return v;
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(CVector(m.row(i).transpose())));
  return rows;
}

inline CMatrix matrix_from_json(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) detail::fail(ctx, "expected a non-empty array of rows");
  const CVector first = vector_from_json(j[0], ctx + "[0]");
  CMatrix m(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const CVector r = vector_from_json(j[i], ctx + "[" + std::to_string(i) + "]");
    if (r.size() != first.size()) detail::fail(ctx, "ragged matrix rows");
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

inline DiscPoint point_from_json(const json& j, const std::string& ctx) {
  const cplx c = complex_from_json(j, ctx);
  if (!(std::abs(c) <= DiscPoint::kMaxModulus)) detail::fail(ctx, "point must lie strictly inside the unit disc");
  return DiscPoint(c);
}

// ---- BlochFunc ------------------------------------------------------------

inline json to_json(const BlochFunc& f) {
  json terms = json::array();
  for (const auto& t : f.terms) {
    json basis;
    if (const auto* m = std::get_if<Monomial>(&t.basis)) basis = {{"type", "monomial"}, {"k", m->k}};
    else basis = {{"type", "kernel"}, {"zeta", to_json(std::get<Kernel>(t.basis).zeta.value())}};
    terms.push_back({{"payload", to_json(t.payload)}, {"basis", basis}});
  }
  return {{"dim", f.dim}, {"terms", terms}};
}

inline BlochFunc blochfunc_from_json(const json& j, const std::string& ctx = "BlochFunc") {
  detail::require_keys(j, ctx, {"dim", "terms"});
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1) detail::fail(ctx + ".dim", "expected a positive integer");
  BlochFunc f(j["dim"].get<int>());
  if (!j["terms"].is_array()) detail::fail(ctx + ".terms", "expected an array");
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const std::string c = ctx + ".terms[" + std::to_string(i) + "]";
    const json& t = j["terms"][i];
    detail::require_keys(t, c, {"payload", "basis"});
    const CVector p = vector_from_json(t["payload"], c + ".payload");
    if (p.size() != f.dim) detail::fail(c + ".payload", "length differs from dim");
    const json& b = t["basis"];
    if (!b.is_object() || !b.contains("type") || !b["type"].is_string()) detail::fail(c + ".basis", "missing type");
    const std::string type = b["type"].get<std::string>();
    if (type == "monomial") {
      detail::require_keys(b, c + ".basis", {"type", "k"});
      if (!b["k"].is_number_integer() || b["k"].get<long>() < 1 || b["k"].get<long>() > 100000)
        detail::fail(c + ".basis.k", "expected an integer degree >= 1");
      f.add(p, Monomial{b["k"].get<int>()});
    } else if (type == "kernel") {
      detail::require_keys(b, c + ".basis", {"type", "zeta"});
      f.add(p, Kernel{point_from_json(b["zeta"], c + ".basis.zeta")});
    } else {
      detail::fail(c + ".basis.type", "expected \"monomial\" or \"kernel\"");
    }
  }
  return f;
}

// ---- molecules ------------------------------------------------------------

inline json to_json(const WeightedSeq& s) {
  json pairs = json::array();
  for (const auto& [lam, z] : s.pairs) pairs.push_back({{"lambda", to_json(lam)}, {"z", to_json(z.value())}});
  return {{"pairs", pairs}};
}

inline json to_json(const Molecule& m) { return to_json(m.seq); }

inline WeightedSeq weighted_seq_from_json(const json& j, const std::string& ctx = "Molecule") {
  detail::require_keys(j, ctx, {"pairs"});
  if (!j["pairs"].is_array()) detail::fail(ctx + ".pairs", "expected an array");
  WeightedSeq s;
  for (std::size_t i = 0; i < j["pairs"].size(); ++i) {
    const std::string c = ctx + ".pairs[" + std::to_string(i) + "]";
    const json& p = j["pairs"][i];
    detail::require_keys(p, c, {"lambda", "z"});
    s.pairs.push_back({complex_from_json(p["lambda"], c + ".lambda"), point_from_json(p["z"], c + ".z")});
  }
  return s;
}

inline Molecule molecule_from_json(const json& j, const std::string& ctx = "Molecule") {
  return Molecule(weighted_seq_from_json(j, ctx));
}

inline json to_json(const VecMolecule& g) {
  json terms = json::array();
  for (const auto& t : g.terms)
    terms.push_back({{"lambda", to_json(t.lambda)}, {"z", to_json(t.z.value())}, {"x", to_json(t.x)}});
  return {{"dim", g.dim}, {"terms", terms}};
}

inline VecMolecule vec_molecule_from_json(const json& j, const std::string& ctx = "VecMolecule") {
  detail::require_keys(j, ctx, {"dim", "terms"});
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1) detail::fail(ctx + ".dim", "expected a positive integer");
  VecMolecule g(j["dim"].get<int>());
  if (!j["terms"].is_array()) detail::fail(ctx + ".terms", "expected an array");
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const std::string c = ctx + ".terms[" + std::to_string(i) + "]";
    const json& t = j["terms"][i];
    detail::require_keys(t, c, {"lambda", "z", "x"});
    const CVector x = vector_from_json(t["x"], c + ".x");
    if (x.size() != g.dim) detail::fail(c + ".x", "length differs from dim");
    g.add(complex_from_json(t["lambda"], c + ".lambda"), point_from_json(t["z"], c + ".z"), x);
  }
  return g;
}

// ---- report fragments -----------------------------------------------------

inline json to_json(const GridSpec& g) {
  return {{"n_r", g.n_r},
          {"n_theta", g.n_theta},
          {"r_cert", g.r_cert},
          {"mode", g.mode == DerivativeBound::SecondOrder ? "second-order" : "lipschitz"},
          {"rel_tol", g.rel_tol},
          {"max_evaluations", g.max_evaluations}};
}

inline json to_json(const SeminormBracket& b) {
  return {{"lower", b.lower},
          {"certified_upper", b.certified_upper},
          {"argmax", to_json(b.argmax)},
          {"grid_lower", b.grid_lower},
          {"grid_argmax", to_json(b.grid_argmax)},
          {"tail_bound", b.tail_bound},
          {"evaluations", b.evaluations},
          {"budget_hit", b.budget_hit}};
}

inline json to_json(const MoleculeNormBracket& b) {
  json coeffs = json::array();
  for (const cplx& a : b.coefficients) coeffs.push_back(to_json(a));
  return {{"lower", b.lower},
          {"upper", b.upper},
          {"program_value", b.program_value},
          {"duality_gap", b.duality_gap},
          {"degree", b.degree},
          {"mesh", {{"n_r", b.n_r}, {"n_theta", b.n_theta}, {"r_cert", b.r_cert}}},
          {"constraint_count", b.constraint_count},
          {"newton_steps", b.newton_steps},
          {"coefficients", coeffs}};
}

inline json to_json(const ViolationWitness& v) {
  return {{"g", to_json(v.g)}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"margin", v.margin()}};
}

inline json to_json(const ContractionWitness& w) {
  return {{"matrix", w.a.size() ? to_json(w.a) : json::array()},
          {"rows", w.a.rows()},
          {"cols", w.a.cols()},
          {"opnorm", w.opnorm},
          {"residual", w.residual},
          {"accepted", w.accepted}};
}

inline json to_json(const DominationVerdict& v) {
  json witness = json::object();
  if (v.contraction) witness["contraction"] = to_json(*v.contraction);
  if (v.lagrange) witness["lagrange"] = to_json(*v.lagrange);
  if (v.sampled) witness["sampled"] = to_json(*v.sampled);
  const json dom = v.dominates == Tristate::Unknown ? json("unknown") : json(v.dominates == Tristate::True);
  return {{"dominates", dom},
          {"route", v.route},
          {"mass_predicate", v.mass},
          {"agree", v.agree},
          {"witness", witness}};
}

inline json to_json(const PietschCertificate& c) {
  json samples = json::array();
  for (std::size_t s = 0; s < c.samples.size(); ++s) {
    const double w = c.weights.weights.empty() ? 0.0 : c.weights.weights[s];
    if (w <= 0.0) continue;
    samples.push_back({{"index", s}, {"kind", to_string(c.samples[s].kind)}, {"weight", w}, {"k", to_json(c.samples[s].k)}});
  }
  return {{"c", c.c}, {"sample_count", c.samples.size()}, {"support", samples}, {"test_grid", to_json(c.test_grid)}};
}

inline json to_json(const FactorizationWitness& w) {
  json idx = json::array();
  for (auto i : w.sample_index) idx.push_back(i);
  return {{"route", w.route},
          {"sample_index", idx},
          {"weights", w.weights},
          {"g", to_json(w.g)},
          {"T", to_json(w.t)},
          {"opnorm_T", w.opnorm_t},
          {"rho_g_upper", w.rho_g_upper},
          {"bound", w.bound()},
          {"residual", w.residual},
          {"fit_grid", to_json(w.fit_grid)}};
}

inline json check(const std::string& name, double margin, bool pass) {
  return {{"name", name}, {"margin", margin}, {"pass", pass}};
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

}  // namespace blochfact::io
