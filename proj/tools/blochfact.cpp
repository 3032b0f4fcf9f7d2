// blochfact: batch runner emitting JSON (or CSV) reports.
// Exit status: 0 completed, 2 mathematical finding, 1 error.

#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "blochfact/acceptance.hpp"

using namespace blochfact;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kFinding = 2;

struct Options {
  std::uint64_t seed = 0;
  int grid_nr = 0;
  int grid_ntheta = 0;
  int degree = 0;
  int budget = -1;
  std::string out;
  std::string format = "json";

  std::string func, molecule, a, b, t, vec;
  std::vector<double> point;
  std::vector<int> n_values;
  std::vector<int> criteria;
  double c = 0.0;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

GridSpec apply_grid(GridSpec g, const Options& o) {
  if (o.grid_nr) g.n_r = o.grid_nr;
  if (o.grid_ntheta) g.n_theta = o.grid_ntheta;
  g.validate();
  return g;
}

int pick(int flag, int fallback) { return flag > 0 ? flag : fallback; }

/// Report under assembly. Inputs are embedded verbatim so every number recomputes.
struct Report {
  std::string command;
  json inputs = json::object();
  json parameters = json::object();
  json result = json::object();
  json checks = json::array();
  bool finding = false;

  void check(const std::string& name, double margin, bool pass) {
    checks.push_back(io::check(name, margin, pass));
    finding = finding || !pass;
  }

  json finish(std::uint64_t seed, const std::string& status) const {
    json j;
    j["command"] = command;
    j["version"] = BLOCHFACT_VERSION;
    j["seed"] = seed;
    j["inputs_digest"] = io::hex64(io::fnv1a(inputs.dump() + parameters.dump()));
    j["inputs"] = inputs;
    j["parameters"] = parameters;
    j["status"] = status;
    j["result"] = result;
    j["checks"] = checks;
    j["finding"] = finding;
    j["timestamp"] = utc_timestamp();
    return j;
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string to_csv(const json& report) {
  std::ostringstream os;
  os << "key,value\n";
  const json flat = report.flatten();
  for (const auto& [k, v] : flat.items())
    os << csv_field(k) << ',' << csv_field(v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  return os.str();
}

void emit(const json& report, const Options& o) {
  const std::string text = o.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) throw InvalidInput("cannot write " + o.out);
    f << text;
  }
}

// ---------------------------------------------------------------------------

void cmd_norm(const Options& o, Report& r) {
  const json fj = read_json(o.func);
  const BlochFunc f = io::blochfunc_from_json(fj);
  const GridSpec grid = apply_grid({}, o);
  r.inputs["func"] = fj;
  r.parameters["grid"] = io::to_json(grid);
  const auto b = bloch_seminorm(f, grid);
  r.result["bracket"] = io::to_json(b);
  r.check("bracket-ordered", b.certified_upper - b.lower, b.lower <= b.certified_upper);
}

void cmd_molecule_norm(const Options& o, Report& r) {
  const json mj = read_json(o.molecule);
  const Molecule m = io::molecule_from_json(mj);
  const GridSpec grid = apply_grid(molecule_grid(), o);
  const int degree = pick(o.degree, 32), newton = pick(o.budget, 600);
  r.inputs["molecule"] = mj;
  r.parameters = {{"grid", io::to_json(grid)}, {"degree", degree}, {"newton_budget", newton}};
  const double tri = molecule_norm_ub_triangle(m);
  r.result["triangle_upper"] = tri;
  try {
    const auto b = molecule_norm_opt(m, degree, grid, 1e-4, newton);
    r.result["bracket"] = io::to_json(b);
    r.check("bracket-ordered", b.upper - b.lower, b.lower <= b.upper * (1 + 1e-9));
    r.check("lower-below-triangle", tri - b.lower, b.lower <= tri * (1 + 1e-9));
  } catch (const BudgetExceeded& e) {
    r.result["partial_program_value"] = e.best;
    throw;
  }
}

void cmd_dominate(const Options& o, Report& r) {
  const json aj = read_json(o.a), bj = read_json(o.b);
  const WeightedSeq a = io::weighted_seq_from_json(aj), b = io::weighted_seq_from_json(bj);
  const int n = pick(o.budget, 10000), d = pick(o.degree, 8);
  r.inputs = {{"a", aj}, {"b", bj}};
  r.parameters = {{"samples", n}, {"degree", d}};
  const auto v = decide_domination(a, b, n, d, o.seed);
  r.result = io::to_json(v);
  r.check("three-way-agreement", v.agree ? 0.0 : -1.0, v.agree);
}

void cmd_gamma2(const Options& o, Report& r) {
  const json fj = read_json(o.func);
  const BlochFunc f = io::blochfunc_from_json(fj);
  PietschOptions popt;
  popt.seed = o.seed;
  popt.degree = pick(o.degree, popt.degree);
  popt.test_grid = apply_grid(popt.test_grid, o);
  const int kb = pick(o.budget, 200);
  r.inputs["func"] = fj;
  r.parameters = {{"test_grid", io::to_json(popt.test_grid)}, {"degree", popt.degree}, {"kwapien_budget", kb},
                  {"max_samples", popt.max_samples}, {"random_samples", popt.random_samples}};

  const double rho = bloch_seminorm(f).lower;
  const double kw = kwapien_lb(f, kb, o.seed);
  const auto p = pietsch_ub(f, popt);
  const auto w = build_factorization(f, p.cert);
  const double viol = certificate_violation(f, p.cert);

  GammaBracket g;
  g.lower = std::max(rho, kw);
  g.lower_source = kw >= rho ? "kwapien" : "seminorm";
  g.upper = p.c;
  g.upper_source = "pietsch";
  if (w.residual <= kReconstructionTol && w.bound() < g.upper) {
    g.upper = w.bound();
    g.upper_source = "factorization";
  }
  r.result = {{"gamma2_lower", g.lower},       {"gamma2_upper", g.upper},     {"lower_source", g.lower_source},
              {"upper_source", g.upper_source}, {"rho_lower", rho},             {"kwapien_lb", kw},
              {"pietsch_ub", p.c},              {"certificate", io::to_json(p.cert)}, {"witness", io::to_json(w)}};
  r.check("seminorm-below-kwapien", kw - (rho - 1e-9), rho - 1e-9 <= kw);
  r.check("kwapien-below-pietsch", p.c - kw, kw <= p.c);
  r.check("factorization-above-kwapien", w.bound() - (kw - 1e-6), w.bound() >= kw - 1e-6);
  r.check("certificate-reverifies", 1e-8 - viol, viol <= 1e-8);
  r.check("factorization-residual", kReconstructionTol - w.residual, w.residual <= kReconstructionTol);
}

void cmd_unitary(const Options& o, Report& r) {
  const json fj = read_json(o.func);
  const BlochFunc f = io::blochfunc_from_json(fj);
  PietschOptions popt;
  popt.seed = o.seed;
  const double c = o.c > 0.0 ? o.c : pietsch_ub(f, popt).c;
  const int trials = pick(o.budget, 200);
  const std::vector<int> ns = o.n_values.empty() ? std::vector<int>{1, 2, 4, 8, 16} : o.n_values;
  r.inputs["func"] = fj;
  r.parameters = {{"c", c}, {"c_source", o.c > 0.0 ? "given" : "pietsch"}, {"n", ns}, {"trials", trials}};
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto rep = unitary_criterion_check(f, c, ns[i], trials, split_seed(o.seed, 0xC01, i));
    rows.push_back({{"n", rep.n}, {"trials", rep.trials}, {"max_ratio", rep.max_ratio}, {"worst_trial", rep.worst_trial}});
    worst = std::max(worst, rep.max_ratio);
  }
  r.result = {{"max_ratio", worst}, {"per_n", rows}};
  r.check("unitary-ratio", 1.0 + 1e-6 - worst, worst <= 1.0 + 1e-6);
}

void cmd_ideal(const Options& o, Report& r) {
  const json fj = read_json(o.func), tj = read_json(o.t);
  const BlochFunc f = io::blochfunc_from_json(fj);
  const CMatrix t = io::matrix_from_json(tj, "t");
  if (!o.point.empty() && o.point.size() != 2) throw InvalidInput("--point takes two numbers");
  const DiscPoint a(o.point.empty() ? cplx(0.0) : cplx(o.point[0], o.point[1]));
  PietschOptions popt;
  popt.seed = o.seed;
  const int kb = pick(o.budget, 200);
  r.inputs = {{"func", fj}, {"t", tj}, {"point", io::to_json(a.value())}};
  r.parameters = {{"kwapien_budget", kb}};
  const auto rep = ideal_inequality_check(t, f, a, o.seed, popt, kb);
  r.result = {{"rho_f_upper", rep.rho_f_upper},   {"rho_fh_lower", rep.rho_fh_lower}, {"kwapien_tfh", rep.kwapien_tfh},
              {"opnorm_t", rep.opnorm_t},         {"pietsch_f", rep.pietsch_f}};
  r.check("composition-contraction", rep.contraction_margin, rep.contraction_margin >= 0.0);
  r.check("ideal-inequality", rep.ideal_margin, rep.ideal_margin >= 0.0);
}

void cmd_w2(const Options& o, Report& r) {
  const json gj = read_json(o.vec);
  const VecMolecule g = io::vec_molecule_from_json(gj);
  const int budget = pick(o.budget, 64);
  r.inputs["vec"] = gj;
  r.parameters = {{"budget", budget}};
  const auto ub = w2_ub(g, budget, o.seed);
  const double lb = w2_lb(g);
  r.result = {{"w2_lower", lb}, {"w2_upper", ub.value}, {"representation", ub.representation},
              {"candidates", ub.candidates}};
  r.check("sandwich", ub.value - lb, lb <= ub.value + 1e-9);
}

void cmd_duality_gap(const Options& o, Report& r) {
  const json fj = read_json(o.func), gj = read_json(o.vec);
  const BlochFunc f = io::blochfunc_from_json(fj);
  const VecMolecule g = io::vec_molecule_from_json(gj);
  PietschOptions popt;
  popt.seed = o.seed;
  const int budget = pick(o.budget, 64);
  r.inputs = {{"func", fj}, {"vec", gj}};
  r.parameters = {{"budget", budget}};
  const cplx pair = vec_pairing(f, g);
  const double c = pietsch_ub(f, popt).c;
  const auto ub = w2_ub(g, budget, o.seed);
  const double lb = w2_lb(g);
  const double bound = c * ub.value;
  r.result = {{"pairing", io::to_json(pair)}, {"abs_pairing", std::abs(pair)}, {"gamma2_upper", c},
              {"w2_lower", lb},               {"w2_upper", ub.value},          {"bound", bound},
              {"gap", bound - std::abs(pair)}};
  r.check("pairing-bound", bound * (1 + 1e-9) - std::abs(pair), std::abs(pair) <= bound * (1 + 1e-9));
  r.check("w2-sandwich", ub.value - lb, lb <= ub.value + 1e-9);
}

void cmd_suite(const Options& o, Report& r) {
  std::set<int> ids(o.criteria.begin(), o.criteria.end());
  if (ids.empty()) ids = acceptance::all_criteria();
  r.parameters = {{"criteria", std::vector<int>(ids.begin(), ids.end())}};
  const auto results = acceptance::run_suite(o.seed, ids, [](const acceptance::CriterionResult& c) {
    std::cerr << acceptance::line(c) << '\n';
  });
  json rows = json::array();
  int passed = 0;
  for (const auto& c : results) {
    // timings stay out of the report so reruns are byte-identical
    rows.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"summary", c.summary},
                    {"digest", acceptance::metrics_digest(c)}, {"metrics", c.metrics}});
    passed += c.pass;
    r.check("criterion-" + std::to_string(c.id), c.pass ? 0.0 : -1.0, c.pass);
  }
  r.result = {{"passed", passed}, {"total", results.size()}, {"criteria", rows}};
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
  sub->add_option("--grid-nr", o.grid_nr, "radial grid resolution override")->check(CLI::Range(8, 4096));
  sub->add_option("--grid-ntheta", o.grid_ntheta, "angular grid resolution override")->check(CLI::Range(8, 4096));
  sub->add_option("--degree", o.degree, "polynomial degree")->check(CLI::Range(1, 64));
  sub->add_option("--budget", o.budget, "sample / trial / iteration budget")->check(CLI::Range(0, 100000));
  sub->add_option("--out", o.out, "report path (stdout if omitted)");
  sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--config", "JSON file whose keys supply option values");
}

/// Expands `--config file.json` into command-line tokens. Keys must name options
/// of the subcommand; explicit command-line values win.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args, bool& empty_config) {
  empty_config = false;
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw InvalidInput("--config needs a path");
  const std::string path = *(it + 1);
  args.erase(it, it + 2);
  if (args.empty()) throw InvalidInput("--config must follow a subcommand");
  CLI::App* sub = app.get_subcommand_no_throw(args.front());
  if (!sub) throw InvalidInput("unknown subcommand " + args.front());

  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    empty_config = true;
    return args;
  }
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  if (!cfg.is_object()) throw InvalidInput(path + ": config must be a JSON object");
  if (cfg.empty()) {
    empty_config = true;
    return args;
  }
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || !sub->get_option_no_throw(flag)) throw InvalidInput(path + ": unknown key '" + key + "'");
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    auto token = [&](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array()) {
      if (value.empty()) continue;
      args.push_back(flag);
      for (const auto& v : value) args.push_back(token(v));
    } else {
      args.push_back(flag);
      args.push_back(token(value));
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"blochfact: Bloch seminorms, molecules, domination and factorization norms"};
  app.require_subcommand(0, 1);

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const Options&, Report&);
  };
  const Command commands[] = {
      {"norm", "certified Bloch seminorm bracket of a mapping", cmd_norm},
      {"molecule-norm", "norm bracket of a scalar molecule", cmd_molecule_norm},
      {"dominate", "domination decision with witness", cmd_dominate},
      {"gamma2", "factorization norm bracket with certificate and witness", cmd_gamma2},
      {"unitary-check", "unitary criterion ratios", cmd_unitary},
      {"ideal-check", "composition and ideal inequalities", cmd_ideal},
      {"w2", "cross-norm bracket of a vector molecule", cmd_w2},
      {"duality-gap", "pairing against the norm product", cmd_duality_gap},
      {"suite", "acceptance criteria matrix", cmd_suite},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    add_common(s, o);
    subs[c.name] = s;
  }
  for (const char* n : {"norm", "gamma2", "unitary-check", "ideal-check", "duality-gap"})
    subs[n]->add_option("--func", o.func, "mapping JSON")->required();
  subs["molecule-norm"]->add_option("--molecule", o.molecule, "molecule JSON")->required();
  subs["dominate"]->add_option("--a", o.a, "weighted sequence JSON")->required();
  subs["dominate"]->add_option("--b", o.b, "weighted sequence JSON")->required();
  subs["ideal-check"]->add_option("--t", o.t, "operator matrix JSON")->required();
  subs["ideal-check"]->add_option("--point", o.point, "disc point: re im")->expected(2);
  subs["unitary-check"]->add_option("--c", o.c, "constant (default: Pietsch upper bound)");
  subs["unitary-check"]->add_option("--n", o.n_values, "unitary sizes")->check(CLI::Range(1, 16));
  subs["w2"]->add_option("--vec", o.vec, "vector molecule JSON")->required();
  subs["duality-gap"]->add_option("--vec", o.vec, "vector molecule JSON")->required();
  subs["suite"]->add_option("--criteria", o.criteria, "criterion ids (default: all)")->check(CLI::Range(1, 11));

  std::vector<std::string> args(argv + 1, argv + argc);
  bool empty_config = false;
  try {
    args = expand_config(app, args, empty_config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  if (args.empty() || empty_config || (args.size() == 1 && args[0] == "suite")) {
    std::cerr << (args.size() == 1 ? subs[args[0]]->help() : app.help());
    return kError;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (subs[c.name]->parsed()) chosen = &c;
  if (!chosen) {
    std::cerr << app.help();
    return kError;
  }

  Report r;
  r.command = chosen->name;
  try {
    chosen->run(o, r);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    r.result["error"] = e.what();
    r.result["best_partial"] = e.best;
    try {
      emit(r.finish(o.seed, "budget-exceeded"), o);
    } catch (const std::exception&) {
    }
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  try {
    emit(r.finish(o.seed, r.finding ? "finding" : "ok"), o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return r.finding ? kFinding : kOk;
}
