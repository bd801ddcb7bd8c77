// shearlab command-line front end. Each subcommand validates its inputs,
// runs one experiment, and writes a CSV table plus a run manifest.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shearlab/eisenstein.hpp"
#include "shearlab/modular.hpp"
#include "shearlab/orbit.hpp"
#include "shearlab/parallel.hpp"
#include "shearlab/selftest.hpp"
#include "shearlab/shear.hpp"

namespace {

using json = nlohmann::json;
using namespace shearlab;

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kFailure = 1, kValidation = 2, kBudget = 3 };

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BudgetExhausted {};

// ---------------------------------------------------------------- CSV output

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::logic_error("csv row width mismatch");
    rows_.push_back(std::move(row));
  }
  // RFC 4180: comma separated, CRLF line breaks, quoted where needed.
  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
      out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------- options

struct Common {
  std::string group = "psl2z";
  std::string out;
  std::string manifest;
  std::string config;
  unsigned threads = 0;
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

struct Options {
  Common common;
  std::vector<double> T;
  std::vector<std::int64_t> x0{0, 1, 0};
  std::string norm = "sup";
  std::int64_t q = 0;
  std::size_t max_nodes = 50'000'000;
  std::size_t max_depth = 1u << 20;
  std::string input;
  std::string model = "all";
  std::string psi = "bump:default";
  bool strip = true;
  bool regression = false;
  std::vector<std::string> points;
  std::vector<double> s{2.0};
  std::string route = "auto";
  double cutoff = 0.0;
  std::size_t coefficients = 100000;
};

GroupSpec resolve_group(const std::string& g) {
  if (g == "psl2z" || g == "thin4") return builtin_spec(g);
  if (g.size() > 5 && g.substr(g.size() - 5) == ".json") {
    if (!std::filesystem::exists(g)) throw ValidationError("group spec file not found: " + g);
    return load_group_spec_file(g);
  }
  throw ValidationError("unknown group '" + g + "' (expected psl2z, thin4, or a .json spec path)");
}

void require_T(const std::vector<double>& T) {
  if (T.empty()) throw ValidationError("--T: at least one value required");
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!(T[i] > 0.0) || !std::isfinite(T[i])) throw ValidationError("--T: values must be positive");
    if (i && !(T[i] > T[i - 1])) throw ValidationError("--T: values must be strictly increasing");
  }
}

int require_hecke(const GroupSpec& spec) {
  auto w = spec.hecke_width();
  if (!w) throw ValidationError("this subcommand needs a group generated by (1 w; 0 1) and S");
  return *w;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(what + ": cannot parse '" + s + "' as a number");
  }
}

TestFunction resolve_psi(const std::string& text, const GroupSpec& spec) {
  if (text == "psi_f") {
    if (require_hecke(spec) != 1) throw ValidationError("--psi psi_f is defined on psl2z only");
    return make_form_test_function(delta_qexp(2000));
  }
  if (text.rfind("bump:", 0) != 0) throw ValidationError("--psi must be bump:default, bump:key=value,..., or psi_f");
  require_hecke(spec);
  BumpParams p;
  std::string rest = text.substr(5);
  if (rest != "default") {
    std::stringstream ss(rest);
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ValidationError("--psi: expected key=value, got '" + kv + "'");
      std::string k = kv.substr(0, eq);
      double v = parse_double(kv.substr(eq + 1), "--psi " + k);
      if (k == "x") p.x_center = v;
      else if (k == "y") p.y_center = v;
      else if (k == "rx") p.x_radius = v;
      else if (k == "ry") p.log_y_radius = v;
      else if (k == "amp") p.amplitude = v;
      else if (k == "ang") p.angular = v;
      else throw ValidationError("--psi: unknown key '" + k + "' (x, y, rx, ry, amp, ang)");
    }
  }
  TestFunction psi;
  try {
    psi = make_bump(spec, p);
    register_test_function(spec, psi);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return psi;
}

std::vector<UTBPoint> resolve_points(const std::vector<std::string>& pts) {
  if (pts.empty()) throw ValidationError("--z: at least one point x:y required");
  std::vector<UTBPoint> out;
  for (const auto& p : pts) {
    auto c = p.find(':');
    if (c == std::string::npos) throw ValidationError("--z: expected x:y, got '" + p + "'");
    double x = parse_double(p.substr(0, c), "--z"), y = parse_double(p.substr(c + 1), "--z");
    if (!(y > 0.0)) throw ValidationError("--z: y must be positive");
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
      else if (c == '"') quoted = false;
      else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur), cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// ---------------------------------------------------------------- subcommands

struct RunOutput {
  Table table{{}};
  json extra = json::object();
  bool partial = false;
};

CountResult run_count_query(const Options& o, std::optional<std::int64_t> q) {
  require_T(o.T);
  GroupSpec spec = resolve_group(o.common.group);
  if (o.x0.size() != 3) throw ValidationError("--x0: expected three integers p,q,r");
  if (o.x0[0] == 0 && o.x0[1] == 0 && o.x0[2] == 0) throw ValidationError("--x0 must be nonzero");
  if (o.norm != "sup" && o.norm != "euclidean") throw ValidationError("--norm must be sup or euclidean");
  OrbitQuery query;
  query.spec = spec;
  query.x0 = {o.x0[0], o.x0[1], o.x0[2]};
  query.norm = o.norm == "sup" ? NormKind::Sup : NormKind::Euclidean;
  query.T_list = o.T;
  query.q = q;
  query.budget.max_nodes = o.max_nodes;
  query.budget.max_depth = o.max_depth;
  return count_orbit(query);
}

RunOutput cmd_count(const Options& o) {
  auto r = run_count_query(o, std::nullopt);
  RunOutput out;
  out.table = Table({"T [norm radius]", "count [orbit points x0.g with norm(x0.g) < T]", "saturated [0/1]"});
  for (std::size_t i = 0; i < r.T.size(); ++i)
    out.table.add({num(r.T[i]), std::to_string(r.counts[i]), r.saturated[i] ? "1" : "0"});
  out.extra = {{"elements_visited", r.elements_visited}, {"x0_norm", r.x0_norm}, {"search_seconds", r.wall_seconds}};
  out.partial = r.budget_exceeded;
  return out;
}

RunOutput cmd_coset_count(const Options& o) {
  if (o.q < 2) throw ValidationError("--q: modulus >= 2 required");
  auto r = run_count_query(o, o.q);
  RunOutput out;
  std::vector<std::string> header = {"T [norm radius]", "count [orbit points with norm < T]", "saturated [0/1]"};
  for (const auto& [label, c] : r.per_coset) header.push_back("count in coset " + label.to_string());
  out.table = Table(header);
  for (std::size_t i = 0; i < r.T.size(); ++i) {
    std::vector<std::string> row = {num(r.T[i]), std::to_string(r.counts[i]), r.saturated[i] ? "1" : "0"};
    for (const auto& [label, c] : r.per_coset) row.push_back(std::to_string(c[i]));
    out.table.add(row);
  }
  out.extra = {{"congruence_index", r.congruence_index}, {"elements_visited", r.elements_visited}};
  try {
    out.extra["coset_disparity"] = coset_disparity(r);
  } catch (const std::exception&) {
    out.extra["coset_disparity"] = nullptr;
  }
  out.partial = r.budget_exceeded;
  return out;
}

RunOutput cmd_fit(const Options& o) {
  if (o.input.empty()) throw ValidationError("fit: --in counts.csv required");
  std::ifstream in(o.input);
  if (!in) throw ValidationError("fit: cannot read " + o.input);
  std::vector<CountingModel> models;
  if (o.model == "all") {
    models = {CountingModel::TLogTPlusT, CountingModel::LinearPlusPower, CountingModel::PurePower,
              CountingModel::Linear, CountingModel::TLogT};
  } else {
    try {
      models = {counting_model_from_string(o.model)};
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("fit: empty input");
  std::vector<double> T, y;
  std::size_t skipped = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() < 3) throw ValidationError("fit: expected columns T, count, saturated");
    if (f[2] != "1") {
      ++skipped;
      continue;
    }
    T.push_back(parse_double(f[0], "fit T"));
    y.push_back(parse_double(f[1], "fit count"));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < y.size(); ++i) monotone = monotone && y[i] >= y[i - 1] && T[i] > T[i - 1];
  if (!monotone) throw ValidationError("fit: counts must be nondecreasing in increasing T");
  RunOutput out;
  out.table = Table({"model", "points [saturated rows]", "C1", "C2", "delta [growth exponent]",
                     "residual [relative least squares]", "top_octave_residual [max relative error]", "status"});
  for (auto m : models) {
    try {
      auto fit = fit_counting_law(T, y, m);
      out.table.add({to_string(m), std::to_string(T.size()), num(fit.C1), num(fit.C2),
                     fit.delta ? num(*fit.delta) : "", num(fit.residual), num(fit.top_octave_relative_residual()),
                     "ok"});
    } catch (const InsufficientDataError& e) {
      out.table.add({to_string(m), std::to_string(T.size()), "", "", "", "", "", "insufficient data"});
    }
  }
  out.extra = {{"rows_used", T.size()}, {"rows_unsaturated", skipped}, {"counts_monotone", monotone}};
  return out;
}

RunOutput cmd_shear(const Options& o) {
  require_T(o.T);
  GroupSpec spec = resolve_group(o.common.group);
  TestFunction psi = resolve_psi(o.psi, spec);
  if (o.regression && std::log10(o.T.back() / o.T.front()) < 1.5)
    throw ValidationError("--regression: T must span at least 1.5 decades");
  RunOutput out;
  out.table = Table({"T [shear parameter]", "mu_T [shear average of psi]", "mu_T_strip [strip average of psi]",
                     "residual [mu_T - mu_T_strip]", "mu_T_error [quadrature estimate]"});
  std::vector<double> vals;
  bool converged = true;
  for (double T : o.T) {
    auto a = mu_T(psi, T, o.common.tol);
    vals.push_back(a.value);
    converged = converged && a.converged;
    std::string strip = "", resid = "";
    if (o.strip) {
      auto b = mu_T_strip(psi, T, std::max(o.common.tol, 1e-7));
      converged = converged && b.converged;
      strip = num(b.value), resid = num(a.value - b.value);
    }
    out.table.add({num(T), num(a.value), strip, resid, num(a.error)});
  }
  out.extra["psi_peak"] = psi.peak;
  if (spec.lattice && psi.k_invariant) out.extra["haar_mean"] = haar_mean(psi);
  if (o.regression) {
    auto r = fit_equidistribution(o.T, vals);
    out.extra["regression"] = {{"slope", r.slope}, {"intercept", r.intercept}, {"decay_exponent", r.decay_exponent}};
  }
  out.partial = !converged;
  return out;
}

RunOutput cmd_eisenstein(const Options& o) {
  GroupSpec spec = resolve_group(o.common.group);
  require_hecke(spec);
  auto pts = resolve_points(o.points);
  if (o.s.empty()) throw ValidationError("--s: at least one value required");
  EisensteinRoute route;
  try {
    route = eisenstein_route_from_string(o.route);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  EisensteinOptions eo;
  eo.max_coset_height = o.cutoff;
  std::unique_ptr<EisensteinEvaluator> e;
  try {
    e = std::make_unique<EisensteinEvaluator>(spec, route, eo);
  } catch (const std::exception& ex) {
    throw ValidationError(ex.what());
  }
  RunOutput out;
  out.table = Table({"x [Re z]", "y [Im z]", "s [spectral parameter]", "value [E(z,s)]", "route", "est_error"});
  for (const auto& z : pts)
    for (double s : o.s) {
      EisensteinValue v;
      try {
        v = e->evaluate(z, s);
      } catch (const NonConvergentError& ex) {
        throw ValidationError(ex.what());
      }
      out.table.add({num(z.x), num(z.y), num(s), num(v.value), to_string(v.route), num(v.error)});
    }
  if (!spec.lattice) out.extra["delta_hat"] = e->delta_hat();
  return out;
}

QExpansion delta_for(const Options& o) {
  if (o.common.group != "psl2z") throw ValidationError("this subcommand uses the discriminant form on psl2z");
  if (o.coefficients < 4000) throw ValidationError("--N: at least 4000 coefficients required");
  return delta_qexp(o.coefficients);
}

RunOutput cmd_moment(const Options& o) {
  require_T(o.T);
  QExpansion f = delta_for(o);
  auto c = moment_constants(f);
  RunOutput out;
  out.table = Table({"T [shear parameter]", "lhs [int |f(Ty+iy)|^2 y^k dy/y]", "predicted [main term]",
                     "residual [lhs - predicted]", "relative_residual"});
  for (double T : o.T) {
    auto s = second_moment_lhs(f, T, std::max(o.common.tol, 1e-10));
    double p = second_moment_prediction(c, T);
    out.table.add({num(T), num(s.value), num(p), num(s.value - p), num((s.value - p) / p)});
  }
  out.extra = {{"norm_sq", c.norm_sq},
               {"haar_mean", c.haar_mean},
               {"sym2_log_derivative", c.sym2_log_derivative},
               {"constant", c.constant}};
  return out;
}

RunOutput cmd_kronecker(const Options& o) {
  QExpansion f = delta_for(o);
  auto k = kronecker_check(f);
  RunOutput out;
  out.table = Table({"lhs [<log(4y|eta|^4), psi_f> / norm]", "rhs [gamma - log-derivative of completed L]",
                     "gap [|lhs - rhs|]", "via_eisenstein [lhs from the regularized Eisenstein pairing]"});
  out.table.add({num(k.lhs), num(k.rhs), num(k.gap), num(k.via_regularized_eisenstein)});
  return out;
}

RunOutput cmd_selftest(const Options& o, bool& all_passed) {
  auto results = run_selftest(o.common.seed);
  RunOutput out;
  out.table = Table({"suite", "property", "samples", "worst [largest violation]", "tolerance", "passed [0/1]"});
  all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed();
    out.table.add({r.suite, r.property, std::to_string(r.samples), num(r.worst), num(r.tolerance),
                   r.passed() ? "1" : "0"});
  }
  return out;
}

// ---------------------------------------------------------------- config and driver

// Option names present on the command line (long form only).
std::set<std::string> given_options(const std::vector<std::string>& args) {
  std::set<std::string> out;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) out.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  return out;
}

// Appends config-file entries that the command line does not override.
std::vector<std::string> merge_config(std::vector<std::string> args, const std::string& path,
                                      const std::set<std::string>& subcommands) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config: cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("--config: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("--config: expected a JSON object");
  bool has_sub = false;
  for (const auto& a : args) has_sub = has_sub || subcommands.count(a);
  if (j.contains("subcommand")) {
    if (!j["subcommand"].is_string()) throw ValidationError("--config: subcommand must be a string");
    if (!has_sub) args.insert(args.begin(), j["subcommand"].get<std::string>());
  }
  auto given = given_options(args);
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand" || given.count(key)) continue;
    auto scalar = [&](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) return num(v.get<double>());
      throw ValidationError("--config: unsupported value for '" + key + "'");
    };
    if (value.is_boolean()) {
      args.push_back("--" + key + "=" + (value.get<bool>() ? "true" : "false"));
    } else if (value.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < value.size(); ++i) joined += (i ? "," : "") + scalar(value[i]);
      args.push_back("--" + key);
      args.push_back(joined);
    } else {
      args.push_back("--" + key);
      args.push_back(scalar(value));
    }
  }
  return args;
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--group", o.common.group, "psl2z, thin4, or a group spec .json path");
  sub->add_option("--out", o.common.out, "CSV output path (default: stdout)");
  sub->add_option("--manifest", o.common.manifest, "manifest path (default: <out>.manifest.json)");
  sub->add_option("--threads", o.common.threads, "worker cap (fallback: SHEARLAB_THREADS)");
  sub->add_option("--seed", o.common.seed, "seed for randomized sampling");
  sub->add_option("--tol", o.common.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
}

void add_counting(CLI::App* sub, Options& o) {
  sub->add_option("--T", o.T, "norm radii, comma separated")->delimiter(',')->required();
  sub->add_option("--x0", o.x0, "base form p,q,r")->delimiter(',');
  sub->add_option("--norm", o.norm, "sup or euclidean");
  sub->add_option("--max-nodes", o.max_nodes, "word search node budget");
  sub->add_option("--max-depth", o.max_depth, "word search depth budget");
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"shearlab: orbit counting, shear averages, Eisenstein series and modular-form checks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option values (command line wins)");

  auto* count = app.add_subcommand("count", "count orbit points of x0 below each T");
  add_common(count, o), add_counting(count, o);
  auto* coset = app.add_subcommand("coset-count", "orbit counts split by congruence coset");
  add_common(coset, o), add_counting(coset, o);
  coset->add_option("--q", o.q, "modulus")->required();
  auto* fit = app.add_subcommand("fit", "fit counting laws to a count CSV");
  add_common(fit, o);
  fit->add_option("--in", o.input, "CSV from the count subcommand")->required();
  fit->add_option("--model", o.model, "all, TlogT+T, T+T^delta, T^delta, T, TlogT");
  auto* shear = app.add_subcommand("shear", "shear averages mu_T and strip averages");
  add_common(shear, o);
  shear->add_option("--T", o.T, "shear parameters")->delimiter(',')->required();
  shear->add_option("--psi", o.psi, "bump:default, bump:x=..,y=..,rx=..,ry=..,amp=..,ang=.., or psi_f");
  shear->add_flag("--strip,!--no-strip", o.strip, "also compute strip averages");
  shear->add_flag("--regression", o.regression, "fit a log T + b and report it in the manifest");
  auto* eis = app.add_subcommand("eisenstein", "evaluate E(z,s)");
  add_common(eis, o);
  eis->add_option("--z", o.points, "points x:y, comma separated")->delimiter(',')->required();
  eis->add_option("--s", o.s, "spectral parameters")->delimiter(',');
  eis->add_option("--route", o.route, "auto, fourier, coset");
  eis->add_option("--cutoff", o.cutoff, "coset height (0: default)");
  auto* moment = app.add_subcommand("moment", "second moment of the discriminant form along shears");
  add_common(moment, o);
  moment->add_option("--T", o.T, "shear parameters")->delimiter(',')->required();
  moment->add_option("--N", o.coefficients, "q-expansion length");
  auto* kron = app.add_subcommand("kronecker", "limit-formula identity for the discriminant form");
  add_common(kron, o);
  kron->add_option("--N", o.coefficients, "q-expansion length");
  auto* self = app.add_subcommand("selftest", "randomized invariant suites");
  add_common(self, o);

  std::set<std::string> names;
  for (auto* s : app.get_subcommands({})) names.insert(s->get_name());

  std::vector<std::string> args(argv + 1, argv + argc);
  json config_echo = json::object();
  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") config_path = args[i + 1];
    for (const auto& a : args)
      if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
    if (!config_path.empty()) {
      std::vector<std::string> stripped;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") ++i;
        else if (args[i].rfind("--config=", 0) != 0) stripped.push_back(args[i]);
      }
      args = merge_config(stripped, config_path, names);
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  for (auto* opt : chosen->get_options()) {
    if (opt->get_lnames().empty() || opt->count() == 0) continue;
    auto r = opt->results();
    config_echo[opt->get_lnames().front()] = r.size() == 1 ? json(r.front()) : json(r);
  }
  if (o.common.threads > 0) set_thread_count(o.common.threads);

  RunOutput result;
  int code = kOk;
  bool selftest_ok = true;
  try {
    if (!o.common.out.empty()) {
      auto parent = std::filesystem::path(o.common.out).parent_path();
      if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw ValidationError("--out: directory does not exist: " + parent.string());
    }
    if (name == "count") result = cmd_count(o);
    else if (name == "coset-count") result = cmd_coset_count(o);
    else if (name == "fit") result = cmd_fit(o);
    else if (name == "shear") result = cmd_shear(o);
    else if (name == "eisenstein") result = cmd_eisenstein(o);
    else if (name == "moment") result = cmd_moment(o);
    else if (name == "kronecker") result = cmd_kronecker(o);
    else result = cmd_selftest(o, selftest_ok);
    if (result.partial) code = kBudget;
    if (!selftest_ok) code = kFailure;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InsufficientConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }

  const std::string csv = result.table.str();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"tool", "shearlab"},
                   {"version", kVersion},
                   {"subcommand", name},
                   {"config", config_echo},
                   {"config_file", config_path.empty() ? json(nullptr) : json(config_path)},
                   {"versions",
                    {{"shearlab", kVersion},
                     {"compiler", __VERSION__},
                     {"cplusplus", __cplusplus},
                     {"cli11", CLI11_VERSION},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
                   {"threads", thread_count()},
                   {"seed", o.common.seed},
                   {"timestamp", utc_timestamp()},
                   {"wall_seconds", wall},
                   {"exit_code", code},
                   {"partial", result.partial},
                   {"results", result.extra},
                   {"output", o.common.out.empty() ? json("stdout") : json(o.common.out)}};
  try {
    if (o.common.out.empty()) std::cout << csv;
    else write_file(o.common.out, csv);
    std::string mpath = o.common.manifest;
    if (mpath.empty() && !o.common.out.empty()) mpath = o.common.out + ".manifest.json";
    if (!mpath.empty()) write_file(mpath, manifest.dump(2) + "\n");
    else std::cerr << manifest.dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return code;
}
