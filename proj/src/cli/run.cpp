#include "dshock/balance.hpp"
#include "dshock/cli.hpp"
#include "dshock/geom_suite.hpp"
#include "dshock/geometry.hpp"
#include "dshock/riemann1d.hpp"
#include "dshock/solution.hpp"
#include "dshock/spherical.hpp"
#include "dshock/sticky.hpp"
#include "dshock/weakcheck.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace dshock::cli {

using json = nlohmann::json;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::schema:
    case Errc::parse:
    case Errc::invalid_input:
    case Errc::invalid_parameter:
    case Errc::invalid_dimension:
    case Errc::dimension_mismatch:
    case Errc::invalid_battery:
      return kExitSchema;
    case Errc::no_delta_shock:
    case Errc::ambiguous_root:
    case Errc::audit_invalid:
      return kExitCheckFailed;
    default:
      return kExitNumeric;
  }
}

json load_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::schema, "cannot read scenario " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& ex) {
    throw Error(Errc::schema, std::string("malformed JSON: ") + ex.what());
  }
}

namespace {

// ------------------------------------------------------------------ schema

class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("must be an object");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw Error(Errc::schema, where_ + ": " + msg); }

  bool has(const std::string& k) const { return j_.contains(k); }

  double number(const std::string& k) {
    if (!has(k)) fail("missing required number '" + k + "'");
    return get_number(k);
  }
  double number(const std::string& k, double def) { return has(k) ? get_number(k) : def; }
  std::optional<double> opt_number(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return get_number(k);
  }

  int integer(const std::string& k, int def) {
    if (!has(k)) return def;
    used_.insert(k);
    const json& v = j_.at(k);
    if (!v.is_number_integer()) fail("'" + k + "' must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    used_.insert(k);
    if (!j_.at(k).is_boolean()) fail("'" + k + "' must be true or false");
    return j_.at(k).get<bool>();
  }

  std::string string(const std::string& k) {
    if (!has(k)) fail("missing required string '" + k + "'");
    return string(k, "");
  }
  std::string string(const std::string& k, const std::string& def) {
    if (!has(k)) return def;
    used_.insert(k);
    if (!j_.at(k).is_string()) fail("'" + k + "' must be a string");
    return j_.at(k).get<std::string>();
  }

  Vec vector(const std::string& k) {
    if (!has(k)) fail("missing required array '" + k + "'");
    used_.insert(k);
    const json& v = j_.at(k);
    if (!v.is_array() || v.empty()) fail("'" + k + "' must be a non-empty array of numbers");
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail("'" + k + "' must contain numbers only");
      out[static_cast<int>(i)] = v[i].get<double>();
      if (!std::isfinite(out[static_cast<int>(i)])) fail("'" + k + "' must be finite");
    }
    return out;
  }

  const json& raw(const std::string& k) {
    if (!has(k)) fail("missing required entry '" + k + "'");
    used_.insert(k);
    return j_.at(k);
  }

  // Rejects keys not consumed so far.
  void done() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) fail("unknown key '" + k + "'");
    }
  }

 private:
  double get_number(const std::string& k) {
    used_.insert(k);
    const json& v = j_.at(k);
    if (!v.is_number()) fail("'" + k + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail("'" + k + "' must be finite");
    return d;
  }

  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

struct Tolerances {
  std::optional<double> cons, mono;
  double weak = 1e-6;
  double weak_order = 4.0;
  double energy_ineq = 1e-6;
  double oracle_speed = 2e-3;
  double oracle_mass = 5e-3;
  double oracle_radial = 1e-2;
};

struct WeakParams {
  bool enabled = false;
  int levels = 5, count = 16, q = 8;
  std::optional<BatteryBox> box;
};

struct InequalityParams {
  bool enabled = false;
  int count = 24, panels = 32;
};

struct Checks {
  bool balance = true;
  WeakParams weak;
  InequalityParams inequality;
};

struct CandidateParams {
  double speed, e0, rate, x0;
};

struct RiemannParams {
  RiemannData1D data;
  double L = 5.0, t_end = 1.0;
  int samples = 21;
  std::optional<CandidateParams> candidate;
};

struct FieldParams {
  RadialField field;
  json source;
};

struct ShellParams {
  int N = 100000;
  double r_lo = 0.0, r_hi = 1.0;
  int samples = 11;
};

struct SphericalParams {
  int n = 3;
  SphericalFrontState init;
  double t_end = 1.0;
  int samples = 21;
  FieldParams inner, outer;
  SphericalOptions opts;
  std::optional<ShellParams> shells;
};

struct PlanarParams {
  Vec nu;
  double rho_minus, rho_plus;
  Vec U_minus, U_plus;
  double e0 = 0.0;
  std::optional<double> u_delta0;
  double L = 5.0, t_end = 1.0;
  int samples = 21;
};

struct OracleParams {
  std::string preset;
  int N = 200000;
  double T = 1.0;
  int samples = 10;
  bool random = false;
  RiemannData1D data;
  double L = 2.0;
  SphericalParams sphere;
};

struct Scenario;

struct WeakcheckParams {
  std::shared_ptr<Scenario> target;
  WeakParams weak;
};

struct FrontQuery {
  json front;
  std::vector<std::pair<Vec, double>> points;
};

struct GeomParams {
  std::vector<FrontQuery> fronts;
};

struct Scenario {
  std::string kind, name;
  json flux_json;
  FluxModel flux = standard_flux(1);
  std::uint64_t seed = 1;
  Tolerances tol;
  Checks checks;
  std::variant<std::monostate, RiemannParams, SphericalParams, PlanarParams, OracleParams, WeakcheckParams, GeomParams> problem;
};

int checked_samples(Reader& r, int def) {
  const int s = r.integer("samples", def);
  if (s < 2) r.fail("'samples' must be at least 2");
  return s;
}

double positive(Reader& r, const std::string& k, double def) {
  const double v = r.number(k, def);
  if (!(v > 0.0)) r.fail("'" + k + "' must be positive");
  return v;
}

std::optional<BatteryBox> parse_box(Reader& parent, const std::string& key, const std::string& where) {
  if (!parent.has(key)) return std::nullopt;
  Reader r(parent.raw(key), where + "." + key);
  BatteryBox b;
  b.lo = r.vector("lo");
  b.hi = r.vector("hi");
  b.t_lo = r.number("t_lo", 0.0);
  b.t_hi = r.number("t_hi");
  r.done();
  if (b.lo.size() != b.hi.size()) r.fail("'lo' and 'hi' differ in dimension");
  if (b.t_lo < 0.0) r.fail("battery box must not reach into t < 0");
  return b;
}

WeakParams parse_weak(const json& j, const std::string& where) {
  WeakParams w;
  if (j.is_boolean()) {
    w.enabled = j.get<bool>();
    return w;
  }
  Reader r(j, where);
  w.enabled = r.boolean("enabled", true);
  w.levels = r.integer("levels", w.levels);
  w.count = r.integer("count", w.count);
  w.q = r.integer("q", w.q);
  w.box = parse_box(r, "box", where);
  r.done();
  if (w.levels < 2 || w.levels > 8) r.fail("'levels' must lie in [2, 8]");
  if (w.count < 1) r.fail("'count' must be at least 1");
  if (w.q < 1) r.fail("'q' must be at least 1");
  return w;
}

Checks parse_checks(Reader& top) {
  Checks c;
  if (!top.has("checks")) return c;
  Reader r(top.raw("checks"), "checks");
  c.balance = r.boolean("balance", true);
  if (r.has("weakcheck")) c.weak = parse_weak(r.raw("weakcheck"), "checks.weakcheck");
  if (r.has("energy_inequality")) {
    const json& j = r.raw("energy_inequality");
    if (j.is_boolean()) {
      c.inequality.enabled = j.get<bool>();
    } else {
      Reader e(j, "checks.energy_inequality");
      c.inequality.enabled = e.boolean("enabled", true);
      c.inequality.count = e.integer("count", c.inequality.count);
      c.inequality.panels = e.integer("panels", c.inequality.panels);
      e.done();
      if (c.inequality.count < 1 || c.inequality.panels < 1) e.fail("'count' and 'panels' must be positive");
    }
  }
  r.done();
  return c;
}

Tolerances parse_tolerances(Reader& top) {
  Tolerances t;
  if (!top.has("tolerances")) return t;
  Reader r(top.raw("tolerances"), "tolerances");
  t.cons = r.opt_number("tol_cons");
  t.mono = r.opt_number("tol_mono");
  t.weak = r.number("tol_weak", t.weak);
  t.weak_order = r.number("min_weak_order", t.weak_order);
  t.energy_ineq = r.number("tol_energy_ineq", t.energy_ineq);
  t.oracle_speed = r.number("tol_oracle_speed", t.oracle_speed);
  t.oracle_mass = r.number("tol_oracle_mass", t.oracle_mass);
  t.oracle_radial = r.number("tol_oracle_radial", t.oracle_radial);
  r.done();
  return t;
}

RiemannData1D parse_riemann_data(Reader& r, const FluxModel& flux) {
  RiemannData1D d;
  d.rho_l = r.number("rho_l");
  d.rho_r = r.number("rho_r");
  d.u_l = r.number("u_l");
  d.u_r = r.number("u_r");
  d.e0 = r.number("e0", 0.0);
  d.u_delta0 = r.opt_number("u_delta0");
  d.flux = flux;
  try {
    d.validate();
  } catch (const Error& ex) {
    r.fail(ex.what());
  }
  return d;
}

RiemannParams parse_riemann(const json& j, const FluxModel& flux) {
  Reader r(j, "problem");
  RiemannParams s;
  s.data = parse_riemann_data(r, flux);
  s.L = positive(r, "L", s.L);
  s.t_end = positive(r, "t_end", s.t_end);
  s.samples = checked_samples(r, s.samples);
  if (r.has("candidate")) {
    Reader c(r.raw("candidate"), "problem.candidate");
    s.candidate = CandidateParams{c.number("speed"), c.number("e0"), c.number("rate"), c.number("x0", 0.0)};
    c.done();
    if (s.candidate->e0 < 0.0) c.fail("'e0' must be nonnegative");
    if (s.candidate->rate < 0.0 && s.t_end > s.candidate->e0 / -s.candidate->rate)
      c.fail("surface density would turn negative before t_end");
  }
  r.done();
  return s;
}

FieldParams parse_field(const json& j, const std::string& where, int n) {
  Reader r(j, where);
  FieldParams f;
  f.source = j;
  const std::string kind = r.string("kind");
  const double lo = r.number("r_lo", -kInf);
  const double hi = r.number("r_hi", kInf);
  try {
    if (kind == "constant") {
      f.field = constant_field(r.number("rho"), r.number("u"), lo, hi);
    } else if (kind == "free-flow") {
      const Expression rho0(r.string("rho0")), u0(r.string("u0"));
      if (!std::isfinite(lo) || !std::isfinite(hi)) r.fail("free-flow fields need finite 'r_lo' and 'r_hi'");
      f.field = free_flow_field(
          n, [rho0](double s) { return rho0.eval_scalar(s, 0.0); }, [u0](double s) { return u0.eval_scalar(s, 0.0); },
          lo, hi);
    } else if (kind == "expression") {
      f.field = expression_field(Expression(r.string("rho")), Expression(r.string("u")), lo, hi);
    } else {
      r.fail("unknown field kind '" + kind + "'");
    }
  } catch (const Error& ex) {
    if (ex.code() == Errc::schema) throw;
    r.fail(ex.what());
  }
  r.done();
  return f;
}

SphericalParams parse_spherical(Reader& r) {
  SphericalParams s;
  s.n = r.integer("n", 3);
  if (s.n < 1 || s.n > 3) r.fail("'n' must be 1, 2 or 3");
  s.init.t = 0.0;
  s.init.phi = positive(r, "phi0", 1.0);
  s.init.e = r.number("e0", 0.0);
  if (s.init.e < 0.0) r.fail("'e0' must be nonnegative");
  s.init.u_delta = r.number("u_delta0", 0.0);
  s.t_end = positive(r, "t_end", s.t_end);
  s.samples = checked_samples(r, s.samples);
  s.inner = parse_field(r.raw("inner"), "problem.inner", s.n);
  s.outer = parse_field(r.raw("outer"), "problem.outer", s.n);
  s.opts.r_min = r.number("r_min", -1.0);
  s.opts.rtol = positive(r, "rtol", s.opts.rtol);
  s.opts.atol = positive(r, "atol", s.opts.atol);
  return s;
}

ShellParams parse_shells(const json& j, const std::string& where);

SphericalParams parse_spherical_problem(const json& j) {
  Reader r(j, "problem");
  SphericalParams s = parse_spherical(r);
  if (r.has("shells")) s.shells = parse_shells(r.raw("shells"), "problem.shells");
  r.done();
  return s;
}

ShellParams parse_shells(const json& j, const std::string& where) {
  Reader r(j, where);
  ShellParams s;
  s.N = r.integer("N", s.N);
  s.r_lo = r.number("r_lo");
  s.r_hi = r.number("r_hi");
  s.samples = checked_samples(r, s.samples);
  r.done();
  if (s.N < 100) r.fail("'N' must be at least 100");
  if (!(s.r_hi > s.r_lo)) r.fail("'r_hi' must exceed 'r_lo'");
  return s;
}

PlanarParams parse_planar(const json& j) {
  Reader r(j, "problem");
  PlanarParams s;
  s.nu = r.vector("nu");
  if (!(s.nu.norm() > 0.0)) r.fail("'nu' must be nonzero");
  s.nu /= s.nu.norm();
  s.rho_minus = r.number("rho_minus");
  s.rho_plus = r.number("rho_plus");
  s.U_minus = r.vector("U_minus");
  s.U_plus = r.vector("U_plus");
  s.e0 = r.number("e0", 0.0);
  s.u_delta0 = r.opt_number("u_delta0");
  s.L = positive(r, "L", s.L);
  s.t_end = positive(r, "t_end", s.t_end);
  s.samples = checked_samples(r, s.samples);
  r.done();
  if (s.U_minus.size() != s.nu.size() || s.U_plus.size() != s.nu.size())
    r.fail("'nu', 'U_minus' and 'U_plus' must have equal length");
  if (s.rho_minus < 0.0 || s.rho_plus < 0.0 || s.e0 < 0.0) r.fail("densities must be nonnegative");
  return s;
}

OracleParams parse_oracle(const json& j, const FluxModel& flux) {
  Reader r(j, "problem");
  OracleParams s;
  s.preset = r.string("preset");
  s.N = r.integer("N", s.N);
  s.T = positive(r, "T", s.T);
  s.samples = r.integer("samples", s.samples);
  if (s.samples < 1) r.fail("'samples' must be at least 1");
  s.random = r.boolean("random", false);
  if (s.N < 100) r.fail("'N' must be at least 100");
  if (flux.name() != "standard") r.fail("the sticky-particle oracle models the standard flux only");
  if (s.preset == "riemann") {
    s.data = parse_riemann_data(r, flux);
    s.L = positive(r, "L", s.L);
  } else if (s.preset == "spherical") {
    s.sphere = parse_spherical(r);
    s.sphere.shells = ShellParams{s.N, r.number("r_lo"), r.number("r_hi"), s.samples + 1};
    if (s.sphere.n < 2) r.fail("the radial shell oracle needs n >= 2");
  } else {
    r.fail("unknown preset '" + s.preset + "'");
  }
  r.done();
  return s;
}

std::vector<FrontQuery> parse_fronts(const json& j) {
  std::vector<FrontQuery> out;
  Reader r(j, "problem");
  if (r.has("fronts")) {
    const json& arr = r.raw("fronts");
    if (!arr.is_array()) r.fail("'fronts' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "problem.fronts[" + std::to_string(i) + "]";
      Reader fr(arr[i], where);
      FrontQuery q;
      q.front = fr.raw("front");
      const json& pts = fr.raw("points");
      if (!pts.is_array() || pts.empty()) fr.fail("'points' must be a non-empty array");
      for (const auto& p : pts) {
        Reader pr(p, where + ".points");
        q.points.emplace_back(pr.vector("x"), pr.number("t", 0.0));
        pr.done();
      }
      fr.done();
      out.push_back(std::move(q));
    }
  }
  r.done();
  return out;
}

LevelSetFront front_from_json(const json& j, const std::string& where, int& dim) {
  Reader r(j, where);
  const std::string kind = r.string("kind");
  std::optional<LevelSetFront> f;
  try {
    if (kind == "plane") {
      Vec nu = r.vector("normal");
      if (!(nu.norm() > 0.0)) r.fail("'normal' must be nonzero");
      nu /= nu.norm();
      const double c = r.number("offset", 0.0), v = r.number("speed", 0.0);
      dim = static_cast<int>(nu.size());
      f = plane_front(nu, [c, v](double t) { return c + v * t; }, [v](double) { return v; });
    } else if (kind == "sphere") {
      const Vec c = r.vector("center");
      const double R = positive(r, "radius", 1.0), Rd = r.number("rate", 0.0);
      dim = static_cast<int>(c.size());
      f = sphere_front(c, [R, Rd](double t) { return R + Rd * t; }, [Rd](double) { return Rd; });
    } else if (kind == "level_set_expr") {
      dim = r.integer("dim", 0);
      if (dim < 1) r.fail("'dim' must be a positive integer");
      f = expression_front(dim, Expression(r.string("S")));
    } else {
      r.fail("unknown front kind '" + kind + "'");
    }
  } catch (const Error& ex) {
    if (ex.code() == Errc::schema) throw;
    r.fail(ex.what());
  }
  r.done();
  return *f;
}

std::shared_ptr<Scenario> parse_scenario(const json& j, const std::filesystem::path& base_dir, int depth = 0) {
  if (depth > 1) throw Error(Errc::schema, "weakcheck targets may not nest");
  Reader top(j, "scenario");
  auto s = std::make_shared<Scenario>();
  s->kind = top.string("kind");
  s->name = top.string("name", s->kind);
  const int seed = top.integer("seed", 1);
  if (seed < 0) top.fail("'seed' must be nonnegative");
  s->seed = static_cast<std::uint64_t>(seed);
  s->tol = parse_tolerances(top);
  s->checks = parse_checks(top);
  s->flux_json = top.has("flux") ? top.raw("flux") : json{{"kind", "standard"}};

  auto flux_for = [&](int dim) { return flux_from_json(s->flux_json, dim); };
  if (s->kind == "riemann1d") {
    s->flux = flux_for(1);
    s->problem = parse_riemann(top.raw("problem"), s->flux);
  } else if (s->kind == "spherical") {
    s->flux = flux_for(1);
    s->problem = parse_spherical_problem(top.raw("problem"));
  } else if (s->kind == "planar") {
    PlanarParams p = parse_planar(top.raw("problem"));
    s->flux = flux_for(static_cast<int>(p.nu.size()));
    if (s->flux.name() != "standard") top.fail("planar runs use the standard flux");
    s->problem = p;
  } else if (s->kind == "oracle") {
    s->flux = flux_for(1);
    s->problem = parse_oracle(top.raw("problem"), s->flux);
  } else if (s->kind == "weakcheck") {
    Reader r(top.raw("problem"), "problem");
    WeakcheckParams w;
    const json& target = r.raw("solution");
    if (target.is_string()) {
      const auto path = base_dir / target.get<std::string>();
      w.target = parse_scenario(load_json(path), path.parent_path(), depth + 1);
    } else {
      w.target = parse_scenario(target, base_dir, depth + 1);
    }
    const std::string tk = w.target->kind;
    if (tk != "riemann1d" && tk != "planar" && tk != "spherical")
      r.fail("weakcheck target must be a riemann1d, planar or spherical scenario");
    json rest = json::object();
    for (const char* k : {"levels", "count", "q", "box"}) {
      if (r.has(k)) rest[k] = r.raw(k);
    }
    r.done();
    w.weak = parse_weak(rest, "problem");
    w.weak.enabled = true;
    s->flux = w.target->flux;
    s->problem = w;
  } else if (s->kind == "geom-suite") {
    GeomParams g;
    if (top.has("problem")) g.fronts = parse_fronts(top.raw("problem"));
    for (std::size_t i = 0; i < g.fronts.size(); ++i) {
      int dim = 0;
      front_from_json(g.fronts[i].front, "problem.fronts[" + std::to_string(i) + "].front", dim);
      for (const auto& [x, t] : g.fronts[i].points) {
        if (x.size() != dim) top.fail("front query point dimension differs from the front");
      }
    }
    s->problem = g;
  } else {
    top.fail("unknown kind '" + s->kind + "'");
  }
  top.done();
  if (s->checks.inequality.enabled && (s->flux.name() != "standard" || s->kind != "riemann1d"))
    throw Error(Errc::schema, "checks.energy_inequality applies to standard-flux riemann1d scenarios only");
  return s;
}

// ------------------------------------------------------------------ running

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
  return out;
}

struct Context {
  const Scenario& sc;
  const RunOptions& opts;
  std::filesystem::path dir;
  RunResult result;
  std::vector<std::pair<std::string, std::vector<std::string>>> plots;  // csv -> y columns
  std::string primary;

  void csv(const std::string& name, const CsvWriter& w, std::vector<std::string> plot_columns = {}) {
    w.write(dir / name);
    if (primary.empty()) primary = name;
    result.files.push_back(name);
    if (!plot_columns.empty()) plots.emplace_back(name, std::move(plot_columns));
  }
  void fail(const std::string& what) { result.failures.push_back(what); }
  // Informational checks fail the run only in strict mode.
  void advisory(const std::string& what) {
    result.report["advisories"].push_back(what);
    if (opts.strict) fail(what);
  }
};

json to_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

AuditOptions audit_options(const Scenario& sc) {
  AuditOptions a;
  a.tol_cons = sc.tol.cons;
  a.tol_mono = sc.tol.mono;
  return a;
}

void write_balance(Context& ctx, const BalanceReport& r) {
  const int k = r.momentum_components;
  std::vector<std::string> h{"t", "M", "m"};
  for (int i = 1; i <= k; ++i) h.push_back("P_" + std::to_string(i));
  for (int i = 1; i <= k; ++i) h.push_back("p_" + std::to_string(i));
  for (const char* c : {"W", "w", "sum_mass"}) h.push_back(c);
  for (int i = 1; i <= k; ++i) h.push_back("sum_mom_" + std::to_string(i));
  for (const char* c : {"sum_energy", "mdot", "entropy_strict"}) h.push_back(c);
  CsvWriter w(h);
  for (const auto& s : r.samples) {
    std::vector<double> row{s.t, s.M, s.m};
    for (int i = 0; i < k; ++i) row.push_back(s.P[i]);
    for (int i = 0; i < k; ++i) row.push_back(s.p[i]);
    row.push_back(s.W);
    row.push_back(s.w);
    row.push_back(s.sum_mass());
    const Vec mom = s.sum_momentum();
    for (int i = 0; i < k; ++i) row.push_back(mom[i]);
    row.push_back(s.sum_energy());
    row.push_back(s.mdot);
    row.push_back(s.entropy_strict ? 1.0 : 0.0);
    w.row(row);
  }
  ctx.csv("balance.csv", w, {"M", "m", "sum_mass", "sum_energy"});

  json j;
  j["box"] = {r.box.first, r.box.second};
  j["tol_cons"] = r.tol_cons;
  j["tol_mono"] = r.tol_mono;
  j["mass_drift"] = r.mass_drift;
  j["momentum_drift"] = r.momentum_drift;
  j["energy_checked"] = r.energy_checked;
  j["energy_rise"] = r.energy_rise;
  j["W_rise"] = r.W_rise;
  j["min_mdot"] = r.min_mdot;
  j["mass_ok"] = r.mass_ok;
  j["momentum_ok"] = r.momentum_ok;
  j["concentration_ok"] = r.concentration_ok;
  j["mdot_positive"] = r.mdot_positive;
  j["entropy_ok"] = r.entropy_ok;
  j["energy_ok"] = r.energy_ok;
  j["W_ok"] = r.W_ok;
  json rates = json::array();
  for (const auto& s : r.samples)
    rates.push_back({{"t", s.t}, {"mdot_analytic", s.mdot_analytic}, {"dissipation", s.dissipation}});
  j["rates"] = rates;
  ctx.result.report["balance"] = j;
  for (const auto& f : r.failures) ctx.fail(f);
}

BatteryBox default_box(const DeltaShockSolution& c, double t_hi) {
  const int n = c.dim;
  double lo = kInf, hi = -kInf;
  for (double t : linspace(0.0, t_hi, 33)) {
    lo = std::min(lo, c.front(t));
    hi = std::max(hi, c.front(t));
  }
  BatteryBox b;
  b.t_lo = 0.0;
  b.t_hi = t_hi;
  if (c.geometry == FrontGeometry::sphere) {
    const double R = hi + 0.5 * hi;
    b.lo = Vec::Constant(n, -R);
    b.hi = Vec::Constant(n, R);
    return b;
  }
  const double margin = 1.5;
  const Vec mid = c.nu * 0.5 * (lo + hi);
  const double half = margin + 0.5 * (hi - lo);
  b.lo = mid - Vec::Constant(n, half);
  b.hi = mid + Vec::Constant(n, half);
  return b;
}

void run_weak(Context& ctx, const DeltaShockSolution& c, const WeakParams& params, double t_end) {
  const double t_hi = std::min(t_end, std::isfinite(c.t_max) ? 0.9 * c.t_max : t_end);
  const BatteryBox box = params.box.value_or(default_box(c, t_hi));
  if (box.lo.size() != c.dim) throw Error(Errc::schema, "weakcheck box dimension differs from the solution");
  const auto battery = make_battery(box, params.count, ctx.sc.seed);
  WeakOptions wo;
  wo.q = params.q;
  const WeakResidual r = evaluate_identities(c, battery, params.levels, wo);

  std::vector<std::string> h{"panels"};
  h.push_back("mass");
  for (int k = 1; k <= c.dim; ++k) h.push_back("momentum_" + std::to_string(k));
  CsvWriter w(h);
  for (const auto& lv : r.levels) {
    std::vector<double> row{static_cast<double>(lv.panels)};
    row.insert(row.end(), lv.max_abs.begin(), lv.max_abs.end());
    w.row(row);
  }
  ctx.csv("weakcheck.csv", w);
  json j;
  j["seed"] = ctx.sc.seed;
  j["count"] = params.count;
  j["q"] = params.q;
  j["box"] = {{"lo", to_json(box.lo)}, {"hi", to_json(box.hi)}, {"t_lo", box.t_lo}, {"t_hi", box.t_hi}};
  j["max_residual"] = r.max_residual;
  json orders = json::array();
  for (double o : r.observed_order) orders.push_back(std::isnan(o) ? json(nullptr) : json(o));
  j["observed_order"] = orders;
  j["tol"] = ctx.sc.tol.weak;
  ctx.result.report["weakcheck"] = j;
  if (r.max_all() >= ctx.sc.tol.weak) ctx.fail("weak identities not satisfied (residual above tolerance)");
  for (std::size_t k = 0; k < r.observed_order.size(); ++k) {
    const double o = r.observed_order[k];
    if (!std::isnan(o) && o < ctx.sc.tol.weak_order)
      ctx.advisory("weak residual convergence order below " + format_number(ctx.sc.tol.weak_order) + " for identity " +
                   std::to_string(k));
  }
}

void run_inequality(Context& ctx, const DeltaShockSolution& c, const InequalityParams& params, double t_end) {
  const double t_hi = std::min(t_end, std::isfinite(c.t_max) ? 0.9 * c.t_max : t_end);
  const auto battery = make_battery(default_box(c, t_hi), params.count, ctx.sc.seed);
  const auto r = check_energy_inequality_1d(c, battery, params.panels, 8, ctx.sc.tol.energy_ineq);
  CsvWriter w({"member", "value"});
  for (std::size_t i = 0; i < r.members.size(); ++i) w.row({static_cast<double>(r.members[i]), r.values[i]});
  ctx.csv("energy_inequality.csv", w);
  ctx.result.report["energy_inequality"] = {{"min_value", r.min_value}, {"tol", r.tol}, {"members", r.members.size()}};
  if (!r.ok()) ctx.fail("energy inequality (rho u^2)_t + (rho u^3)_x <= 0 violated");
}

DeltaShockSolution riemann_run_solution(const RiemannParams& s, std::string* path_kind) {
  if (s.candidate) {
    if (path_kind) *path_kind = "candidate";
    auto c = riemann_candidate(s.data, s.L, s.candidate->speed, s.candidate->e0, s.candidate->rate, s.candidate->x0);
    c.name = "candidate";
    return c;
  }
  const auto path = solve_constant_states(s.data, s.t_end);
  if (path_kind) *path_kind = path.kind;
  return riemann_solution(s.data, path, s.L);
}

void run_riemann(Context& ctx, const RiemannParams& s) {
  std::string kind;
  const DeltaShockSolution c = riemann_run_solution(s, &kind);
  const auto times = linspace(0.0, s.t_end, s.samples);
  CsvWriter w({"t", "phi", "u_delta", "e", "mass_deficit", "momentum_deficit"});
  for (double t : times) {
    const auto d = deficits(c.flux, c.sides(t), c.front_state(t));
    w.row({t, c.front(t), c.front_speed(t), c.e(t), d.mass, d.momentum[0]});
  }
  ctx.csv("trajectory.csv", w, {"phi", "u_delta", "e"});
  ctx.result.report["path"] = kind;
  if (!s.candidate) {
    ctx.result.report["u_delta_asymptotic"] = delta_shock_speed(s.data);
  }
  if (ctx.sc.checks.balance) write_balance(ctx, audit(c, times, audit_options(ctx.sc)));
  if (ctx.sc.checks.weak.enabled) run_weak(ctx, c, ctx.sc.checks.weak, s.t_end);
  if (ctx.sc.checks.inequality.enabled) run_inequality(ctx, c, ctx.sc.checks.inequality, s.t_end);
}

struct SphericalRun {
  SphericalTrajectory traj;
  DeltaShockSolution solution;
};

SphericalRun spherical_run_solution(const SphericalParams& s, const FluxModel& flux) {
  SphericalRun r{integrate_front(s.inner.field, s.outer.field, s.init, s.n, s.t_end, flux, s.opts), {}};
  r.solution = spherical_solution(r.traj, s.inner.field, s.outer.field, s.n, flux);
  return r;
}

void run_shell_oracle(Context& ctx, const SphericalParams& s, const SphericalTrajectory& traj, const ShellParams& shells) {
  ShellConfig cfg;
  cfg.n = s.n;
  cfg.N = shells.N;
  cfg.r_lo = shells.r_lo;
  cfg.r_hi = shells.r_hi;
  cfg.phi0 = s.init.phi;
  cfg.e0 = s.init.e;
  cfg.u_delta0 = s.init.u_delta;
  cfg.r_min = traj.r_min;
  ParticleSystem ps = radial_shells(s.inner.field, s.outer.field, cfg);
  // Compare until the front reaches twice the truncation radius.
  double t_stop = traj.t_final();
  for (const auto& st : traj.states) {
    if (st.phi <= 2.0 * traj.r_min) {
      t_stop = st.t;
      break;
    }
  }
  std::vector<double> times = linspace(0.0, t_stop, shells.samples);
  times.erase(times.begin());
  const ClusterEstimate est = delta_cluster_estimate(ps, times);
  CsvWriter w({"t", "phi", "phi_hat", "m", "m_hat"});
  const double om = unit_sphere_measure(s.n);
  double err_phi = 0.0, err_m = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto st = traj.at(times[i]);
    const double m = st.e * om * std::pow(st.phi, s.n - 1);
    w.row({times[i], st.phi, est.position[i], m, est.mass[i]});
    err_phi = std::max(err_phi, std::fabs(est.position[i] - st.phi) / st.phi);
    err_m = std::max(err_m, std::fabs(est.mass[i] - m) / m);
  }
  ctx.csv("oracle.csv", w, {"phi", "phi_hat", "m", "m_hat"});
  ctx.result.report["oracle"] = {{"N", shells.N},
                                 {"max_rel_error_phi", err_phi},
                                 {"max_rel_error_m", err_m},
                                 {"tol", ctx.sc.tol.oracle_radial},
                                 {"truncated", ps.truncated()}};
  if (err_phi > ctx.sc.tol.oracle_radial || err_m > ctx.sc.tol.oracle_radial)
    ctx.advisory("radial sticky-shell oracle differs from the front trajectory beyond tolerance");
}

void run_spherical(Context& ctx, const SphericalParams& s) {
  const SphericalRun run = spherical_run_solution(s, ctx.sc.flux);
  const auto& c = run.solution;
  const auto times = linspace(0.0, run.traj.t_final(), s.samples);
  const BalanceReport bal = audit(c, times, audit_options(ctx.sc));
  CsvWriter w({"t", "phi", "u_delta", "e", "m", "M", "M+m", "entropy_ok"});
  for (const auto& smp : bal.samples) {
    const auto st = run.traj.at(smp.t);
    w.row({smp.t, st.phi, st.u_delta, st.e, smp.m, smp.M, smp.sum_mass(),
           entropy_ok(c.sides(smp.t), c.front_state(smp.t), false) ? 1.0 : 0.0});
  }
  ctx.csv("trajectory.csv", w, {"phi", "e", "m"});
  ctx.result.report["t_final"] = run.traj.t_final();
  ctx.result.report["stop"] = run.traj.focused() ? "r_min" : (run.traj.entropy_violated() ? "entropy" : "t_end");
  ctx.result.report["r_min"] = run.traj.r_min;
  if (run.traj.entropy_violated()) ctx.fail("entropy condition violated along the spherical trajectory");
  if (s.n >= 2) {
    double worst = 0.0;
    for (double t : times) {
      const double phi = c.front(t);
      const auto ls = inward_sphere_front(Vec::Zero(s.n), [phi](double) { return phi; }, [](double) { return 0.0; });
      const double K = mean_curvature(ls, Vec::Unit(s.n, 0) * phi, t);
      worst = std::max(worst, std::fabs(2.0 * K - (s.n - 1) / phi));
    }
    ctx.result.report["curvature_term_error"] = worst;
    if (worst > 1e-8) ctx.advisory("curvature term (n-1)/phi differs from -2K");
  }
  if (ctx.sc.checks.balance) write_balance(ctx, bal);
  if (s.shells) run_shell_oracle(ctx, s, run.traj, *s.shells);
  if (ctx.sc.checks.weak.enabled) run_weak(ctx, c, ctx.sc.checks.weak, run.traj.t_final());
}

DeltaShockSolution planar_run_solution(const PlanarParams& s) {
  RiemannData1D d;
  d.rho_l = s.rho_minus;
  d.rho_r = s.rho_plus;
  d.u_l = s.U_minus.dot(s.nu);
  d.u_r = s.U_plus.dot(s.nu);
  d.e0 = s.e0;
  d.u_delta0 = s.u_delta0;
  const auto path = solve_constant_states(d, s.t_end);
  return planar_solution(s.nu, s.rho_minus, s.U_minus, s.rho_plus, s.U_plus, path, s.L);
}

void run_planar(Context& ctx, const PlanarParams& s) {
  const DeltaShockSolution c = planar_run_solution(s);
  const int n = c.dim;
  const auto times = linspace(0.0, s.t_end, s.samples);
  std::vector<std::string> h{"t", "phi", "u_delta", "e", "mass_deficit"};
  for (int k = 1; k <= n; ++k) h.push_back("momentum_deficit_" + std::to_string(k));
  for (int k = 1; k <= n; ++k) h.push_back("tangential_residual_" + std::to_string(k));
  h.push_back("tangential_residual_norm");
  CsvWriter w(h);
  double worst = 0.0;
  for (double t : times) {
    const auto st = c.sides(t);
    const auto fs = c.front_state(t);
    const auto d = deficits(c.flux, st, fs);
    const Vec tan = tangential_residual(c.flux, st, fs);
    std::vector<double> row{t, c.front(t), c.front_speed(t), c.e(t), d.mass};
    for (int k = 0; k < n; ++k) row.push_back(d.momentum[k]);
    for (int k = 0; k < n; ++k) row.push_back(tan[k]);
    row.push_back(tan.norm());
    worst = std::max(worst, tan.norm());
    w.row(row);
  }
  ctx.csv("trajectory.csv", w, {"phi", "e"});
  ctx.result.report["nu"] = to_json(c.nu);
  ctx.result.report["tangential_residual_max"] = worst;
  if (ctx.sc.checks.balance) write_balance(ctx, audit(c, times, audit_options(ctx.sc)));
  if (ctx.sc.checks.weak.enabled) run_weak(ctx, c, ctx.sc.checks.weak, s.t_end);
}

void run_oracle(Context& ctx, const OracleParams& s) {
  if (s.preset == "spherical") {
    const SphericalRun run = spherical_run_solution(s.sphere, ctx.sc.flux);
    run_shell_oracle(ctx, s.sphere, run.traj, *s.sphere.shells);
    return;
  }
  ParticleSystem ps = s.random ? sample_riemann_random(s.data, s.L, s.N, ctx.sc.seed) : sample_riemann(s.data, s.L, s.N);
  const double mass0 = ps.total_mass(), mom0 = ps.total_momentum(), ke0 = ps.kinetic_energy();
  std::vector<double> times;
  for (int i = 1; i <= s.samples; ++i) times.push_back(s.T * i / s.samples);
  const ClusterEstimate est = delta_cluster_estimate(ps, times);
  const double u_exact = delta_shock_speed(s.data);
  const auto path = solve_constant_states(s.data, s.T);
  CsvWriter w({"t", "position", "mass", "phi", "e"});
  for (std::size_t i = 0; i < times.size(); ++i) w.row({times[i], est.position[i], est.mass[i], path.phi(times[i]), path.e(times[i])});
  ctx.csv("oracle.csv", w, {"position", "phi", "mass", "e"});
  const double speed_err = std::fabs(est.u_delta - path.u_delta(s.T));
  const double mass_err = std::fabs(est.mass.back() - path.e(s.T)) / path.e(s.T);
  const double mass_drift = std::fabs(ps.total_mass() - mass0) / mass0;
  const double mom_scale = std::max(std::fabs(mom0), mass0 * std::max(std::fabs(s.data.u_l), std::fabs(s.data.u_r)));
  const double mom_drift = std::fabs(ps.total_momentum() - mom0) / (mom_scale > 0.0 ? mom_scale : 1.0);
  ctx.result.report["oracle"] = {{"N", s.N},
                                 {"u_delta_hat", est.u_delta},
                                 {"u_delta", u_exact},
                                 {"speed_error", speed_err},
                                 {"mass_hat", est.mass.back()},
                                 {"mass_rel_error", mass_err},
                                 {"mass_drift", mass_drift},
                                 {"momentum_drift", mom_drift},
                                 {"kinetic_energy_0", ke0},
                                 {"kinetic_energy_T", ps.kinetic_energy()},
                                 {"merges", ps.merges()}};
  if (mass_drift > 1e-12) ctx.fail("particle mass not conserved");
  if (mom_drift > 1e-10) ctx.fail("particle momentum not conserved");
  if (ps.kinetic_energy() > ke0 * (1.0 + 1e-12)) ctx.fail("particle kinetic energy increased");
  if (speed_err > ctx.sc.tol.oracle_speed || mass_err > ctx.sc.tol.oracle_mass)
    ctx.advisory("sticky-particle cluster differs from the delta-shock solution beyond tolerance");
}

void run_weakcheck(Context& ctx, const WeakcheckParams& w) {
  const Scenario& t = *w.target;
  ctx.result.report["target"] = t.name;
  if (const auto* r = std::get_if<RiemannParams>(&t.problem)) {
    run_weak(ctx, riemann_run_solution(*r, nullptr), w.weak, r->t_end);
  } else if (const auto* p = std::get_if<PlanarParams>(&t.problem)) {
    run_weak(ctx, planar_run_solution(*p), w.weak, p->t_end);
  } else if (const auto* s = std::get_if<SphericalParams>(&t.problem)) {
    const SphericalRun run = spherical_run_solution(*s, t.flux);
    run_weak(ctx, run.solution, w.weak, run.traj.t_final());
  }
}

void run_geom(Context& ctx, const GeomParams& g) {
  const GeometrySuiteReport r = run_geometry_suite();
  CsvWriter cw({"n", "R", "analytic_gradient", "curvature", "expected", "error"});
  for (const auto& c : r.curvature) cw.row({double(c.n), c.R, c.analytic_gradient ? 1.0 : 0.0, c.value, c.expected, c.error});
  ctx.csv("curvature.csv", cw);
  CsvWriter tw({"study", "dt", "residual"});
  int idx = 0;
  for (const auto* st : {&r.surface, &r.volume}) {
    for (std::size_t i = 0; i < st->steps.size(); ++i) tw.row({double(idx), st->steps[i], st->residuals[i]});
    ++idx;
  }
  ctx.csv("transport.csv", tw);
  ctx.result.report["geometry"] = {{"curvature_max_error", r.curvature_max_error},
                                   {"surface_transport_order", r.surface.observed_order},
                                   {"surface_transport_residual", r.surface.default_residual},
                                   {"volume_transport_order", r.volume.observed_order},
                                   {"volume_transport_residual", r.volume.default_residual},
                                   {"integration_by_parts_residual", r.ibp_residual}};
  if (!r.curvature_ok()) ctx.fail("sphere mean curvature differs from -(n-1)/(2R)");
  if (!r.surface_ok()) ctx.fail("surface transport residual does not converge at second order");
  if (!r.volume_ok()) ctx.fail("volume transport residual does not converge at second order");
  if (!r.ibp_ok()) ctx.fail("integration-by-parts residual above tolerance");

  for (std::size_t i = 0; i < g.fronts.size(); ++i) {
    int n = 0;
    const LevelSetFront f = front_from_json(g.fronts[i].front, "front", n);
    std::vector<std::string> h{"t"};
    for (int k = 1; k <= n; ++k) h.push_back("x_" + std::to_string(k));
    for (int k = 1; k <= n; ++k) h.push_back("nu_" + std::to_string(k));
    h.push_back("G");
    h.push_back("K");
    CsvWriter w(h);
    for (const auto& [x0, t] : g.fronts[i].points) {
      const Vec x = project_to_surface(f, x0, t);
      std::vector<double> row{t};
      for (int k = 0; k < n; ++k) row.push_back(x[k]);
      const Vec nu = normal(f, x, t);
      for (int k = 0; k < n; ++k) row.push_back(nu[k]);
      row.push_back(normal_speed(f, x, t));
      row.push_back(mean_curvature(f, x, t));
      w.row(row);
    }
    ctx.csv("front_" + std::to_string(i) + ".csv", w);
  }
}

std::string gnuplot_script(const std::vector<std::pair<std::string, std::vector<std::string>>>& plots) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set terminal pngcairo size 900,600\n";
  for (const auto& [csv, cols] : plots) {
    const std::string stem = csv.substr(0, csv.rfind('.'));
    os << "\nset output '" << stem << ".png'\n"
       << "set xlabel 't'\n"
       << "plot ";
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? ", \\\n     " : "") << "'" << csv << "' using 1:'" << cols[i] << "' with lines";
    }
    os << '\n';
  }
  return os.str();
}

void finish(Context& ctx) {
  auto& res = ctx.result;
  res.exit_code = res.failures.empty() ? kExitOk : kExitCheckFailed;
  if (!ctx.plots.empty()) {
    std::ofstream f(ctx.dir / "plot.gp", std::ios::binary);
    f << gnuplot_script(ctx.plots);
    res.files.push_back("plot.gp");
  }
  res.report["failures"] = res.failures;
  res.report["exit_code"] = res.exit_code;
  {
    std::ofstream f(ctx.dir / "report.json", std::ios::binary);
    f << res.report.dump(2) << '\n';
    res.files.push_back("report.json");
  }
  if (!ctx.opts.primary_alias.empty()) {
    const std::string source = ctx.sc.kind == "weakcheck" || ctx.primary.empty() ? "report.json" : ctx.primary;
    if (ctx.opts.primary_alias != source) {
      std::filesystem::copy_file(ctx.dir / source, ctx.dir / ctx.opts.primary_alias,
                                 std::filesystem::copy_options::overwrite_existing);
      res.files.push_back(ctx.opts.primary_alias);
    }
  }
  write_manifest(ctx.dir, res.files,
                 {{"scenario", ctx.sc.name}, {"kind", ctx.sc.kind}, {"seed", ctx.sc.seed}, {"exit_code", res.exit_code}});
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error(Errc::invalid_input, "cannot create output directory " + dir.string());
}

}  // namespace

RunResult run(const json& scenario, const RunOptions& opts, const std::filesystem::path& base_dir) {
  auto sc = parse_scenario(scenario, base_dir);
  if (!opts.expect_kind.empty() && sc->kind != opts.expect_kind)
    throw Error(Errc::schema, "scenario kind '" + sc->kind + "' does not match subcommand '" + opts.expect_kind + "'");
  if (opts.seed) sc->seed = *opts.seed;
  prepare_dir(opts.out);

  Context ctx{*sc, opts, opts.out, {}, {}, {}};
  ctx.result.report["scenario"] = sc->name;
  ctx.result.report["kind"] = sc->kind;
  ctx.result.report["flux"] = sc->flux_json;
  ctx.result.report["seed"] = sc->seed;
  ctx.result.report["advisories"] = json::array();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RiemannParams>) run_riemann(ctx, p);
        else if constexpr (std::is_same_v<T, SphericalParams>) run_spherical(ctx, p);
        else if constexpr (std::is_same_v<T, PlanarParams>) run_planar(ctx, p);
        else if constexpr (std::is_same_v<T, OracleParams>) run_oracle(ctx, p);
        else if constexpr (std::is_same_v<T, WeakcheckParams>) run_weakcheck(ctx, p);
        else if constexpr (std::is_same_v<T, GeomParams>) run_geom(ctx, p);
      },
      sc->problem);
  finish(ctx);
  return ctx.result;
}

RunResult run_file(const std::filesystem::path& scenario, const RunOptions& opts) {
  RunResult res;
  try {
    return run(load_json(scenario), opts, scenario.parent_path());
  } catch (const Error& ex) {
    res.exit_code = exit_code_for(ex.code());
    res.failures.push_back(ex.what());
    res.report["error"] = ex.what();
    res.report["error_code"] = to_string(ex.code());
    if (ex.code() == Errc::no_delta_shock || ex.code() == Errc::ambiguous_root)
      res.report["failed_condition"] = "entropy condition U+.nu < U_delta.nu < U-.nu";
  } catch (const std::exception& ex) {
    res.exit_code = kExitNumeric;
    res.failures.push_back(ex.what());
    res.report["error"] = ex.what();
  }
  res.report["failures"] = res.failures;
  res.report["exit_code"] = res.exit_code;
  std::cerr << "dshock: " << res.failures.front() << '\n';
  try {
    prepare_dir(opts.out);
    std::ofstream f(opts.out / "report.json", std::ios::binary);
    f << res.report.dump(2) << '\n';
    f.close();
    res.files = {"report.json"};
    write_manifest(opts.out, res.files, {{"exit_code", res.exit_code}});
  } catch (const std::exception&) {
    // The exit code still reports the failure.
  }
  return res;
}

}  // namespace dshock::cli
