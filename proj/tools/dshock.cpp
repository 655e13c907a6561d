#include "dshock/cli.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dshock::cli;

namespace {

struct Common {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
  auto* opt = app->add_option("--config", c.config, "scenario JSON file");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output directory (or file name for the primary artifact)")->required();
  app->add_option("--seed", c.seed, "overrides the scenario seed");
  app->add_flag("--strict", c.strict, "treat informational checks as required checks");
}

RunOptions options(const Common& c, const std::string& kind) {
  RunOptions o;
  o.seed = c.seed;
  o.strict = c.strict;
  o.expect_kind = kind;
  const fs::path out(c.out);
  const auto ext = out.extension().string();
  if (ext == ".csv" || ext == ".json") {
    o.out = out.has_parent_path() ? out.parent_path() : fs::path(".");
    o.primary_alias = out.filename().string();
  } else {
    o.out = out;
  }
  return o;
}

int run_config(const Common& c, const std::string& kind) { return run_file(c.config, options(c, kind)).exit_code; }

// Scenario built from flags, written next to the outputs so the run is reproducible.
int run_inline(const Common& c, const std::string& kind, const json& scenario) {
  RunOptions o = options(c, kind);
  std::error_code ec;
  fs::create_directories(o.out, ec);
  const fs::path file = o.out / "scenario.json";
  {
    std::ofstream f(file);
    if (!f) {
      std::cerr << "dshock: cannot write " << file << '\n';
      return kExitSchema;
    }
    f << scenario.dump(2) << '\n';
  }
  return run_file(file, o).exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-shock front tracking"};
  app.require_subcommand(1);

  Common run_c, sph_c, planar_c, geom_c, riem_c, orc_c, weak_c;

  auto* run = app.add_subcommand("run", "run any scenario file");
  add_common(run, run_c, true);

  auto* sph = app.add_subcommand("spherical", "spherical front scenario");
  add_common(sph, sph_c, true);

  auto* planar = app.add_subcommand("planar", "planar multi-D scenario");
  add_common(planar, planar_c, true);

  auto* geom = app.add_subcommand("geom-suite", "moving-surface calculus validation suite");
  add_common(geom, geom_c, false);

  auto* riem = app.add_subcommand("riemann", "one-dimensional Riemann problem");
  add_common(riem, riem_c, false);
  double rho_l = 1, rho_r = 1, u_l = 1, u_r = -1, c0 = 1, e0 = 0, t_end = 1, L = 5;
  std::optional<double> u_delta0;
  std::string flux = "standard";
  int samples = 21;
  riem->add_option("--rho-l", rho_l);
  riem->add_option("--rho-r", rho_r);
  riem->add_option("--u-l", u_l);
  riem->add_option("--u-r", u_r);
  riem->add_option("--flux", flux)->check(CLI::IsMember({"standard", "relativistic"}));
  riem->add_option("--c0", c0);
  riem->add_option("--e0", e0);
  riem->add_option("--u-delta0", u_delta0);
  riem->add_option("--t-end", t_end);
  riem->add_option("--L", L);
  riem->add_option("--samples", samples);

  auto* orc = app.add_subcommand("oracle", "sticky-particle oracle");
  add_common(orc, orc_c, false);
  std::string preset;
  int N = 200000;
  double T = 1.0;
  orc->add_option("--preset", preset)->check(CLI::IsMember({"riemann", "spherical"}));
  orc->add_option("--N", N);
  orc->add_option("--T", T);

  auto* weak = app.add_subcommand("weakcheck", "weak-identity residuals of a solution scenario");
  add_common(weak, weak_c, false);
  std::string solution;
  int levels = 5;
  weak->add_option("--solution", solution)->check(CLI::ExistingFile);
  weak->add_option("--levels", levels);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  if (*run) return run_config(run_c, "");
  if (*sph) return run_config(sph_c, "spherical");
  if (*planar) return run_config(planar_c, "planar");
  if (*geom) {
    if (!geom_c.config.empty()) return run_config(geom_c, "geom-suite");
    return run_inline(geom_c, "geom-suite", {{"kind", "geom-suite"}, {"name", "geom-suite"}});
  }
  if (*riem) {
    if (!riem_c.config.empty()) return run_config(riem_c, "riemann1d");
    json f = {{"kind", flux}};
    if (flux == "relativistic") f["c0"] = c0;
    json p = {{"rho_l", rho_l}, {"rho_r", rho_r}, {"u_l", u_l}, {"u_r", u_r}, {"e0", e0},
              {"t_end", t_end}, {"L", L}, {"samples", samples}};
    if (u_delta0) p["u_delta0"] = *u_delta0;
    return run_inline(riem_c, "riemann1d", {{"kind", "riemann1d"}, {"name", "riemann"}, {"flux", f}, {"problem", p}});
  }
  if (*orc) {
    if (!orc_c.config.empty()) return run_config(orc_c, "oracle");
    if (preset.empty()) {
      std::cerr << "dshock oracle: --config or --preset is required\n";
      return kExitSchema;
    }
    json p;
    if (preset == "riemann") {
      p = {{"preset", "riemann"}, {"N", N}, {"T", T}, {"rho_l", 4.0}, {"rho_r", 1.0}, {"u_l", 1.0}, {"u_r", -1.0}, {"L", 2.0}};
    } else {
      p = {{"preset", "spherical"}, {"N", N}, {"T", T}, {"n", 3}, {"phi0", 1.0}, {"e0", 0.01}, {"u_delta0", -0.5},
           {"t_end", T}, {"r_lo", 1.0}, {"r_hi", 3.0},
           {"inner", {{"kind", "constant"}, {"rho", 0.0}, {"u", 0.0}}},
           {"outer", {{"kind", "free-flow"}, {"rho0", "r^-2"}, {"u0", "-1"}, {"r_lo", 1.0}, {"r_hi", 3.0}}}};
    }
    return run_inline(orc_c, "oracle", {{"kind", "oracle"}, {"name", "oracle-" + preset}, {"problem", p}});
  }
  if (*weak) {
    if (!weak_c.config.empty()) return run_config(weak_c, "weakcheck");
    if (solution.empty()) {
      std::cerr << "dshock weakcheck: --config or --solution is required\n";
      return kExitSchema;
    }
    const json p = {{"solution", fs::absolute(solution).string()}, {"levels", levels}};
    return run_inline(weak_c, "weakcheck", {{"kind", "weakcheck"}, {"name", "weakcheck"}, {"problem", p}});
  }
  return kExitSchema;
}
