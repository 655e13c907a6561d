#include "doctest.h"
#include "support.hpp"
#include "oracle_values.hpp"

#include "dshock/cli.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace dshock;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dshock_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  double at(std::size_t row, const std::string& col) const {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == col) return rows.at(row).at(j);
    FAIL("missing column " << col);
    return 0.0;
  }
};

Csv read_csv(const fs::path& p) {
  Csv out;
  std::ifstream f(p);
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      if (first) out.header.push_back(cell);
      else row.push_back(std::stod(cell));
    }
    if (!first) out.rows.push_back(row);
    first = false;
  }
  return out;
}

int run_binary(const std::string& args) {
  const int status = std::system((std::string(DSHOCK_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json planar(const Vec& nu, double rm, const Vec& Um, double rp, const Vec& Up) {
  return json{{"kind", "planar"},
              {"name", "planar"},
              {"flux", {{"kind", "standard"}}},
              {"seed", 1},
              {"problem",
               {{"nu", std::vector<double>(nu.data(), nu.data() + nu.size())},
                {"rho_minus", rm},
                {"U_minus", std::vector<double>(Um.data(), Um.data() + Um.size())},
                {"rho_plus", rp},
                {"U_plus", std::vector<double>(Up.data(), Up.data() + Up.size())},
                {"L", 5.0},
                {"t_end", 1.0},
                {"samples", 5}}},
              {"checks", {{"balance", true}}}};
}

cli::RunResult run_json(const json& j, const fs::path& out, bool strict = false) {
  cli::RunOptions o;
  o.out = out;
  o.strict = strict;
  return cli::run(j, o);
}

}  // namespace

TEST_CASE("number formatting and hashing") {
  CHECK(cli::format_number(1.0) == "1.0000000000000000e+00");
  CHECK(cli::format_number(-0.1) == "-1.0000000000000001e-01");
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(Errc::schema) == cli::kExitSchema);
  CHECK(cli::exit_code_for(Errc::parse) == cli::kExitSchema);
  CHECK(cli::exit_code_for(Errc::invalid_parameter) == cli::kExitSchema);
  CHECK(cli::exit_code_for(Errc::no_delta_shock) == cli::kExitCheckFailed);
  CHECK(cli::exit_code_for(Errc::ambiguous_root) == cli::kExitCheckFailed);
  CHECK(cli::exit_code_for(Errc::audit_invalid) == cli::kExitCheckFailed);
  CHECK(cli::exit_code_for(Errc::stiffness) == cli::kExitNumeric);
  CHECK(cli::exit_code_for(Errc::caustic) == cli::kExitNumeric);
}

TEST_CASE("malformed JSON exits with 2") {
  const fs::path dir = scratch("malformed");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "bad.json");
    f << "{\"kind\": \"riemann1d\", ";
  }
  CHECK(run_binary("run --config " + (dir / "bad.json").string() + " --out " + (dir / "out").string()) == 2);
  CHECK(fs::exists(dir / "out" / "report.json"));
}

TEST_CASE("unknown keys and bad values are schema errors") {
  json j = cli::load_json(fs::path(DSHOCK_SCENARIO_DIR) / "symmetric_riemann.json");
  json extra = j;
  extra["problem"]["colour"] = "blue";
  CHECK_ERRC(run_json(extra, scratch("extra")), Errc::schema);
  json neg = j;
  neg["problem"]["rho_l"] = -1.0;
  CHECK_THROWS_AS(run_json(neg, scratch("neg")), Error);
  CHECK(run_binary("run --config /nonexistent/file.json --out " + scratch("missing").string()) == 2);
  CHECK(run_binary("frobnicate") == 2);
}

TEST_CASE("entropy-violating Riemann data exit with 4") {
  const fs::path out = scratch("rarefaction");
  CHECK(run_binary("riemann --rho-l 1 --rho-r 1 --u-l -1 --u-r 1 --t-end 1 --out " + out.string()) == 4);
  auto report = json::parse(slurp(out / "report.json"));
  CHECK(report["failed_condition"].get<std::string>().find("entropy") != std::string::npos);
  CHECK(report["exit_code"] == 4);
}

TEST_CASE("riemann subcommand writes the trajectory columns") {
  const fs::path out = scratch("riemann_flags");
  CHECK(run_binary("riemann --rho-l 4 --rho-r 1 --u-l 1 --u-r -1 --t-end 1 --out " + (out / "traj.csv").string()) == 0);
  auto csv = read_csv(out / "traj.csv");
  CHECK(csv.header == std::vector<std::string>{"t", "phi", "u_delta", "e", "mass_deficit", "momentum_deficit"});
  CHECK(csv.at(csv.rows.size() - 1, "u_delta") == doctest::Approx(oracle::kAsymSpeed));
  CHECK(csv.at(csv.rows.size() - 1, "mass_deficit") == doctest::Approx(oracle::kAsymMassDeficit));
}

TEST_CASE("runs are deterministic and the manifest matches") {
  const fs::path scen = fs::path(DSHOCK_SCENARIO_DIR) / "asymmetric_riemann.json";
  json j = cli::load_json(scen);
  j["checks"]["weakcheck"] = json{{"levels", 5}, {"count", 4}};
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  auto ra = run_json(j, a), rb = run_json(j, b);
  CHECK(ra.exit_code == 0);
  CHECK(ra.files == rb.files);
  for (const auto& f : ra.files) {
    if (f.size() > 4 && f.substr(f.size() - 4) == ".csv") CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
  }
  auto manifest = json::parse(slurp(a / "manifest.json"));
  REQUIRE(manifest["files"].is_array());
  for (const auto& e : manifest["files"]) {
    const fs::path p = a / e["path"].get<std::string>();
    CHECK(e["sha256"].get<std::string>() == cli::sha256_file(p));
    CHECK(e["bytes"].get<std::uintmax_t>() == fs::file_size(p));
  }
  auto bal = read_csv(a / "balance.csv");
  CHECK(bal.header == std::vector<std::string>{"t", "M", "m", "P_1", "p_1", "W", "w", "sum_mass", "sum_mom_1",
                                               "sum_energy", "mdot", "entropy_strict"});
}

TEST_CASE("planar run with equal tangential velocity reduces to the 1-D case") {
  const Vec nu = vec({1, 0});
  const fs::path out = scratch("planar_eq");
  auto res = run_json(planar(nu, 4, vec({1, 0}), 1, vec({-1, 0})), out);
  CHECK(res.exit_code == 0);
  CHECK(res.report["tangential_residual_max"].get<double>() == 0.0);
  auto traj = read_csv(out / "trajectory.csv");
  const std::size_t last = traj.rows.size() - 1;
  CHECK(traj.at(last, "u_delta") == doctest::Approx(oracle::kAsymSpeed).epsilon(1e-14));
  CHECK(traj.at(last, "e") == doctest::Approx(oracle::kAsymMassDeficit).epsilon(1e-14));
}

TEST_CASE("tangential jump is reported") {
  const fs::path out = scratch("planar_tan");
  auto res = run_json(planar(vec({1, 0}), 2, vec({1, 0.5}), 1, vec({-1, -0.25})), out);
  CHECK(res.report["tangential_residual_max"].get<double>() ==
        doctest::Approx(std::fabs(oracle::kTangentialResidual)).epsilon(1e-12));
  auto traj = read_csv(out / "trajectory.csv");
  CHECK(traj.at(0, "u_delta") == doctest::Approx(oracle::kTangentialSpeed).epsilon(1e-14));
}

TEST_CASE("planar runs are covariant under rotations") {
  const double th = 0.7;
  Mat R(2, 2);
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Vec nu = vec({1, 0}), Um = vec({1, 0}), Up = vec({-1, 0});
  const fs::path a = scratch("rot_a"), b = scratch("rot_b");
  run_json(planar(nu, 4, Um, 1, Up), a);
  run_json(planar(R * nu, 4, R * Um, 1, R * Up), b);
  auto ta = read_csv(a / "trajectory.csv"), tb = read_csv(b / "trajectory.csv");
  auto ba = read_csv(a / "balance.csv"), bb = read_csv(b / "balance.csv");
  REQUIRE(ta.rows.size() == tb.rows.size());
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    for (const char* c : {"phi", "u_delta", "e", "mass_deficit"}) CHECK(std::fabs(ta.at(i, c) - tb.at(i, c)) <= 1e-12);
    const Vec ma = vec({ta.at(i, "momentum_deficit_1"), ta.at(i, "momentum_deficit_2")});
    const Vec mb = vec({tb.at(i, "momentum_deficit_1"), tb.at(i, "momentum_deficit_2")});
    CHECK((R * ma - mb).norm() <= 1e-12);
  }
  for (std::size_t i = 0; i < ba.rows.size(); ++i) {
    for (const char* c : {"M", "m", "W", "w", "sum_mass", "sum_energy"})
      CHECK(std::fabs(ba.at(i, c) - bb.at(i, c)) <= 1e-12 * std::max(1.0, std::fabs(ba.at(i, c))));
    const Vec Pa = vec({ba.at(i, "sum_mom_1"), ba.at(i, "sum_mom_2")});
    const Vec Pb = vec({bb.at(i, "sum_mom_1"), bb.at(i, "sum_mom_2")});
    CHECK((R * Pa - Pb).norm() <= 1e-12 * std::max(1.0, Pa.norm()));
  }
}

TEST_CASE("time-reversed scenario fails its checks") {
  cli::RunOptions o;
  o.out = scratch("reversed");
  json j = cli::load_json(fs::path(DSHOCK_SCENARIO_DIR) / "time_reversed.json");
  j["checks"]["weakcheck"] = false;
  auto res = cli::run(j, o);
  CHECK(res.exit_code == 4);
  CHECK_FALSE(res.failures.empty());
}

TEST_CASE("strict mode promotes advisories") {
  json j = cli::load_json(fs::path(DSHOCK_SCENARIO_DIR) / "symmetric_riemann.json");
  j["checks"]["weakcheck"] = json{{"levels", 2}, {"count", 2}};
  j["checks"]["energy_inequality"] = false;
  j["tolerances"] = json{{"min_weak_order", 50.0}, {"tol_weak", 1.0}};
  auto relaxed = run_json(j, scratch("advisory"));
  CHECK(relaxed.exit_code == 0);
  CHECK_FALSE(relaxed.report["advisories"].empty());
  auto strict = run_json(j, scratch("advisory_strict"), true);
  CHECK(strict.exit_code == 4);
}

TEST_CASE("geometry suite scenario") {
  cli::RunOptions o;
  o.out = scratch("geom");
  auto res = cli::run_file(fs::path(DSHOCK_SCENARIO_DIR) / "geom_suite.json", o);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(o.out / "curvature.csv"));
  CHECK(fs::exists(o.out / "transport.csv"));
}
