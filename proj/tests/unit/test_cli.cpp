#include <cmath>
#include <sstream>

#include "casimir/cli.hpp"
#include "casimir/errors.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace casimir;
using namespace casimir::cli;

namespace {

Analysis analyze_text(const std::string& text, std::vector<Diagnostic>* parse_diags = nullptr) {
  std::vector<Diagnostic> diags;
  const Config cfg = Config::parse(text, "mem.ini", CASIMIR_TEST_DATA, diags);
  Analysis a = analyze(cfg);
  if (parse_diags) *parse_diags = diags;
  a.diagnostics.insert(a.diagnostics.begin(), diags.begin(), diags.end());
  return a;
}

std::string csv_of(const SweepSpec& spec) {
  std::ostringstream os;
  write_csv(run(spec), os);
  return os.str();
}

const char* kIdeal = R"(
[run]
route = lifshitz
[geometry]
gap_m = 1e-6
[models]
left = perfect
right = perfect
)";

}  // namespace

TEST_CASE("grids") {
  CHECK(parse_grid("1e-6") == std::vector<double>{1e-6});
  CHECK(parse_grid(" 1, 2 ,3") == std::vector<double>{1, 2, 3});
  const auto lin = parse_grid("range(0, 1, 5, lin)");
  CHECK(lin == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  const auto lg = parse_grid("range(1e-7, 1e-5, 3, log)");
  CHECK(lg[1] == doctest::Approx(1e-6).epsilon(1e-14));
  CHECK(lg[2] == 1e-5);
  CHECK_THROWS_AS(parse_grid(""), ConfigError);
  CHECK_THROWS_AS(parse_grid("range(1, 2, 0, lin)"), ConfigError);
  CHECK_THROWS_AS(parse_grid("range(-1, 2, 3, log)"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1, x"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1,,2"), ConfigError);
}

TEST_CASE("model strings round-trip through describe") {
  for (const char* text : {"vacuum", "perfect", "const(eps=2.5)", "plasma(omega_p=13700000000000000)",
                           "drude(omega_p=13700000000000000;gamma=53200000000000)",
                           "lorentz(omega_0=1;omega_p=2;gamma=3|omega_0=4;omega_p=5;gamma=6)"}) {
    CHECK(describe(parse_model(text, ".")) == text);
  }
  CHECK(describe(parse_model("Drude(omega_p = 1e16, gamma = 1e13)", ".")) ==
        "drude(omega_p=10000000000000000;gamma=10000000000000)");
  CHECK_THROWS_AS(parse_model("drude(omega_p=1e16)", "."), ConfigError);
  CHECK_THROWS_AS(parse_model("gold", "."), ConfigError);
  CHECK_THROWS_AS(parse_model("const(eps=2;mu=1)", "."), ConfigError);
  CHECK_THROWS_AS(parse_model("tabulated(file=missing.dat)", "."), ConfigError);
}

TEST_CASE("tabulated model from a data file") {
  const DielectricModel m = parse_model("tabulated(file=lorentz_line.dat;low=insulating)", CASIMIR_TEST_DATA);
  CHECK(std::holds_alternative<Tabulated>(m));
  CHECK(describe(m).find("low=insulating") != std::string::npos);
  CHECK(eval_eps_imag(m, 1.0) > 1.0);
}

TEST_CASE("regulators") {
  CHECK(modesum::describe(parse_regulator("zeta")) == "zeta");
  CHECK(modesum::describe(parse_regulator("expcutoff(xi_m=1e-8)")) == "expcutoff(xi_m=1e-08)");
  CHECK(modesum::describe(parse_regulator("euler_maclaurin(order=3)")) == "euler_maclaurin(order=3)");
  CHECK_THROWS_AS(parse_regulator("lattice"), ConfigError);
}

TEST_CASE("config syntax diagnostics carry positions") {
  std::vector<Diagnostic> diags;
  Config::parse("[run]\nroute lifshitz\n[bogus]\nx = 1\n[geometry\n", "mem.ini", ".", diags);
  REQUIRE(diags.size() == 3);
  CHECK(diags[0].pos.line == 2);
  CHECK(diags[1].pos.line == 3);
  CHECK(diags[2].pos.line == 5);
  CHECK(format_diagnostic(diags[0], "mem.ini").rfind("mem.ini:2:1: ", 0) == 0);
}

TEST_CASE("well-formed spec validates cleanly") {
  const Analysis a = analyze_text(kIdeal);
  CHECK(a.diagnostics.empty());
  REQUIRE(a.spec);
  CHECK(a.spec->gaps_m == std::vector<double>{1e-6});
}

TEST_CASE("negative gap gives one diagnostic naming the field") {
  const Analysis a = analyze_text("[run]\nroute = lifshitz\n[geometry]\ngap_m = -1e-6\n[models]\nleft = perfect\nright = perfect\n");
  REQUIRE(a.diagnostics.size() == 1);
  CHECK(a.diagnostics[0].key == "geometry.gap_m");
  CHECK(a.diagnostics[0].pos.line == 4);
  CHECK(!a.spec);
}

TEST_CASE("missing data file and negative tolerance give exactly two diagnostics") {
  const Analysis a = analyze_text(
      "[run]\nroute = lifshitz\ntolerance = -1e-6\n[geometry]\ngap_m = 1e-6\n[models]\n"
      "left = tabulated(file=absent.dat)\nright = perfect\n");
  REQUIRE(a.diagnostics.size() == 2);
  CHECK(a.diagnostics[0].key == "run.tolerance");
  CHECK(a.diagnostics[1].key == "models.left");
}

TEST_CASE("empty grid is a config error") {
  const Analysis a = analyze_text("[run]\nroute = lifshitz\n[geometry]\ngap_m =\n[models]\nleft = perfect\nright = perfect\n");
  REQUIRE(a.diagnostics.size() == 1);
  CHECK(a.diagnostics[0].message.find("empty") != std::string::npos);
}

TEST_CASE("lifshitz row for ideal mirrors at 1 um") {
  const Analysis a = analyze_text(kIdeal);
  const Table t = run(*a.spec);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.columns == std::vector<std::string>{"route", "d_m", "T_K", "model_left", "model_right", "pressure_Pa",
                                              "energy_Jm2", "err_est", "matsubara_n_used"});
  CHECK(std::get<double>(t.rows[0][5]) == doctest::Approx(-1.300e-3).epsilon(1e-3));
}

TEST_CASE("overrides") {
  std::vector<Diagnostic> diags;
  Config cfg = Config::parse(kIdeal, "mem.ini", ".", diags);
  cfg.set_override("geometry.gap_m=2e-6");
  cfg.set_override("geometry.temperature_K = 0, 300");
  CHECK_THROWS_AS(cfg.set_override("geometry.colour=1"), ConfigError);
  CHECK_THROWS_AS(cfg.set_override("nodot"), ConfigError);
  const Analysis a = analyze(cfg);
  REQUIRE(a.spec);
  CHECK(run(*a.spec).rows.size() == 2);
}

TEST_CASE("compare route: ideal mirrors agree") {
  const Analysis a = analyze_text(
      "[run]\nroute = compare\n[geometry]\ngap_m = 1e-7, 1e-6, 1e-5\n[toy]\nn_sites = 48\nsites_per_gap = 6\n"
      "omega_m_rad_s = 1e18\ng_rad_s = 1e18\n");
  REQUIRE(a.diagnostics.empty());
  const Table t = run(*a.spec);
  REQUIRE(t.rows.size() == 3);
  for (const auto& row : t.rows) {
    CHECK(std::abs(std::get<double>(row[7])) <= 1e-3);
    CHECK(std::get<double>(row[9]) < 0.0);
  }
}

TEST_CASE("output is independent of the worker count") {
  Analysis a = analyze_text(
      "[run]\nroute = lifshitz\n[geometry]\ngap_m = range(1e-7, 1e-5, 4, log)\ntemperature_K = 0, 300\n"
      "[models]\nleft = perfect, drude(omega_p=1.37e16;gamma=5.32e13)\nright = const(eps=3)\n");
  REQUIRE(a.spec);
  a.spec->threads = 1;
  const std::string one = csv_of(*a.spec);
  a.spec->threads = 3;
  CHECK(csv_of(*a.spec) == one);
  CHECK(std::count(one.begin(), one.end(), '\n') == 1 + 4 * 2 * 2);
}

TEST_CASE("each row reproduces itself from a single-point spec") {
  Analysis a = analyze_text(
      "[run]\nroute = lifshitz\n[geometry]\ngap_m = 3e-7, 2e-6\ntemperature_K = 77\n"
      "[models]\nleft = drude(omega_p=1.37e16;gamma=5.32e13)\nright = lorentz(omega_0=1e15;omega_p=2e15;gamma=1e13)\n");
  REQUIRE(a.spec);
  const Table all = run(*a.spec);
  for (const auto& row : all.rows) {
    char d[40], t[40];
    std::snprintf(d, sizeof d, "%.17g", std::get<double>(row[1]));
    std::snprintf(t, sizeof t, "%.17g", std::get<double>(row[2]));
    const Analysis single = analyze_text(std::string("[run]\nroute = lifshitz\n[geometry]\ngap_m = ") + d +
                                         "\ntemperature_K = " + t + "\n[models]\nleft = " +
                                         std::get<std::string>(row[3]) + "\nright = " + std::get<std::string>(row[4]) +
                                         "\n");
    REQUIRE(single.spec);
    const Table again = run(*single.spec);
    CHECK(again.rows[0] == row);
  }
}

TEST_CASE("modesum and toy routes") {
  const Analysis m = analyze_text(
      "[run]\nroute = modesum\n[geometry]\ngap_m = 1e-6\n[modesum]\ngeometry = em3d\n"
      "regulator = expcutoff(xi_m=1e-7)\n");
  REQUIRE(m.spec);
  const Table mt = run(*m.spec);
  CHECK(std::get<double>(mt.rows[0][5]) == doctest::Approx(-1.3001257724477534e-3).epsilon(1e-6));
  CHECK(std::get<double>(mt.rows[0][8]) > 0.0);  // surviving xi^-3 term
  CHECK(std::get<double>(mt.rows[0][9]) == 0.0);  // bulk removed

  const Analysis t = analyze_text(
      "[run]\nroute = toy\n[toy]\nn_sites = 64\nspacing_m = 1e-8\nomega_m_rad_s = 5.99584916e17\n"
      "g_rad_s = 2.99792458e18\nseparations_sites = range(4, 8, 3, lin)\n");
  REQUIRE(t.spec);
  const Table tt = run(*t.spec);
  REQUIRE(tt.rows.size() == 3);
  CHECK(std::get<std::int64_t>(tt.rows[1][7]) == 6);
  CHECK(std::get<double>(tt.rows[1][11]) < 0.0);
}

TEST_CASE("json output") {
  const Analysis a = analyze_text(kIdeal);
  std::ostringstream os;
  write_json(run(*a.spec), Route::kLifshitz, os);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc["route"] == "lifshitz");
  CHECK(doc["rows"][0]["model_left"] == "perfect");
  CHECK(doc["rows"][0]["pressure_Pa"].get<double>() == doctest::Approx(-1.300e-3).epsilon(1e-3));
}

TEST_CASE("exit codes by error class") {
  CHECK(exit_code(ConfigError("x")) == 2);
  CHECK(exit_code(DomainError("x")) == 2);
  CHECK(exit_code(ConvergenceError("x", 0, 0)) == 3);
  CHECK(exit_code(IllConditionedFitError("x", 1e20)) == 3);
  CHECK(exit_code(ModelInstabilityError("x", "defect 0")) == 4);
  CHECK(exit_code(std::runtime_error("x")) == 1);
}
