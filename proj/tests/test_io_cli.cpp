#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qpwave/cli.hpp"
#include "qpwave/io.hpp"
#include "qpwave/kdv.hpp"
#include "qpwave/meannorms.hpp"

using namespace qpwave;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("qpwave_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("json parse errors carry line and column") {
  try {
    parse_json("{\n  \"a\": [1, 2,\n}", "f.json");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("f.json") != std::string::npos);
    CHECK(what.find("3:") != std::string::npos);
  }
}

TEST_CASE("scalar and lattice json round trips") {
  for (const QScalar& q : {QScalar(7), QScalar(Rational(-3, 4)), QScalar::exact(Rational(1, 2), Rational(-5, 3), 2),
                           QScalar::approx(0.125)}) {
    CHECK(qscalar_from_json(to_json(q)) == q);
  }
  CHECK(qscalar_from_json(parse_json(R"({"a": "1/3", "b": 2, "d": 5})")) == QScalar::exact(Rational(1, 3), 2, 5));
  const auto s = LatticeSpec({{QScalar(1), QScalar::sqrt_of(2)}, {QScalar::sqrt_of(3)}});
  CHECK(lattice_from_json(to_json(s)) == s);
  CHECK(lattice_from_json(parse_json(R"("sqrt2")")) == LatticeSpec::sqrt2());
  CHECK_THROWS_AS(lattice_from_json(parse_json(R"({"d": 2, "nu": [1], "omega": [[1]]})")), ValidationError);
}

TEST_CASE("polynomial and field json round trips") {
  std::mt19937_64 rng(131);
  const auto f = oracle::random_poly(LatticeSpec::sqrt2(), 9, 4, rng);
  CHECK(trigpoly_from_json(to_json(f)) == f);
  const auto u = RealField::from_half(LatticeSpec::sqrt2(), {{{1, 0}, Complex(0.25, -1)}, {{0, 2}, 2.0}});
  const json j = to_json(u);
  CHECK(j["hermitian"] == true);
  CHECK(j["coeffs"].size() == 2);
  CHECK(realfield_from_json(j).poly() == u.poly());
  CHECK_THROWS_AS(trigpoly_from_json(parse_json(R"({"spec": "sqrt2", "coeffs": [{"n": [1], "re": 1}]})")),
                  DimensionError);
}

TEST_CASE("solver config json rejects unknown keys") {
  const auto cfg = solver_config_from_json(parse_json(R"({"dt": 0.002, "T": 0.5, "sign": -1, "trunc_center": [1, 0]})"));
  CHECK(cfg.dt == 0.002);
  CHECK(cfg.sign == -1);
  REQUIRE(cfg.trunc_center);
  CHECK(*cfg.trunc_center == LatticeIndex{1, 0});
  const auto back = solver_config_from_json(to_json(cfg));
  CHECK(back.T == 0.5);
  CHECK_THROWS_AS(solver_config_from_json(parse_json(R"({"dtt": 1})")), ValidationError);
}

TEST_CASE("scan csv embeds config") {
  ScanReport r;
  r.name = "x";
  r.config = {{"k", 1}};
  r.rows = {{2, 4, 3, 5}, {4, 16, 15, 17}};
  r.refit();
  const auto csv = scan_csv(r);
  CHECK(csv.rfind("# config: {", 0) == 0);
  CHECK(csv.find("\"k\":1") != std::string::npos);
  CHECK(csv.find("# config_hash: " + r.config_hash()) != std::string::npos);
  CHECK(csv.find("param,value,lo_ci,hi_ci\n2,4,3,5\n4,16,15,17\n") != std::string::npos);
  const auto fit = fit_json(r);
  CHECK(fit["slope"].get<double>() == doctest::Approx(2.0));
  CHECK(fit["config_hash"].get<std::string>().size() == 16);
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("cli predict-exponent") {
  auto r = cli({"predict-exponent", "--p", "4", "--d", "1", "--b", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.25\n");
  r = cli({"predict-exponent", "--p", "6", "--alpha"});
  CHECK(r.out.find("s* 1/3") != std::string::npos);
  CHECK(r.out.find("alpha 0") != std::string::npos);
  CHECK(cli({"predict-exponent", "--p", "inf", "--b", "0"}).out == "0.5\n");
  CHECK(cli({"predict-exponent", "--p", "2"}).code == kExitValidation);
}

TEST_CASE("cli norm and mixed-norm") {
  TempDir tmp;
  const auto z = LatticeSpec::one_dim({QScalar(1)});
  const auto f = TrigPoly::from_terms(z, {{{0}, 1.0}, {{1}, 1.0}});
  write_text_file(tmp.file("f.json"), to_json(f).dump());
  auto r = cli({"norm", "--p", "4", "--input", tmp.file("f.json")});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(std::pow(6.0, 0.25)).epsilon(1e-14));
  r = cli({"norm", "--p", "4", "--numeric", "--window", "31.41592653589793", "--input", tmp.file("f.json")});
  CHECK(std::stod(r.out) == doctest::Approx(std::pow(6.0, 0.25)).epsilon(1e-10));
  r = cli({"mixed-norm", "--p", "4", "--T", "2", "--symbol", "none", "--input", tmp.file("f.json"),
           "--output", tmp.file("m.json")});
  CHECK(std::stod(r.out) == doctest::Approx(std::pow(12.0, 0.25)).epsilon(1e-14));
  CHECK(read_json_file(tmp.file("m.json"))["config"]["T"] == 2.0);
  write_text_file(tmp.file("bad.json"), "{\"spec\": \"sqrt2\",\n \"coeffs\": [}");
  r = cli({"norm", "--input", tmp.file("bad.json")});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("2:") != std::string::npos);
  CHECK(cli({"norm", "--input", tmp.file("missing.json")}).code == kExitValidation);
}

TEST_CASE("cli count, gaps, extremizer") {
  const auto want = oracle::count_half_open({1.0L, std::sqrt(2.0L)}, 8, 0.0L, 1.0L);
  auto r = cli({"count", "--omega", "sqrt2", "--C", "8", "--interval", "0", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == std::to_string(want) + "\n");
  r = cli({"count", "--omega", "1,sqrt2", "--C", "8", "--interval", "5", "5", "--closed"});
  CHECK(r.out == "1\n");
  CHECK(cli({"count", "--C", "3", "--interval", "0", "1"}).code == kExitValidation);
  CHECK(cli({"count", "--C", "64", "--interval", "0", "1", "--budget", "100"}).code == kExitBudget);
  r = cli({"gaps", "--omega", "sqrt2", "--H", "16"});
  CHECK(r.out.find("17-12*sqrt(2)") != std::string::npos);
  r = cli({"extremizer", "--C", "8"});
  CHECK(trigpoly_from_json(parse_json(r.out)).size() == 8);
  CHECK(cli({"extremizer", "--omega", "1", "--C", "4"}).code == kExitFailure);
  CHECK(cli({"count", "--omega", "1,2", "--C", "4", "--interval", "0", "1"}).code == 0);
  CHECK(cli({"frobnicate"}).code == kExitValidation);
}

TEST_CASE("cli nls-run and kdv-run") {
  TempDir tmp;
  const auto s = LatticeSpec::sqrt2();
  write_text_file(tmp.file("u.json"), to_json(TrigPoly::mode(s, {1, 0}, 0.5)).dump());
  write_text_file(tmp.file("run.json"), R"({"T": 0.01, "dt": 0.001, "trunc_height": 4})");
  auto r = cli({"nls-run", "--input", tmp.file("u.json"), "--run", tmp.file("run.json"), "--output",
                tmp.file("trace.csv"), "--state-out", tmp.file("state.json")});
  CHECK(r.code == 0);
  const auto csv = read_text_file(tmp.file("trace.csv"));
  CHECK(csv.rfind("# config:", 0) == 0);
  CHECK(csv.find("t,mass,hs_norm,trunc_loss,picard_iters,contraction") != std::string::npos);
  const auto state = trigpoly_from_json(read_json_file(tmp.file("state.json")));
  const double lam = 1.0;
  CHECK(std::abs(state.coeff({1, 0}) - 0.5 * std::polar(1.0, -0.01 * (lam * lam + 0.25))) < 1e-10);

  write_text_file(tmp.file("v.json"), to_json(RealField::from_half(s, {{{1, 0}, 0.1}, {{0, 1}, 0.2}})).dump());
  r = cli({"kdv-run", "--input", tmp.file("v.json"), "--run", tmp.file("run.json"), "--state-out",
           tmp.file("kstate.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("mass drift") != std::string::npos);
  CHECK_NOTHROW(realfield_from_json(read_json_file(tmp.file("kstate.json"))));
  write_text_file(tmp.file("badrun.json"), R"({"T": 0.01, "speed": 3})");
  CHECK(cli({"nls-run", "--input", tmp.file("u.json"), "--run", tmp.file("badrun.json")}).code == kExitValidation);
}

TEST_CASE("cli scans, bands and config files") {
  TempDir tmp;
  auto r = cli({"picard-scan", "--C", "4", "8", "16", "--t", "0.01", "--output", tmp.file("p")});
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.file("p.csv")));
  CHECK(read_json_file(tmp.file("p.json")).contains("slope"));
  CHECK(cli({"picard-scan", "--C", "4", "8", "16", "--band", "10", "11"}).code == kExitScanBand);
  r = cli({"strichartz-scan", "--C", "4", "8", "--T", "0.1", "--trials", "2", "--support-cap", "16"});
  CHECK(r.code == 0);
  CHECK(r.out.find("strichartz-extremizer") != std::string::npos);
  CHECK(cli({"bilinear-scan", "--C1", "1", "2", "4", "--C2", "8", "--trials", "2"}).code == 0);
  CHECK(cli({"biortho-check", "--delta", "0.01", "--grid", "0.01"}).code == 0);
  CHECK(cli({"biortho-check", "--delta", "0.01", "--grid", "0.01", "--bound", "0.01"}).code == kExitScanBand);
  CHECK(cli({"averaged-check", "--C", "4", "8", "--trials", "2"}).code == 0);

  write_text_file(tmp.file("cfg.json"), R"({"C": [4, 8, 16], "t": 0.01, "band": [1.0, 4.0]})");
  const auto a = cli({"picard-scan", "--config", tmp.file("cfg.json")});
  CHECK(a.code == 0);
  const auto b = cli({"picard-scan", "--config", tmp.file("cfg.json")});
  CHECK(a.out == b.out);
  write_text_file(tmp.file("cfg2.json"), R"({"C": [4, 8], "colour": 1})");
  CHECK(cli({"picard-scan", "--config", tmp.file("cfg2.json")}).code == kExitValidation);
}

TEST_CASE("cli binary exit codes") {
  const char* exe = std::getenv("QPWAVE_CLI");
  if (exe == nullptr) return;
  const std::string base = std::string("\"") + exe + "\"";
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(base + " predict-exponent --p 4") == 0);
  CHECK(status(base + " predict-exponent --p 1") == 2);
  CHECK(status(base + " count --C 64 --interval 0 1 --budget 10") == 3);
  CHECK(status(base + " biortho-check --delta 0.01 --grid 0.01 --bound 0.001") == 4);
}
