#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "charsieve/cli_runner.hpp"
#include "charsieve/config.hpp"
#include "charsieve/io.hpp"

using namespace charsieve;

namespace {

std::string tmpdir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / "charsieve_tests" / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("config round-trip: write-then-read is identity") {
  ExperimentConfig cfg = default_config();
  cfg.workers = 3;
  cfg.identities->grid = {50, 75};
  cfg.identities->seed = 99;
  cfg.asymptotics->regime = "thm24";
  cfg.sieve->T = 3.5;
  std::string text = cfg.serialize();
  ExperimentConfig back = ExperimentConfig::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.hash() == cfg.hash());
  CHECK(back.workers == 3);
  CHECK(back.identities->grid == std::vector<double>{50, 75});
  CHECK(back.asymptotics->regime == "thm24");
  CHECK(back.sieve->T == 3.5);
}

TEST_CASE("config parse errors are loud") {
  CHECK_THROWS_AS(ExperimentConfig::parse("[bogus]\nx = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[identities]\nnot_a_key = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("orphan = 1\n"), std::invalid_argument);
}

TEST_CASE("identities command: default small config exits 0") {
  ExperimentConfig cfg;
  cfg.identities = IdentitiesConfig{};
  cfg.identities->grid = {50};
  cfg.identities->pairs = 8;
  cfg.identities->lemma_cases = 40;
  cfg.out_dir = tmpdir("ident_ok");
  std::ostringstream log;
  CHECK(run_identities(cfg, log) == kExitOk);
  CHECK(std::filesystem::exists(cfg.out_dir + "/identities_delta.csv"));
  CHECK(std::filesystem::exists(cfg.out_dir + "/identities_lemmas.csv"));
}

TEST_CASE("identities command: modulus range below the support exits 2") {
  ExperimentConfig cfg;
  cfg.identities = IdentitiesConfig{};
  cfg.identities->grid = {0.4};  // no integer q with Psi(q/Q) > 0
  cfg.out_dir = tmpdir("ident_empty");
  std::ostringstream log;
  CHECK(run_identities(cfg, log) == kExitConfig);
  CHECK(log.str().find("empty") != std::string::npos);
}

TEST_CASE("identities command: zero tolerance forces the residual exit") {
  ExperimentConfig cfg;
  cfg.identities = IdentitiesConfig{};
  cfg.identities->grid = {50};
  cfg.identities->pairs = 4;
  cfg.identities->lemma_cases = 5;
  cfg.identities->tol_exact = 0.0;
  cfg.identities->tol_quad = 0.0;
  cfg.out_dir = tmpdir("ident_tol0");
  std::ostringstream log;
  CHECK(run_identities(cfg, log) == kExitResidual);
}

TEST_CASE("missing section exits 2") {
  ExperimentConfig cfg;  // nothing set
  std::ostringstream log;
  CHECK(run_identities(cfg, log) == kExitConfig);
  CHECK(run_asymptotics(cfg, log) == kExitConfig);
  CHECK(run_sieve(cfg, log) == kExitConfig);
}

TEST_CASE("asymptotics command writes CSV and JSON, single row for single Q") {
  ExperimentConfig cfg;
  cfg.asymptotics = AsymptoticsConfig{};
  cfg.asymptotics->grid = {40};
  cfg.out_dir = tmpdir("asym_single");
  std::ostringstream log;
  CHECK(run_asymptotics(cfg, log) == kExitOk);
  std::string csv = read_text_file(cfg.out_dir + "/asymptotics.csv");
  // header plus exactly one row
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  std::string js = read_text_file(cfg.out_dir + "/asymptotics.json");
  CHECK(js.find("\"rows\":[") != std::string::npos);
  CHECK(js.find("wall") == std::string::npos);  // no timing in canonical output
}

TEST_CASE("asymptotics rerun with identical config is byte-identical") {
  ExperimentConfig cfg;
  cfg.asymptotics = AsymptoticsConfig{};
  cfg.asymptotics->grid = {40, 80};
  cfg.out_dir = tmpdir("asym_rerun");
  std::ostringstream log;
  REQUIRE(run_asymptotics(cfg, log) == kExitOk);
  std::string a_csv = read_text_file(cfg.out_dir + "/asymptotics.csv");
  std::string a_js = read_text_file(cfg.out_dir + "/asymptotics.json");
  std::filesystem::remove(cfg.out_dir + "/asymptotics.csv");
  std::filesystem::remove(cfg.out_dir + "/asymptotics.json");
  REQUIRE(run_asymptotics(cfg, log) == kExitOk);
  CHECK(read_text_file(cfg.out_dir + "/asymptotics.csv") == a_csv);
  CHECK(read_text_file(cfg.out_dir + "/asymptotics.json") == a_js);
}

TEST_CASE("sieve command: zero trials yield an empty passing report") {
  ExperimentConfig cfg;
  cfg.sieve = SieveSuitesConfig{};
  cfg.sieve->trials = 0;
  cfg.out_dir = tmpdir("sieve_zero");
  std::ostringstream log;
  CHECK(run_sieve(cfg, log) == kExitOk);
  std::string csv = read_text_file(cfg.out_dir + "/sieve_report.csv");
  CHECK(csv.find("suite,") == 0);
}

TEST_CASE("sieve command: small run passes and reruns identically; seed echoed") {
  ExperimentConfig cfg;
  cfg.sieve = SieveSuitesConfig{};
  cfg.sieve->trials = 1;  // single trial: the argmax seed is the base seed
  cfg.sieve->N = 20;
  cfg.sieve->Q = 15;
  cfg.sieve->T = 1.0;
  cfg.sieve->seed = 4242;
  std::ostringstream log;
  cfg.out_dir = tmpdir("sieve_seed");
  CHECK(run_sieve(cfg, log) == kExitOk);
  CHECK(read_text_file(cfg.out_dir + "/sieve_report.csv").find("4242") != std::string::npos);

  cfg.sieve->trials = 6;
  cfg.out_dir = tmpdir("sieve_rerun");
  CHECK(run_sieve(cfg, log) == kExitOk);
  std::string a = read_text_file(cfg.out_dir + "/sieve_report.csv");
  std::filesystem::remove(cfg.out_dir + "/sieve_report.csv");
  CHECK(run_sieve(cfg, log) == kExitOk);
  CHECK(read_text_file(cfg.out_dir + "/sieve_report.csv") == a);
}

TEST_CASE("identities rerun is byte-identical") {
  ExperimentConfig cfg;
  cfg.identities = IdentitiesConfig{};
  cfg.identities->grid = {50};
  cfg.identities->pairs = 5;
  cfg.identities->lemma_cases = 10;
  std::ostringstream log;
  cfg.out_dir = tmpdir("ident_a");
  REQUIRE(run_identities(cfg, log) == kExitOk);
  std::string a = read_text_file(cfg.out_dir + "/identities_delta.csv");
  cfg.out_dir = tmpdir("ident_b");
  REQUIRE(run_identities(cfg, log) == kExitOk);
  CHECK(read_text_file(cfg.out_dir + "/identities_delta.csv") == a);
}
