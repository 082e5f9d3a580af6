#include "bstark/cli.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bstark;

namespace {

struct Run {
  int code;
  std::string report;
};

Run run(const std::string& cmd, const RunConfig& rc) {
  std::ostringstream out, log;
  int code = run_command(cmd, rc, out, log);
  return {code, out.str()};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config files and overrides") {
  auto dir = temp_dir("bstark_cli_config");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# default configuration\nd = 5\nconductor = 3\np=7\nell = 11\nprecision = 2\nworkers = 2\n";
  }
  RunConfig rc = read_config_file((dir / "run.cfg").string());
  CHECK(rc.d == 5);
  CHECK(rc.precision == 2);
  CHECK(rc.workers == 2);
  apply_config_key(rc, "precision", "4");
  CHECK(rc.precision == 4);
  CHECK_THROWS_AS(apply_config_key(rc, "prec", "4"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(rc, "p", "seven"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(rc, "workers", "0"), ConfigError);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "d 5\n";
  }
  CHECK_THROWS_AS(read_config_file((dir / "bad.cfg").string()), ConfigError);

  QuadField F(5);
  CHECK(parse_conductor(F, "(3)") == F.ideal(3));
  CHECK(parse_conductor(F, "1,1") == F.ideal(F.elt(1, 1)));
}

TEST_CASE("theta command") {
  RunConfig rc;
  Run r = run("theta", rc);
  CHECK(r.code == kExitOk);
  CHECK(r.report.find("engine: " + std::string(kEngineVersion)) != std::string::npos);
  CHECK(r.report.find("domain: ") != std::string::npos);
  CHECK(r.report.find("zeta_ST 4\n") != std::string::npos);
  CHECK(r.report.find("zeta_ST -4\n") != std::string::npos);
  CHECK(r.report.find("status: all checks passed") != std::string::npos);

  rc.conductor = "2";
  rc.p = 3;
  r = run("theta", rc);
  CHECK(r.code == kExitOk);
  CHECK(r.report.find("group_order: 1") != std::string::npos);
  CHECK(r.report.find("zeta_ST 0\n") != std::string::npos);

  RunConfig bad;
  bad.p = 5;
  r = run("theta", bad);
  CHECK(r.code == kExitConfig);
  CHECK(r.report.find("p_inert") != std::string::npos);
  bad = RunConfig{};
  bad.d = 10;  // class number two
  CHECK(run("theta", bad).code == kExitConfig);
  CHECK(run("nonsense", RunConfig{}).code == kExitConfig);
}

TEST_CASE("unit command: precision failure, determinism and cache") {
  RunConfig rc;
  rc.precision = 1;
  Run r = run("unit", rc);
  CHECK(r.code == kExitPrecision);
  CHECK(r.report.find("insufficient precision") != std::string::npos);
  CHECK(r.report.find("raise precision") != std::string::npos);

  auto dir = temp_dir("bstark_cli_cache");
  rc.precision = 2;
  rc.cache_dir = dir.string();
  Run cold = run("unit", rc);
  rc.workers = 3;
  Run warm = run("unit", rc);
  RunConfig nocache;
  nocache.precision = 2;
  Run plain = run("unit", nocache);
  CHECK(cold.report == warm.report);
  CHECK(cold.report == plain.report);
  CHECK(cold.report.find("v_identity: 2/2 classes") != std::string::npos);
  CHECK(!std::filesystem::is_empty(dir));

  rc.out = (dir / "report.txt").string();
  Run to_file = run("unit", rc);
  std::ifstream f(rc.out);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == to_file.report);
}

TEST_CASE("sku command") {
  Run r = run("sku", RunConfig{});
  CHECK(r.code == kExitOk);
  CHECK(r.report.find("generator: [4, -4]") != std::string::npos);
  CHECK(r.report.find("all in Z[G]") != std::string::npos);
  CHECK(r.report.find("equal to the local factor") != std::string::npos);
  RunConfig rc;
  rc.conductor = "6";
  r = run("sku", rc);
  CHECK(r.code == kExitOk);
}
