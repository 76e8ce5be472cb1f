#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "heavenly/io.hpp"
#include "support.hpp"

using namespace heavenly;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return HEAVENLY_CLI_PATH; }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("heavenly-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

io::SolutionDocument sample_document() {
  io::SolutionDocument doc;
  doc.family = families::FamilyId::HcmaDilat;
  families::HcmaDilatParams p{complex(0.2, 0.1), complex(0.05, -0.02),
                              {0.3, 0.9, 1.7, 2.6},
                              {1.0, -0.5, 0.75, 0.25}};
  doc.params = p;
  doc.potential = families::build_solution(doc.family, doc.params);
  doc.provenance = {"fixture"};
  return doc;
}

}  // namespace

TEST_CASE("solution documents round-trip losslessly") {
  const io::SolutionDocument doc = sample_document();
  const io::SolutionDocument back = io::document_from_json(io::to_json(doc));
  REQUIRE(back.potential.terms.size() == doc.potential.terms.size());
  for (size_t t = 0; t < doc.potential.terms.size(); ++t) {
    CHECK(back.potential.terms[t].amplitude == doc.potential.terms[t].amplitude);
    CHECK(back.potential.terms[t].exponents == doc.potential.terms[t].exponents);
  }
  CHECK(io::rederive_mismatch(back) < 1e-15);
}

TEST_CASE("rederive mismatch catches tampering") {
  io::SolutionDocument doc = sample_document();
  CHECK(io::rederive_mismatch(doc) < 1e-15);
  doc.potential.terms[1].exponents[2] += 1e-6;
  CHECK(io::rederive_mismatch(doc) > 1e-8);
}

TEST_CASE("malformed documents raise input errors") {
  CHECK_THROWS_AS(io::document_from_json("{ not json"), Error);
  CHECK_THROWS_AS(io::document_from_json("{\"schema_version\": 9}"), Error);
}

TEST_CASE("config parsing and environment overlay") {
  const io::RunConfig cfg = io::config_from_json("{\"seed\": 7, \"points\": 12}");
  CHECK(cfg.seed == 7);
  CHECK(cfg.points == 12);
  CHECK_THROWS_AS(io::config_from_json("{\"tol_residual\": -1}"), Error);

  setenv("HEAVENLY_SEED", "99", 1);
  setenv("HEAVENLY_TOL_RESIDUAL", "1e-7", 1);
  io::RunConfig env_cfg;
  io::apply_env(env_cfg);
  CHECK(env_cfg.seed == 99);
  CHECK(env_cfg.tol_residual == 1e-7);
  unsetenv("HEAVENLY_SEED");
  unsetenv("HEAVENLY_TOL_RESIDUAL");
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1e-300, 12345.6789, -2.2250738585072014e-308}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("cli: build, verify, killing pipeline with exit codes") {
  TempDir tmp;
  const fs::path doc = tmp.path / "doc.json";
  const fs::path log = tmp.path / "log.txt";

  // build a four-term dilatational document
  int rc = run_cli("build hcma-dilat --a 0.2+0.1i --b 0.05 "
                   "--mu 0.3,0.9,1.7,2.6 --c 1,1,1,1 --out " +
                       doc.string(),
                   log);
  CHECK(rc == 0);
  CHECK(fs::exists(doc));

  // verify passes with exit 0 and writes a report
  const fs::path rep1 = tmp.path / "rep1.json";
  rc = run_cli("verify " + doc.string() + " --points 40 --seed 5 --out " +
                   rep1.string(),
               log);
  CHECK(rc == 0);

  // identical config and seed produce byte-identical reports, and the
  // worker count does not change the merged result
  const fs::path rep2 = tmp.path / "rep2.json";
  rc = run_cli("verify " + doc.string() + " --points 40 --seed 5 --out " +
                   rep2.string(),
               log);
  CHECK(rc == 0);
  CHECK(slurp(rep1) == slurp(rep2));
  const fs::path rep3 = tmp.path / "rep3.json";
  rc = run_cli("verify " + doc.string() + " --points 40 --seed 5 --workers 3 --out " +
                   rep3.string(),
               log);
  CHECK(rc == 0);
  // the worker count appears in the config echo; the merged residual rows
  // must be identical
  auto j1 = nlohmann::json::parse(slurp(rep1));
  auto j3 = nlohmann::json::parse(slurp(rep3));
  j1.erase("config");
  j3.erase("config");
  CHECK(j1 == j3);

  // killing verdict on the generic document
  rc = run_cli("killing " + doc.string(), log);
  CHECK(rc == 0);
  CHECK(slurp(log).find("no Killing vectors guaranteed: true") != std::string::npos);

  // hand-edited exponent fails verification with exit 1
  io::SolutionDocument tampered = io::load_document(doc);
  tampered.potential.terms[0].exponents[0] += 1e-4;
  const fs::path bad = tmp.path / "bad.json";
  io::save_document(tampered, bad);
  rc = run_cli("verify " + bad.string() + " --points 10 --seed 5", log);
  CHECK(rc == 1);

  // truncated file is an input error, exit 2
  const fs::path trunc = tmp.path / "trunc.json";
  std::ofstream(trunc) << io::to_json(io::load_document(doc)).substr(0, 40);
  rc = run_cli("verify " + trunc.string(), log);
  CHECK(rc == 2);

  // degenerate parameters are an input error, exit 2
  rc = run_cli("build hcma-dilat --a 1 --b 0 --mu 1.5707963267948966 --c 1", log);
  CHECK(rc == 2);
  CHECK(slurp(log).find("DegenerateTerm") != std::string::npos);

  // three-term document: killing verdict false, exit 1
  const fs::path small = tmp.path / "small.json";
  rc = run_cli("build hcma-dilat --a 0.2+0.1i --b 0 --mu 0.3,0.9,1.7 --c 1,1,1 "
               "--out " +
                   small.string(),
               log);
  CHECK(rc == 0);
  rc = run_cli("killing " + small.string(), log);
  CHECK(rc == 1);
}

TEST_CASE("cli: export-grid shape and determinism") {
  TempDir tmp;
  const fs::path doc = tmp.path / "doc.json";
  const fs::path log = tmp.path / "log.txt";
  int rc = run_cli("build heaven-zero --beta 0.5,0.6 --gamma 0.45,-0.55 --c 1,1 "
                   "--out " +
                       doc.string(),
                   log);
  REQUIRE(rc == 0);

  const fs::path g1 = tmp.path / "g1.csv";
  rc = run_cli("export-grid " + doc.string() +
                   " --axes t,r --range -0.5:0.5,-0.5:0.5 --resolution 8 --out " +
                   g1.string(),
               log);
  CHECK(rc == 0);
  const std::string text = slurp(g1);
  CHECK(std::count(text.begin(), text.end(), '\n') == 65);  // header + 64 rows

  const fs::path g2 = tmp.path / "g2.csv";
  rc = run_cli("export-grid " + doc.string() +
                   " --axes t,r --range -0.5:0.5,-0.5:0.5 --resolution 8 --out " +
                   g2.string(),
               log);
  CHECK(rc == 0);
  CHECK(slurp(g2) == text);

  // unknown axis is an input error
  rc = run_cli("export-grid " + doc.string() + " --axes q,r", log);
  CHECK(rc == 2);
}

TEST_CASE("cli: export-grid default resolution yields 64 x 64 rows") {
  TempDir tmp;
  const fs::path doc = tmp.path / "doc.json";
  const fs::path log = tmp.path / "log.txt";
  int rc = run_cli("build hcma-dilat --a 0.2+0.1i --b 0.05 --mu 0.3,0.9,1.7,2.6 "
                   "--c 1,1,1,1 --out " +
                       doc.string(),
                   log);
  REQUIRE(rc == 0);
  const fs::path grid = tmp.path / "grid.csv";
  rc = run_cli("export-grid " + doc.string() +
                   " --axes re_p,im_p --range -0.5:0.5,-0.5:0.5 --out " + grid.string(),
               log);
  CHECK(rc == 0);
  const std::string text = slurp(grid);
  CHECK(std::count(text.begin(), text.end(), '\n') == 64 * 64 + 1);
}

TEST_CASE("cli: metric and curvature commands run clean") {
  TempDir tmp;
  const fs::path doc = tmp.path / "doc.json";
  const fs::path log = tmp.path / "log.txt";
  int rc = run_cli("build hcma-dilat --a 0.2+0.1i --b 0.05 --mu 0.3,0.9,1.7,2.6 "
                   "--c 1,1,1,1 --out " +
                       doc.string(),
               log);
  REQUIRE(rc == 0);
  rc = run_cli("metric " + doc.string() + " --points 10 --seed 3", log);
  CHECK(rc == 0);
  rc = run_cli("curvature " + doc.string() + " --points 4 --seed 3 --workers 2", log);
  CHECK(rc == 0);
}

TEST_CASE("cli: symmetry-table passes") {
  TempDir tmp;
  const fs::path log = tmp.path / "log.txt";
  const int rc = run_cli("symmetry-table --points 10 --seed 8", log);
  CHECK(rc == 0);
  CHECK(slurp(log).find("64/64") != std::string::npos);
}
