#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "agcirc/agcirc.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(AGCIRC_BINARY) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("agcirc_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("check exit codes on the fixtures") {
  TempDir dir;
  const auto g1 = dir.write("g1.ag", agcirc::gen_fixture("G1"));
  const auto g2 = dir.write("g2.ag", agcirc::gen_fixture("G2"));
  const auto eps = dir.write("eps.ag", agcirc::gen_fixture("EPS"));
  CHECK(run("check " + g1).code == 1);
  CHECK(run("check " + g2).code == 0);
  CHECK(run("check " + eps).code == 0);
  for (const char* algo : {"fixpoint", "alternation", "oracle"}) {
    CHECK(run("check --algo " + std::string(algo) + " " + g1).code == 1);
    CHECK(run("check --algo " + std::string(algo) + " " + g2).code == 0);
  }
  CHECK(run("check --algo oracle --depth 1 " + g1).code == 3);
  CHECK(run("check --max-graphs 1 --algo fixpoint " + g1).code == 3);
}

TEST_CASE("check writes a JSON report") {
  TempDir dir;
  const auto g1 = dir.write("g1.ag", agcirc::gen_fixture("G1"));
  const auto r = run("check --json - " + g1);
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["runs"].size() == 3);
  CHECK(j["agreement"] == true);

  const auto path = dir.file("report.json");
  CHECK(run("check --json " + path + " " + g1).code == 1);
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in)["runs"][0]["witness"]["valid"] == true);
}

TEST_CASE("usage and parse errors exit with 2") {
  TempDir dir;
  CHECK(run("").code == 2);
  CHECK(run("check").code == 2);
  CHECK(run("check --algo nope x.ag").code == 2);
  CHECK(run("check " + dir.file("missing.ag")).code == 2);
  const auto bad = dir.write("bad.ag", "nonterminal S\nproduction p S -> ;\n");
  CHECK(run("check " + bad).code == 2);
  const auto r = run("validate " + bad);
  CHECK(r.code == 2);
  CHECK(r.out.find("E_SYNTAX") != std::string::npos);
}

TEST_CASE("validate reports warnings") {
  TempDir dir;
  const auto g = dir.write("w.ag", "nonterminal S\nnonterminal X\nproduction p: S -> ;\nproduction q: X -> X\n");
  const auto r = run("validate " + g);
  CHECK(r.code == 0);
  CHECK(r.out.find("W_NONPRODUCTIVE") != std::string::npos);
}

TEST_CASE("witness subcommand") {
  TempDir dir;
  const auto g1 = dir.write("g1.ag", agcirc::gen_fixture("G1"));
  const auto r = run("witness " + g1);
  CHECK(r.code == 0);
  CHECK(r.out.find("tree: S:p1(A:p2)") != std::string::npos);
  CHECK(r.out.find("cycle: 0.1:i -> 0.1:s -> 0.1:i") != std::string::npos);
  CHECK(run("witness " + dir.write("g2.ag", agcirc::gen_fixture("G2"))).code == 2);
}

TEST_CASE("gen output parses back") {
  CHECK(run("gen fixture G1").out == agcirc::gen_fixture("G1"));
  CHECK(run("gen expio 3 --trigger").out == agcirc::gen_expio(3, true));
  CHECK(run("gen random --seed 11").out == agcirc::gen_random(11));
  agcirc::RandomBounds b;
  b.max_nonterminals = 5;
  b.edge_density = 0.5;
  CHECK(run("gen random --seed 11 --max-nonterminals 5 --density 0.5").out == agcirc::gen_random(11, b));
  CHECK(run("gen expio 0").code == 2);
}

TEST_CASE("stdin input") {
  TempDir dir;
  const auto g1 = dir.write("g1.ag", agcirc::gen_fixture("G1"));
  CHECK(run("check --algo fixpoint - < " + g1).code == 1);
}
