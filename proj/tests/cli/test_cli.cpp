// End-to-end checks of the command-line tool. The binary path comes from
// SUPERTREE_TW_BIN (set by CTest).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

std::string binary() {
  const char* env = std::getenv("SUPERTREE_TW_BIN");
  return env ? env : "build/tools/supertree_tw";
}

struct Run {
  int exit_code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fixture_dir() {
  fs::path dir = fs::temp_directory_path() / "sptw_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string fixture(const char* name, const char* content) {
  fs::path p = fixture_dir() / name;
  std::ofstream f(p);
  f << content;
  return p.string();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("binary exists") { REQUIRE(fs::exists(binary())); }

TEST_CASE("check verdicts and exit codes") {
  std::string conflict = fixture("conflict.nwk", "((a,b),(c,d));\n((a,c),(b,d));\n");
  std::string compat = fixture("compat.nwk", "((a,b),(c,d));\n((c,d),(e,f));\n");

  Run na = run("check " + conflict);
  CHECK(na.exit_code == 2);
  CHECK(na.out.find("verdict: not_applicable") != std::string::npos);
  CHECK(na.out.find("k4_witness:") != std::string::npos);

  Run inc = run("check --oracle " + conflict);
  CHECK(inc.exit_code == 1);
  CHECK(inc.out.find("verdict: incompatible") != std::string::npos);

  Run ok = run("check " + compat);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("verdict: compatible") != std::string::npos);
  CHECK(ok.out.find("supertree: ") != std::string::npos);
}

TEST_CASE("per-file batches report separately") {
  std::string a = fixture("batch_a.nwk", "((a,b),(c,d));\n");
  std::string b = fixture("batch_b.nwk", "((a,b),(c,d));\n((a,c),(b,d));\n");
  Run r = run("check --per-file " + a + " " + b);
  CHECK(r.exit_code == 2);  // worst verdict wins
  CHECK(r.out.find("input: " + a) != std::string::npos);
  CHECK(r.out.find("input: " + b) != std::string::npos);
}

TEST_CASE("output redirection") {
  std::string tree = fixture("one.nwk", "((a,b),(c,d));\n");
  fs::path out = fixture_dir() / "result.txt";
  fs::remove(out);
  Run r = run("supertree " + tree + " -o " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  std::string line;
  std::getline(f, line);
  CHECK(line == "((a,b),(c,d));");
}

TEST_CASE("stdin input") {
  std::string cmd = "printf '((a,b),(c,d));\\n' | " + binary() + " tw - 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  CHECK(out == "tw<=2: true\nk4_witness:\n");
}

TEST_CASE("gen writes parseable families with metadata") {
  for (const char* kind : {"conflicting_quartets", "compatible_tw3", "incompatible_tw3"}) {
    Run r = run(std::string("gen ") + kind + " 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find(std::string("# family: ") + kind) != std::string::npos);
  }
  CHECK(run("gen compatible_tw3 1").exit_code == 64);
  CHECK(run("gen no_such_kind 4").exit_code == 64);
}

TEST_CASE("json reports carry the documented keys only") {
  std::string compat = fixture("compat2.nwk", "((a,b),(c,d));\n((c,d),(e,f));\n");
  Run r = run("check --json " + compat);
  CHECK(r.exit_code == 0);
  for (const char* key :
       {"\"verdict\"", "\"supertree\"", "\"tw2\"", "\"k4_witness\"", "\"case_trace\"",
        "\"timings\""})
    CHECK(r.out.find(key) != std::string::npos);
}

TEST_CASE("malformed input exits 65") {
  std::string bad = fixture("bad.nwk", "((a,b;\n");
  CHECK(run("check " + bad).exit_code == 65);
  CHECK(run("tw " + bad).exit_code == 65);
}

TEST_CASE("unknown flags exit 64") { CHECK(run("check --frobnicate x").exit_code == 64); }

TEST_SUITE_END();
