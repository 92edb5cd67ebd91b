#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#ifndef MERTENS_CLI
#error "MERTENS_CLI must name the CLI binary"
#endif

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MERTENS_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("compute M emits one CSV row per checkpoint") {
  const Run r = run("--format csv compute M 1000000 --stride 10000");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("# mertens-cli v1 ledger ", 0) == 0);
  CHECK(r.out.find("\nx,lo,hi,pass\n") != std::string::npos);
  CHECK(count_lines(r.out) == 2 + 100);
  CHECK(r.out.find("\n1000000,212,212,-\n") != std::string::npos);  // M(10^6) = 212
}

TEST_CASE("compute psi 10 encloses log 2520") {
  const Run r = run("--format json compute psi 10 --mode rigorous");
  REQUIRE(r.status == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["format"] == "mertens-cli");
  CHECK(doc["version"] == 1);
  CHECK(doc["ledger_hash"].get<std::string>().size() == 16);
  REQUIRE(doc["rows"].size() == 1);
  CHECK(std::stod(doc["rows"][0]["lo"].get<std::string>()) < 7.8321);  // the printed 7.8320 is truncated
  CHECK(std::stod(doc["rows"][0]["hi"].get<std::string>()) >= 7.8320);
}

TEST_CASE("compute resumes from its checkpoint file") {
  const std::string path = (std::filesystem::temp_directory_path() / "mertens_cli_resume.log").string();
  std::filesystem::remove(path);
  const Run whole = run("--format csv compute N 300000 --stride 10000");
  run("--format csv compute N 120000 --stride 10000 --checkpoint " + path);
  const Run resumed = run("--format csv compute N 300000 --stride 10000 --checkpoint " + path);
  CHECK(resumed.status == 0);
  CHECK(resumed.out == whole.out);
  const Run clash = run("compute N 300000 --stride 20000 --checkpoint " + path);
  CHECK(clash.status == 5);
  std::filesystem::remove(path);
}

TEST_CASE("verify identity passes") {
  const Run r = run("verify identity --x 1000000 --y 1000");
  CHECK(r.status == 0);
  CHECK(r.out.find("hyperbola residual") != std::string::npos);
  CHECK(r.out.find("schoenfeld residual") != std::string::npos);
}

TEST_CASE("verify model reports pass and failure through the exit code") {
  const Run ok = run("verify model M --to 1e6");
  CHECK(ok.status == 0);
  const Run bad = run("verify model M --from 1 --to 32");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("first at 1") != std::string::npos);
  CHECK(run("verify model psi --to 1e5").status == 0);
}

TEST_CASE("other verify commands") {
  CHECK(run("verify envelope --to 1e5").status == 0);
  CHECK(run("verify lambda-over-k --to 1e5").status == 0);
  CHECK(run("verify lambda-over-k --to 1e5 --offset 1").status == 1);
  CHECK(run("verify floor-identity --u 1001/7 --k 12").status == 0);
  CHECK(run("verify mellin --s 3/2 --T 300").status == 0);
  CHECK(run("verify gap --from 1000 --to 1e5 --stride 1000 --form derived --abel").status == 0);
  CHECK(run("verify gap --from 1000 --to 1e5").status == 3);  // constant form below 1.3e9
}

TEST_CASE("certify large-x prints the five-row table") {
  const Run r = run("certify large-x");
  CHECK(r.status == 0);
  for (const char* s : {"4345", "11035", "25266", "53119", "L*", "180799", "180194"})
    CHECK(r.out.find(s) != std::string::npos);
}

TEST_CASE("certify dyadic marks all nine rows") {
  const Run r = run("certify dyadic");
  CHECK(r.status == 0);
  std::size_t count = 0;
  for (std::size_t at = r.out.find(" oui"); at != std::string::npos; at = r.out.find(" oui", at + 1)) ++count;
  CHECK(count == 9);
  CHECK(r.out.find(" non") == std::string::npos);
}

TEST_CASE("certify writes self-describing certificates") {
  const std::string path = (std::filesystem::temp_directory_path() / "mertens_cli_certs.json").string();
  const Run r = run("--format json certify large-x --out " + path);
  REQUIRE(r.status == 0);
  std::ifstream in(path);
  const auto certs = nlohmann::json::parse(in);
  REQUIRE(certs.size() == 10);
  const auto doc = nlohmann::json::parse(r.out);
  for (const auto& c : certs) {
    CHECK(c["format"] == "mertens-certificate");
    CHECK(c["ledger_hash"] == doc["ledger_hash"]);
    CHECK_FALSE(c["trace"].empty());
  }
  std::filesystem::remove(path);
}

TEST_CASE("an edited ledger changes the reported hash") {
  const std::string path = (std::filesystem::temp_directory_path() / "mertens_cli_ledger.txt").string();
  std::ofstream(path) << "model.M 0.571 0.571 33 1e16 up edited\n";
  const Run r = run("--ledger " + path + " --format json constants");
  CHECK(r.status == 0);
  const Run d = run("--format json constants");
  CHECK(nlohmann::json::parse(r.out)["ledger_hash"] != nlohmann::json::parse(d.out)["ledger_hash"]);
  // a ledger missing what a pipeline needs is refused with the key named
  const Run c = run("--ledger " + path + " certify dyadic");
  CHECK(c.status == 3);
  CHECK(c.out.find("model.psi") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("scan-threshold") {
  const Run none = run("scan-threshold 1 1e5");
  CHECK(none.status == 0);
  CHECK(none.out.find("none in range") != std::string::npos);
  const Run some = run("--format json scan-threshold 160383 1e6");
  REQUIRE(some.status == 0);
  CHECK(nlohmann::json::parse(some.out)["last_crossing"].is_number_integer());
}

TEST_CASE("constants") {
  const Run r = run("constants");
  CHECK(r.status == 0);
  for (const char* s : {"alpha", "beta", "zeta(1/2)", "gamma", "L*"}) CHECK(r.out.find(s) != std::string::npos);
}

TEST_CASE("bad arguments are rejected") {
  CHECK(run("compute M 1.5").status == 2);
  CHECK(run("compute M 1e30").status == 2);
  CHECK(run("compute nothing 10").status == 2);
  CHECK(run("frobnicate").status != 0);
  CHECK(run("--workers 0 compute M 10").status != 0);
}
