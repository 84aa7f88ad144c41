#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(KVW_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe.get())) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe.release());
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string write_input(const std::string& name, const std::string& body) {
  const auto dir = fs::temp_directory_path() / "kvw-cli-tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("invariants report for K_{2,2}") {
  const auto in = write_input("k22.json", R"({"K": [[3, 2], [2, 3]]})");
  const auto r = run("invariants --input " + in);
  CHECK(r.status == 0);
  CHECK(r.out.find("delta: 5") != std::string::npos);
  CHECK(r.out.find("rho: 2") != std::string::npos);
  CHECK(r.out.find("slope: -2/5") != std::string::npos);
  CHECK(r.out.find("stable: true") != std::string::npos);
  CHECK(r.out.find("jain_fraction: 2/5") != std::string::npos);
}

TEST_CASE("input errors exit with status 2") {
  const auto mixed = write_input("mixed.json", R"({"K": [[2, 1], [1, 3]]})");
  auto r = run("validate --input " + mixed);
  CHECK(r.status == 2);
  CHECK(r.out.find("MixedParity") != std::string::npos);

  r = run("invariants --input " + write_input("unknown.json", R"({"K": [[2]], "Kappa": 1})"));
  CHECK(r.status == 2);
  CHECK(r.out.find("ParseError") != std::string::npos);

  r = run("validate --input " + write_input("datum.json", R"({"K": [[2, 1], [1, 2]], "n": [1, 2]})"));
  CHECK(r.status == 2);
  CHECK(r.out.find("NotEigenvectorOfE") != std::string::npos);

  CHECK(run("validate").status == 2);
  CHECK(run("no-such-command").status == 2);
  CHECK(run("gram-center --points 0 --input " + mixed).status == 2);
}

TEST_CASE("verify-all on a single layer passes and is reproducible") {
  const auto in = write_input("k2.json", R"({"K": [[2]], "tau": [0, 1]})");
  const auto a = run("verify-all --format json --input " + in);
  CHECK(a.status == 0);
  CHECK(a.out.find("\"verdict\": \"PASS\"") != std::string::npos);
  CHECK(a.out.find("\"schema\": \"kvw-report/1\"") != std::string::npos);
  const auto b = run("verify-all --format json --input " + in);
  CHECK(a.out == b.out);
}

TEST_CASE("a failed check exits with status 1") {
  const auto in = write_input("k2-short.json", R"({"K": [[2]]})");
  const auto r = run("verify-all --samples 4096 --input " + in);
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL many-body Gram samples") != std::string::npos);
}

TEST_CASE("structured Gram report") {
  const auto in = write_input("k3.json", R"({"K": [[3]], "tau": [0.3, 1.1], "xi": [[0.2, 0.1]]})");
  const auto r = run("gram-center --format json --points 32 --input " + in);
  CHECK(r.status == 0);
  CHECK(r.out.find("\"matrix\"") != std::string::npos);
  CHECK(r.out.find("\"stderr\"") != std::string::npos);
  CHECK(r.out.find("\"kappa\"") != std::string::npos);
}
