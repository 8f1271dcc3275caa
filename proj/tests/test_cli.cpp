#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const auto out = std::filesystem::temp_directory_path() / "selfnorm_cli_test.out";
  const std::string cmd = std::string("\"") + SELFNORM_CLI + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string data(const char* file) { return std::string(SELFNORM_TEST_DATA) + "/" + file; }

}  // namespace

TEST_CASE("tail") {
  auto r = run("tail --dist normal --n 5 --b 0.5");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0.153872", 0) == 0);
  r = run("tail --dist normal --n 5 --t 0 --method normal");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0.5", 0) == 0);
  r = run("tail --dist cauchy --n 5 --b 0.5 --method ld --json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"probability\"") != std::string::npos);
  r = run("tail --dist file:" + data("exp_shifted.spec") + " --n 5 --b 0.5");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0.0822", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("tail --dist t2 --n 5 --b 0.5 --method edgeworth").code == 2);
  CHECK(run("tail --dist exp --n 5 --b 0.995").code == 2);
  CHECK(run("tail --dist gamma --n 5 --b 0.5").code == 2);
  CHECK(run("tail --dist exp --n 5 --b 0.5 --t 1").code == 64);
  CHECK(run("tail --dist exp --n 5").code == 64);
  CHECK(run("frobnicate").code == 64);
  CHECK(run("table --dist exp --n 5 --b-grid 0.9:0.1:0.1").code == 64);
  CHECK(run("table --dist exp --n 5 --b-grid 0.1:0.2").code == 64);
  CHECK(run("table --dist exp --n 5 --b-grid 0.1:0.2:0.1 --methods saddle,magic").code == 64);
  CHECK(run("table --dist exp --n 5 --b-grid 0.1:0.2:0.1 --methods ld --out /nonexistent/dir/t.csv").code == 73);
  CHECK(run("mc --dist file:" + data("two_bumps.spec") + " --n 5 --b 0.5 --reps 100").code == 2);
  CHECK(run("verify --dist normal --b-grid 0.3:0.6:0.3").code == 0);
  CHECK(run("tail --dist file:" + data("spike.spec") + " --n 5 --b 0.5").code == 3);
}

TEST_CASE("table output") {
  auto r = run("table --dist cauchy --n 5 --b-grid 0.05:0.55:0.05 --methods saddle,normal,ld");
  CHECK(r.code == 0);
  int lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 12);
  r = run("table --dist cauchy --n 5 --b-grid 0.40:0.90:0.05 --methods mc,saddle --reps 20000");
  CHECK(r.code == 0);
  lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 12);
  r = run("table --dist normal --n 5 --b-grid 0.5:0.5:0.1 --methods saddle --format json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"rows\"") != std::string::npos);
}

TEST_CASE("monte carlo output does not depend on workers") {
  const auto a = run("mc --dist normal --n 5 --b 0.5 --reps 1000000 --seed 7 --workers 1");
  const auto b = run("mc --dist normal --n 5 --b 0.5 --reps 1000000 --seed 7 --workers 8");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());
}

TEST_CASE("monte carlo value") {
  const auto r = run("mc --dist exp --n 5 --b 0.75 --reps 1000000 --seed 7");
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("p_hat=", 0) == 0);
  CHECK(std::fabs(std::stod(r.out.substr(6)) - 0.0088) < 0.0005);
}

TEST_CASE("verify on a heavy tail") { CHECK(run("verify --dist cauchy --b-grid 0.4:0.9:0.1").code == 0); }
