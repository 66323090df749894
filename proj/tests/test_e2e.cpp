#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

// Runs the built binary as a child process; JACALG_BIN comes from the build.

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run sh(const std::string& args) {
  const std::string cmd = std::string(JACALG_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("e2e: exit code 0 paths") {
  CHECK(sh("verify identity --bracket jacS --n 3 --identity fi1 --mode both").code == 0);
  CHECK(sh("check derivation --spec Delta --bracket jacS --n 3").code == 0);
  CHECK(sh("check derivation --spec '1*x^[0,0]*d^[1,0]' --bracket jacS --n 2").code == 0);
  CHECK(sh("minident solve").code == 0);
  CHECK(sh("omega check --alphabet 'w3:3,w2:2,w2p:2' --word 'w3 w2 x1 x2 x3 w2p x4 x5'").code == 0);
  const auto e = sh("eval --bracket jacS --n 2 --args 'x1^2*x2' x2");
  CHECK(e.code == 0);
  CHECK(e.out == "2*x1*x2\n");
}

TEST_CASE("e2e: exit code 1 paths") {
  const auto ce = sh("verify identity --bracket 'w:1^2+3^4' --n 4 --identity fi2 --mode sampled --format json");
  CHECK(ce.code == 1);
  const auto j = nlohmann::json::parse(ce.out);
  CHECK(j["counterexample"]["args"] == nlohmann::json{"x1", "x2", "x3", "x4"});
  CHECK(sh("check derivation --spec '1*x^[1,0]*d^[1,0]' --bracket jacS --n 2").code == 1);
  CHECK(sh("omega check --alphabet 'w3:3,w2:2' --word 'w3 w2 x1 x2 w3 x3 x4 x5'").code == 1);
  CHECK(sh("omega parse --alphabet 'w2:2' --word 'x x'").code == 1);
}

TEST_CASE("e2e: exit code 2 paths") {
  CHECK(sh("verify identity --identity bogus").code == 2);
  CHECK(sh("verify identity --identity fi2 --n 3 --mode symbolic --budget 10").code == 2);
  CHECK(sh("").code == 2);
  CHECK(sh("eval --bracket jacS --n 2 --args x1").code == 2);
  CHECK(sh("verify identity --identity fi1 --grid 3").code == 2);
}

TEST_CASE("e2e: json reports are byte-stable") {
  const std::string args = "verify identity --n 2 --identity fi1 --mode sampled --tuples 40 --seed 5 --format json";
  const auto a = sh(args), b = sh(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["config"]["seed"] == 5);
  CHECK(j["evidence"] == "sampled — not a proof");
  const auto m1 = sh("minident solve --format json --tuples 10 --seed 2");
  CHECK(m1.out == sh("minident solve --format json --tuples 10 --seed 2").out);
}
