#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;  // stdout only
};

Run cli(const std::string& args) {
  std::string cmd = std::string("\"") + NEFCONE_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t k = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), k);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("cli golden outputs") {
  auto r = cli("certify --a 5 --b 1 --level 3 --space igusa");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"nef\":true,\"ample\":true}\n");
  r = cli("walls --which sigma0 --divisor D4");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"value\":\"-1\"}\n");
  r = cli("audit --identity S3");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"residual\":\"0\"}\n");
  CHECK(cli("walls --which sigma1 --divisor E").out == "{\"value\":\"1\"}\n");
  CHECK(cli("certify --a 5 --b 1 --level 2 --space igusa").out == "{\"nef\":false,\"ample\":false}\n");
}

TEST_CASE("cli json payloads") {
  auto r = cli("orbits");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["group_order"] == 1152);
  CHECK(j["g1_order"] == 96);
  CHECK(j["facets"]["rt"] == 16);
  CHECK(j["facets"]["bf"] == 48);

  r = cli("orbits --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("indices,dimension,orbit,representative\n1 2,2,O1,1 2\n", 0) == 0);

  r = cli("dual --generator x1^2 --generator e --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,T1,T2,T3,T4,T5,T6,T7,T8,T9,T10\nt11,1,2,0,0,0,0,0,0,0,0\n", 0) == 0);
  CHECK(r.out.find("t34,0,0,0,0,0,0,0,0,0,1\n") != std::string::npos);
  CHECK(cli("dual --cone pi1_2 --format csv").code == 2);

  r = cli("integrate --n 9");
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["mean"] == "17059/78732");
  CHECK(j["mean_float"] == "0.2166717");

  r = cli("nef --basis vor-d4 --a 24 --b 2 --c 1");
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["nef"] == true);
  CHECK(j["vor_class"]["c"] == "9");
}

TEST_CASE("cli exit codes") {
  // verification failure: the image of pi2_4 is not contained in pi1_3
  CHECK(cli("project-check --cone pi2_4 --axis 1").code == 1);
  CHECK(cli("project-check --cone pi2_3 --axis 1").code == 0);
  CHECK(cli("project-check --cone pi2_1 --axis 1").code == 0);
  CHECK(cli("").code == 2);
  CHECK(cli("bogus").code == 2);
  CHECK(cli("walls --which sigma5").code == 2);
  CHECK(cli("audit --identity nope").code == 2);
  CHECK(cli("certify --a x --b 1").code == 2);
  CHECK(cli("certify --a 1 --b 1 --level 0").code == 2);
  CHECK(cli("integrate --n 0").code == 2);
  CHECK(cli("--help").code == 0);
}
