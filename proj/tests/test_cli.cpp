// End-to-end checks of the command-line tool: spawns the real binary and
// inspects output and exit codes.

#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

#ifndef ORBITCODES_CLI_PATH
#error "ORBITCODES_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(ORBITCODES_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args) {
  RunResult r = run_cli(args);
  REQUIRE(r.status == 0);
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("cli field-info") {
  auto j = run_json("field-info --p 2 --h 1 --n 6");
  CHECK(j["p"] == 2);
  CHECK(j["order"] == 64);
  CHECK(j["modulus"] == nlohmann::json::array({1, 1, 0, 0, 0, 0, 1}));  // x^6 + x + 1
}

TEST_CASE("cli invariants on the F_8 coset") {
  // generators 1, g^9, g^18 span F_8 inside F_64
  auto j = run_json("invariants --p 2 --h 1 --n 6 --gens 1,24,15");
  CHECK(j["profile"]["dim_square"] == 3);
  CHECK(j["profile"]["linearity"] == 3);
  CHECK(j["orbit"]["size"] == 9);
  CHECK(j["orbit"]["min_distance"] == 6);
  CHECK(j["orbit"]["distance_distribution"] == nlohmann::json{{"6", 8}});
}

TEST_CASE("cli accepts raw coordinate rows") {
  auto by_gens = run_json("invariants --p 2 --h 1 --n 6 --gens 1,2,4");
  auto by_rows = run_json(
      "invariants --p 2 --h 1 --n 6 --rows '1,0,0,0,0,0;0,1,0,0,0,0;0,0,1,0,0,0'");
  CHECK(by_gens["subspace"] == by_rows["subspace"]);
  CHECK(by_gens["profile"] == by_rows["profile"]);
}

TEST_CASE("cli classify emits verified witnesses") {
  auto j = run_json("classify --p 2 --h 1 --n 6 --gens 1,2,4");
  CHECK(j["family"] == "III");
  CHECK(j["witnesses"].contains("lambda"));
  CHECK(j["min_distance"] == 2);
}

TEST_CASE("cli equiv, brute and fast paths") {
  auto brute = run_json("equiv --p 2 --h 1 --n 6 --gens 1,2,4 --gens2 3,6,12");
  CHECK(brute["equivalent"] == true);  // 3,6,12 is (1+g) * {1,g,g^2}

  auto ps = run_json("equiv --p 2 --h 1 --n 6 --method pairspace --gens 1,2,4 --gens2 3,6,12");
  CHECK(ps["equivalent"] == true);
  CHECK(ps.contains("pair_space"));

  // family III vs IV (span{1, g^21, g} = F_4 + <g>): inequivalent
  auto neg = run_json("equiv --p 2 --h 1 --n 6 --gens 1,2,4 --gens2 1,59,2");
  CHECK(neg["equivalent"] == false);

  // the fast paths pick up their witnesses from classify3
  auto poly = run_json("equiv --p 2 --h 1 --n 6 --method poly --gens 1,2,4 --gens2 3,6,12");
  CHECK(poly["equivalent"] == true);
  auto famiv = run_json("equiv --p 2 --h 1 --n 6 --method famiv --gens 1,59,2 --gens2 3,14,6");
  CHECK(famiv["equivalent"] == true);  // second input is (1+g) * (first)
}

TEST_CASE("cli construct-v reproduces the optimum-distance example") {
  // gamma = 32 has absolute trace 1 and lies outside F_8
  auto j = run_json("construct-v --p 2 --h 1 --n 6 --f 1,1,1 --gamma 32");
  CHECK(j["family"] == "V");
  CHECK(j["sidon"] == true);
  CHECK(j["min_distance"] == 4);
  CHECK(j["orbit_size"] == 63);
  CHECK(j["v_kind"] == "trace");
  CHECK(j["sidon_criterion"] == true);
}

TEST_CASE("cli decompose-v round trip") {
  auto built = run_json("construct-v --p 2 --h 1 --n 6 --f 0,1,0 --gamma 32");
  std::string gens;
  for (auto& v : built["subspace"]) {
    if (!gens.empty()) gens += ",";
    gens += std::to_string(v.get<std::uint64_t>());
  }
  auto j = run_json("decompose-v --p 2 --h 1 --n 6 --gens " + gens);
  CHECK(j["kind"] == "x^q");
  auto ws = j["weight_spectrum"];
  CHECK(ws[2] == 0);
  CHECK(ws[3] == 0);
}

TEST_CASE("cli census json and csv agree with the library") {
  auto j = run_json("census --p 2 --h 1 --n 5");
  CHECK(j["subspace_count"] == 155);
  CHECK(j["orbit_count"] == 5);
  CHECK(j["bounds"]["distance2_classes"] == 1);
  CHECK(j["bounds"]["lower_attained"] == true);

  RunResult csv = run_cli("census --p 2 --h 1 --n 5 --format csv");
  CHECK(csv.status == 0);
  CHECK(csv.out.rfind("representative,family,orbit_size,min_distance,", 0) == 0);
}

TEST_CASE("cli census matches the golden files byte for byte") {
#ifdef ORBITCODES_GOLDEN_DIR
  auto slurp = [](const std::string& path) {
    FILE* f = fopen(path.c_str(), "rb");
    REQUIRE(f != nullptr);
    std::string data;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), f)) > 0) data.append(buf.data(), got);
    fclose(f);
    return data;
  };
  const std::string dir = ORBITCODES_GOLDEN_DIR;
  CHECK(run_cli("census --p 2 --h 1 --n 5 --format csv").out == slurp(dir + "/census_2_1_5.csv"));
  CHECK(run_cli("census --p 2 --h 1 --n 6 --format csv").out == slurp(dir + "/census_2_1_6.csv"));
  CHECK(run_cli("census --p 2 --h 1 --n 7 --format csv --jobs 2").out == slurp(dir + "/census_2_1_7.csv"));
#endif
}

TEST_CASE("cli determinism: identical config, identical bytes") {
  RunResult a = run_cli("census --p 2 --h 1 --n 6 --jobs 1");
  RunResult b = run_cli("census --p 2 --h 1 --n 6 --jobs 3");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);

  RunResult c = run_cli("invariants --p 3 --h 1 --n 6 --gens 1,3,9");
  RunResult d = run_cli("invariants --p 3 --h 1 --n 6 --gens 1,3,9");
  CHECK(c.out == d.out);
}

TEST_CASE("cli exit statuses") {
  CHECK(run_cli("invariants --p 4 --h 1 --n 3 --gens 1").status == 2);   // validation
  CHECK(run_cli("classify --p 2 --h 1 --n 6 --gens 1,2").status == 3);   // precondition
  CHECK(run_cli("census --p 2 --h 1 --n 7 --cap 100").status == 4);      // cap
  CHECK(run_cli("decompose-v --p 2 --h 1 --n 6 --gens 1,24,15").status == 3);  // delta_3 = 1
  CHECK(run_cli("invariants --p 2 --h 1 --n 6").status == 2);            // no input
  CHECK(run_cli("classify --p 2 --h 1 --n 6 --gens 1,2,4 --format csv").status == 2);
}
