#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "vlkey/json_io.hpp"

using namespace vlkey;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  CliResult result;
  const std::string cmd = std::string(VLKEY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.out.append(buf.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace

TEST_CASE("bounds command emits the closed-form values") {
  const CliResult r = run_cli("bounds --I 500 --eps 0.002");
  REQUIRE(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc.at("expected_length_lower").get<double>() >= 440.0);
  CHECK(doc.at("expected_length_upper").get<double>() > 500.0);
}

TEST_CASE("scheme prefix exact run stays within the declared distance") {
  const CliResult r = run_cli("scheme prefix --m 8 --t 3 --exact");
  REQUIRE(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc.at("distance").at("sup_distance").get<double>() <= 7.0 / 8);
  CHECK(doc.at("E_L").get<double>() >= 5.0 / 8);
  CHECK(doc.contains("I_XY"));
}

TEST_CASE("replay with an identical config is byte-identical") {
  const std::string args = "scheme prefix --m 5 --t 2 --trials 2000 --seed 42";
  const CliResult r1 = run_cli(args);
  const CliResult r2 = run_cli(args);
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out == r2.out);
  const CliResult r3 = run_cli("scheme prefix --m 5 --t 2 --trials 2000 --seed 43");
  CHECK(r1.out != r3.out);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("no-such-command").exit_code == 2);
  CHECK(run_cli("bounds").exit_code == 2);  // missing required --I
  CHECK(run_cli("convert --keys /nonexistent.jsonl").exit_code == 2);
}

TEST_CASE("pipeline runs the full exact chain with passing bounds") {
  const CliResult r = run_cli(
      "pipeline --builtin identity --n 4 --protocol-m 2 --eps 1/10 "
      "--eps-prime 3/10 --seed 3");
  REQUIRE(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc.at("all_bounds_ok").get<bool>());
  CHECK(doc.at("converter").at("sup_distance").get<double>() <= 0.3 + 1e-12);
}

TEST_CASE("entropy-model exact writes a law that convert consumes") {
  const std::string law_path = "/tmp/vlkey_test_keys.jsonl";
  const CliResult r1 = run_cli("entropy-model --builtin identity --n 4 "
                               "--protocol-m 2 --eps 1/10 --exact --out " +
                               law_path);
  REQUIRE(r1.exit_code == 0);
  const Json doc1 = Json::parse(r1.out);
  CHECK(doc1.at("H_eq").get<double>() > 0.0);
  CHECK(doc1.at("P_disagree").get<double>() == 0.0);

  const CliResult r2 =
      run_cli("convert --keys " + law_path + " --eps-prime 3/10 --seed 11");
  REQUIRE(r2.exit_code == 0);
  const Json doc2 = Json::parse(r2.out);
  CHECK(doc2.at("sup_distance").get<double>() <= 0.3 + 1e-12);
  CHECK(doc2.at("bound_satisfied").get<bool>());
  std::remove(law_path.c_str());
}

TEST_CASE("code command emits a parity check with verified distance") {
  const CliResult r = run_cli("code --n 7 --k 4 --d 3 --seed 5");
  REQUIRE(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc.at("verified_min_distance").get<int>() >= 3);
  CHECK(doc.at("parity_check").size() == 3);
  for (const auto& row : doc.at("parity_check"))
    CHECK(row.get<std::string>().size() == 7);
}

TEST_CASE("csv flag flattens the output") {
  const CliResult r = run_cli("--csv bounds --I 10 --eps 0.25");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("expected_length_lower,") != std::string::npos);
}

TEST_CASE("environment seed is honoured and overridden by the flag") {
  setenv("VLKEY_SEED", "42", 1);
  const CliResult env_seeded = run_cli("scheme prefix --m 4 --t 1 --trials 1000");
  const CliResult flag_seeded =
      run_cli("scheme prefix --m 4 --t 1 --trials 1000 --seed 42");
  const CliResult other =
      run_cli("scheme prefix --m 4 --t 1 --trials 1000 --seed 1");
  unsetenv("VLKEY_SEED");
  REQUIRE(env_seeded.exit_code == 0);
  CHECK(env_seeded.out == flag_seeded.out);
  CHECK(env_seeded.out != other.out);
}
