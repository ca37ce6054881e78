// Drives the installed command-line tool as a subprocess and checks report
// contents, output determinism, and the exit-code discipline
// (0 success, 2 usage, 3 domain, 4 accuracy).

#include "doctest.h"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

#ifndef HYPERASYM_CLI_PATH
#error "HYPERASYM_CLI_PATH must point at the CLI binary"
#endif

namespace {

using json = nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(HYPERASYM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

double num(const json& j) { return std::strtod(j.get<std::string>().c_str(), nullptr); }

}  // namespace

TEST_CASE("expand reproduces the degenerate level-1 error") {
  RunResult r = run_cli(
      "expand --builtin degenerate_3_5 --theta-over-pi -0.25 --level 1 "
      "--oracle");
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.out);
  CHECK(report["schedule"]["counts"] == json::array({27, 22}));
  double err = num(report["abs_error"]);
  CHECK(err > 3.7e-7 / 2);
  CHECK(err < 3.7e-7 * 2);
  CHECK(report["terms"].size() == 27 + 22);
}

TEST_CASE("expand csv lists the ledger with running remainders") {
  RunResult r = run_cli(
      "expand --builtin pearcey_cusp --level 0 --output csv --oracle");
  REQUIRE(r.exit_code == 0);
  std::string header = r.out.substr(0, r.out.find('\n'));
  CHECK(header ==
        "level_index,chain,r,term_re,term_im,abs_term,abs_running_remainder");
  std::size_t rows = 0;
  for (char c : r.out)
    if (c == '\n') ++rows;
  CHECK(rows == 1 + 13);  // header + N_opt terms
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("expand --level 4").exit_code == 2);
  CHECK(run_cli("expand --theta-over-pi abc").exit_code == 2);
  CHECK(run_cli("expand --digits 8").exit_code == 2);
  CHECK(run_cli("bogus-command").exit_code == 2);
  json err = json::parse(run_cli("expand --level 4").out);
  CHECK(err["error"]["type"] == "usage");
}

TEST_CASE("domain errors exit with code 3") {
  // theta = pi/2 is the pearcey Stokes line
  RunResult r = run_cli("expand --builtin pearcey_cusp --theta-over-pi 0.5");
  CHECK(r.exit_code == 3);
  CHECK(json::parse(r.out)["error"]["type"] == "domain");
}

TEST_CASE("conditioning failures exit with code 4") {
  RunResult r = run_cli(
      "adjacency --builtin swallowtail --candidates 2,2 --orders 50,51");
  CHECK(r.exit_code == 4);
  CHECK(json::parse(r.out)["error"]["type"] == "conditioning");
}

TEST_CASE("adjacency reproduces the swallowtail constants") {
  RunResult r = run_cli(
      "adjacency --builtin swallowtail --candidates 2,3 --orders 50,51");
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.out);
  REQUIRE(report["constants"].size() == 2);
  CHECK(report["constants"][0]["rounded"] == 0);
  CHECK(report["constants"][1]["rounded"] == 1);
  CHECK(std::abs(num(report["constants"][1]["K"]["re"]) - 1.00076) < 5e-3);
}

TEST_CASE("json output is byte deterministic") {
  RunResult a = run_cli("expand --builtin pearcey_cusp --level 1 --oracle");
  RunResult b = run_cli("expand --builtin pearcey_cusp --level 1 --oracle");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("coeffs cross-route oracle agrees") {
  RunResult r = run_cli("coeffs --builtin degenerate_3_5 --count 12 --oracle");
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.out);
  CHECK(report["values"].size() == 12);
  CHECK(num(report["max_discrepancy"]) < 1e-25);
}

TEST_CASE("hyperterm quadrature cross-check") {
  RunResult r = run_cli(
      "hyperterm --z-mod 1 --z-phase-over-pi 0.25 --column 2.5,1,1,0.5 "
      "--oracle");
  REQUIRE(r.exit_code == 0);
  CHECK(num(json::parse(r.out)["discrepancy"]) < 1e-20);
}

TEST_CASE("trace emits the path csv") {
  RunResult r = run_cli("trace --builtin pearcey_cusp --v-max 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.substr(0, r.out.find('\n')) == "v,re_t,im_t");
}

TEST_CASE("tables pass the golden comparison through level 1") {
  RunResult r = run_cli("tables --max-level 1");
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.out);
  CHECK(report["all_ok"] == true);
  // figure data: pearcey remainders track the next term (factor < 10)
  for (const json& row : report["problems"][0]["figure"])
    CHECK(num(row["abs_remainder"]) < 10 * num(row["abs_next_term"]));
}
