#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = padic::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kSpec = std::string(PADIC_SPECS_DIR) + "/mobius_solve.json";

}  // namespace

TEST_CASE("solve on the bundled spec") {
  auto r = run({"solve", kSpec});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  const auto& cert = j["certificate"];
  CHECK(cert["iterations"].get<int>() <= 21);
  CHECK(cert["rate_certificate"].get<bool>());
  // Limit digits: 1 + 1*5 + ... = 6 mod 25.
  auto digits = cert["limit"]["components"][0]["unit_digits"];
  CHECK(digits[0] == 1);
  CHECK(digits[1] == 1);
  CHECK(cert["trace"][0] == nlohmann::json::array({1, 1}));
}

TEST_CASE("determinism") {
  auto a = run({"solve", kSpec, "--seed", "0"});
  auto b = run({"solve", kSpec, "--seed", "0"});
  CHECK(a.out == b.out);
  std::string tree = R"({"prime":5,"branching":2,"depth":6,"map":"mobius","boundary":"random"})";
  CHECK(run({"tree", tree, "--compare-boundary", "random"}).out ==
        run({"tree", tree, "--compare-boundary", "random"}).out);
  CHECK(run({"tree", tree, "--seed", "1"}).out != run({"tree", tree, "--seed", "2"}).out);
}

TEST_CASE("constant map spec") {
  auto r = run({"solve", R"({"prime":5,"target":10,"terms":[{"factors":[{"map":{"builtin":"constant","params":{"value":6,"domain":"ep"}}}]}]})"});
  REQUIRE(r.code == 0);
  // x_1 = 6 differs from the default start 1; x_2 = x_1 closes the run.
  CHECK(nlohmann::json::parse(r.out)["certificate"]["iterations"] == 2);
}

TEST_CASE("exit codes") {
  CHECK(run({"solve", R"({"prime":5,"terms":[{"factors":[{"map":{"builtin":"mobius","params":{"a":5}},"diagonal":true}]}]})"}).code == 2);
  auto missing = run({"solve", R"({"prime":5})"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("'terms'") != std::string::npos);
  auto unknown = run({"solve", R"({"prime":5,"term":[]})"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("'term'") != std::string::npos);
  auto typo = run({"solve", R"({"prime":5,"terms":[{"factors":[{"map":"mobuis"}]}]})"});
  CHECK(typo.code == 1);
  CHECK(typo.err.find("terms[0].factors[0].map") != std::string::npos);
  CHECK(run({"solve", "/nonexistent/spec.json"}).code == 1);
  CHECK(run({"solve", "{not json"}).code == 1);
  CHECK(run({"solve", kSpec, "--target", "58"}).code == 1);
  CHECK(run({"solve", kSpec, "--max-iter", "3"}).code == 4);
  CHECK(run({"solve", kSpec, "--precision", "30", "--target", "26", "--max-iter", "100"}).code == 0);
  CHECK(run({"tree", R"({"prime":5,"branching":2,"depth":13,"map":"mobius"})"}).code == 1);
  CHECK(run({"tree", R"({"prime":5,"branching":2,"depth":4,"map":"mobius"})", "--max-depth", "3"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify") {
  auto m = run({"verify", "mobius", "--samples", "300"});
  CHECK(m.code == 0);
  auto jm = nlohmann::json::parse(m.out);
  CHECK(jm["pass"].get<bool>());
  CHECK(jm["min_observed_gap"].get<int>() >= 1);
  CHECK(run({"verify", "identity"}).code == 5);
  CHECK(run({"verify", "identity", "--declared-k", "0"}).code == 0);
  CHECK(run({"verify", "linfrac", "--prime", "3"}).code == 2);
  CHECK(run({"verify", "linfrac", "--params", R"({"dimension":2,"fill":1})"}).code == 0);
  CHECK(run({"verify", "ratpoly", "--samples", "200"}).code == 0);
  CHECK(run({"verify", "seqmap-km2009", "--params", R"({"theta":6,"length":8})", "--samples", "200"}).code == 0);
  CHECK(run({"verify", "shiftprod", "--samples", "100"}).code == 0);
  CHECK(run({"verify", "seqmap", "--params", R"({"a":25,"b":5,"length":4})", "--samples", "100"}).code == 0);
  auto lit = run({"verify", "literal", "--params",
                  R"({"arity":1,"domain":"ep","numerator":[{"coefficient":5,"exponents":[1]},{"coefficient":1,"exponents":[0]}]})"});
  CHECK(lit.code == 0);
}

TEST_CASE("tree report") {
  auto r = run({"tree", R"({"prime":5,"branching":2,"depth":10,"map":"mobius","boundary":"random"})",
                "--compare-boundary", "random"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["gap"]["root_gap_valuation"].get<int>() >= 10);
  CHECK(j["levels"].size() == 11);
  CHECK(j["levels"][10]["vertices"] == 1024);
  CHECK(j["levels"][0]["digest"].get<std::string>().size() == 16);

  auto ones = run({"tree", R"({"prime":5,"branching":2,"depth":3,"map":{"builtin":"mobius","params":{"c1":1}}})"});
  REQUIRE(ones.code == 0);
  CHECK(nlohmann::json::parse(ones.out)["root"] == "5^0 * 1 (mod 5^60)");

  auto inv = run({"tree", R"({"prime":5,"branching":2,"depth":3,"map":"mobius","form":"single","invariant":true})"});
  REQUIRE(inv.code == 0);
  auto csv = run({"tree", R"({"prime":5,"branching":2,"depth":3,"map":"mobius"})", "--format", "csv"});
  CHECK(csv.out.rfind("level,vertices,digest,min_residual\n", 0) == 0);
}

TEST_CASE("coupled and eval") {
  auto r = run({"coupled", R"({"prime":5,"x_terms":[["mobius","mobius"]],"y_terms":[["mobius","mobius"]],"z_terms":[["mobius","mobius"]]})"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["components"]["x"]["residual_valuation"].get<int>() >= 40);

  auto e = run({"eval", R"({"prime":5,"function":"exp","arg":5})"});
  REQUIRE(e.code == 0);
  CHECK(nlohmann::json::parse(e.out)["value"]["components"][0]["unit_digits"][0] == 1);
  CHECK(run({"eval", R"({"prime":5,"function":"log","arg":2})"}).code == 2);
  CHECK(run({"eval", R"({"prime":5,"map":"mobius","args":[1,2]})"}).code == 2);
  auto named = run({"eval", R"({"prime":5,"maps":{"f":{"builtin":"mobius"}},"map":"f","args":[1,"6/11"]})"});
  CHECK(named.code == 0);
}

TEST_CASE("csv trace") {
  auto r = run({"solve", kSpec, "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("n,gap_valuation,limit_distance_valuation\n1,1,", 0) == 0);
}
