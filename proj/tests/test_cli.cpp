// Job parsing and the batch commands, run in process.
#include <doctest.h>

#include <json.hpp>
#include <string>

#include "nalin/commands.hpp"

using namespace nalin;

namespace {

const char* kQuadratic = R"({
  "p": 2,
  "lambda": "1+T",
  "f": {"2": "1"},
  "D": 24,
  "samples": ["T^2", "T^3+T^4"]
})";

std::string parse_error(const std::string& text) {
  try {
    (void)parse_job(text);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kParse);
    return err.what();
  }
  FAIL("job parsed: " << text);
  return "";
}

}  // namespace

TEST_CASE("job defaults and fields") {
  const Job job = parse_job(kQuadratic);
  CHECK(job.p == 2);
  CHECK(job.r == 1);
  CHECK(job.e == 1);
  CHECK(job.r_max == 1);
  CHECK(job.D == 24);
  CHECK(job.samples.size() == 2);
  CHECK(job.f.at(2) == "1");
  CHECK(job.map().degree() == 2);
}

TEST_CASE("job modulus constant term first") {
  const Job job = parse_job(R"({"p": 2, "modulus": [1, 1, 0, 0, 1], "lambda": "b+T"})");
  CHECK(job.r == 4);
  CHECK(job.field->modulus() == std::vector<int>{1, 1, 0, 0, 1});
}

TEST_CASE("job errors carry positions") {
  CHECK(parse_error("{\n  \"p\": 4,\n  \"lambda\": \"1+T\"}").find("line 2, column 3") != std::string::npos);
  CHECK(parse_error("{\"p\": 2, \"lambda\": \"1+T\",\n \"f\": {\"1\": \"T\"}}").find("line 2") != std::string::npos);
  CHECK(parse_error(R"({"p": 2, "lambda": "1+T", "bogus": 1})").find("unknown key \"bogus\"") != std::string::npos);
  CHECK(parse_error("{\"p\": 2,\n\"lambda\": }").find("line 2") != std::string::npos);
  CHECK(parse_error(R"({"p": 2, "lambda": "1+T^^2"})").find("bad literal") != std::string::npos);
  CHECK(parse_error(R"({"p": 2})").find("missing \"lambda\"") != std::string::npos);
  CHECK(parse_error(R"({"p": 2, "lambda": "1+T", "precision": {"M0": 9, "M_max": 4}})").find("M0") !=
        std::string::npos);
  CHECK(parse_error(R"({"p": 2, "r": 2, "r_max": 3, "lambda": "1+T"})").find("r_max") != std::string::npos);
  CHECK(parse_error(R"({"p": 2, "modulus": [1, 0, 1], "lambda": "1+T"})").size() > 0);
  CHECK(parse_error("[1, 2]").find("object") != std::string::npos);
}

TEST_CASE("exit codes by error class") {
  CHECK(exit_code_for(ErrorCode::kParse) == kExitParse);
  CHECK(exit_code_for(ErrorCode::kIo) == kExitParse);
  CHECK(exit_code_for(ErrorCode::kCheckFailed) == kExitCheck);
  CHECK(exit_code_for(ErrorCode::kRootOfUnity) == kExitMath);
  CHECK(exit_code_for(ErrorCode::kHypothesisViolated) == kExitMath);
}

TEST_CASE("analyze emits the profile") {
  const CommandResult res = run_command(kQuadratic, "analyze");
  REQUIRE(res.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["m"] == 1);
  CHECK(j["k_prime"] == 2);
  CHECK(j["v_rho"] == "1/2");
  CHECK(j["v_sigma"] == "1/1");
  CHECK(j["A"] == "0/1");
}

TEST_CASE("display epsilon changes display only") {
  CommandOptions opts;
  opts.display_epsilon = "1/3";
  const auto a = nlohmann::json::parse(run_command(kQuadratic, "disc").out);
  const auto b = nlohmann::json::parse(run_command(kQuadratic, "disc", opts).out);
  CHECK(a["disc"]["v_radius"] == b["disc"]["v_radius"]);
  CHECK(a["certificate"] == b["certificate"]);
  CHECK(a["disc"]["display_radius"] != b["disc"]["display_radius"]);

  opts.display_epsilon = "x";
  CHECK(run_command(kQuadratic, "analyze", opts).exit_code == kExitParse);
}

TEST_CASE("degree override") {
  CommandOptions opts;
  opts.degree = 5;
  const CommandResult res = run_command(kQuadratic, "solve", opts);
  REQUIRE(res.exit_code == kExitOk);
  CHECK(res.out.find("\n5,inf,inf,structural\n") != std::string::npos);
  CHECK(res.out.find("\n6,") == std::string::npos);

  CHECK(run_command(R"({"p": 2, "lambda": "1+T", "f": {"2": "1"}})", "solve").exit_code == kExitParse);
}

TEST_CASE("disc samples report residuals") {
  const CommandResult res = run_command(kQuadratic, "disc");
  REQUIRE(res.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["certificate"] == "EXACT-sigma");
  CHECK(j["degree"]["closed_sigma"] == 2);
  CHECK(j.contains("samples"));
}

TEST_CASE("unknown command") {
  const CommandResult res = run_command(kQuadratic, "frobnicate");
  CHECK(res.exit_code == kExitParse);
  CHECK(res.err.find("unknown command") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs") {
  const char* divergence = R"({"p": 3, "lambda": "1+T", "f": {"4": "1"}, "Nmax": 3})";
  const char* sweep = R"({"p": 2, "lambda": "1+T", "sweep": {"lambda": ["1+T", "1+T^2"], "f": [{"2": "1"}], "D": 12}})";
  for (const char* command : {"analyze", "solve", "disc"}) {
    CAPTURE(command);
    const CommandResult a = run_command(kQuadratic, command);
    const CommandResult b = run_command(kQuadratic, command);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
  CHECK(run_command(divergence, "certify-divergence").out == run_command(divergence, "certify-divergence").out);
  const CommandResult s = run_command(sweep, "sweep");
  REQUIRE(s.exit_code == kExitOk);
  CHECK(s.out == run_command(sweep, "sweep").out);
}
