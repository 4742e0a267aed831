#pragma once

// Job files and the batch commands run on them.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nalin/discs.hpp"
#include "nalin/error.hpp"

namespace nalin {

struct SweepInstance {
  std::string lambda;
  std::map<int, std::string> f;
};

struct Job {
  int p = 0;
  int r = 1;
  std::vector<int> modulus;  // constant term first; empty for the built-in one
  int e = 1;
  PrecisionPolicy policy;
  std::string lambda;
  std::map<int, std::string> f;  // nonlinear terms only
  int D = 0;
  int Nmax = 0;
  int kappa_max = 0;
  int r_max = 0;
  int e_max = 64;
  std::vector<std::string> samples;
  std::vector<SweepInstance> sweep;  // lambda x f grid, lambda-major
  int sweep_degree = 0;

  FieldPtr field;
  PowerSeriesMap map() const;
};

// JSON job document. Errors are kParse with "line L, column C: ..." text.
Job parse_job(std::string_view text);

enum ExitCode { kExitOk = 0, kExitParse = 2, kExitMath = 3, kExitCheck = 4 };
int exit_code_for(ErrorCode code);

struct CommandOptions {
  int degree = 0;                       // overrides the job's D when > 0
  std::string display_epsilon = "1/2";  // presentation only
};

struct CommandResult {
  int exit_code = 0;
  std::string out;  // data
  std::string err;  // diagnostics
};

// command: analyze | solve | certify-divergence | disc | sweep
CommandResult run_command(std::string_view job_text, std::string_view command, const CommandOptions& opts = {});

}  // namespace nalin
