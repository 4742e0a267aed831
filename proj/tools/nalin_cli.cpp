// Batch front-end over the C API. Data goes to stdout (or --out), diagnostics
// to stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include "nalin/nalin.h"

namespace {

constexpr int kExitParse = 2;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return static_cast<bool>(in) || in.eof();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schroder linearization over F_q((T))", "nalin-cli"};
  app.require_subcommand(1, 1);

  std::string job_path;
  std::string out_path;
  std::string epsilon = "1/2";
  int degree = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "multiplier profile, gauge and disc radii"},
      {"solve", "conjugacy coefficients with structural-zero and bound checks"},
      {"certify-divergence", "divergence certificate for lambda x + a x^{p+1}"},
      {"disc", "linearization disc, boundary degree and periodic point"},
      {"sweep", "growth slopes over a parameter grid"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--job", job_path, "job file")->required();
    sub->add_option("--degree", degree, "override the truncation degree D")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_path, "write data here instead of stdout");
    sub->add_option("--display-epsilon", epsilon, "rational eps in (0,1) used only for display");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::string job_text;
  if (!read_file(job_path, job_text)) {
    std::cerr << "error: cannot read job file " << job_path << "\n";
    return kExitParse;
  }

  char* out = nullptr;
  char* err = nullptr;
  const int code = nalin_run_command(job_text.c_str(), command.c_str(), degree, epsilon.c_str(), &out, &err);
  if (err) std::cerr << err;

  int status = code;
  if (out) {
    if (out_path.empty()) {
      std::cout << out;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      file << out;
      if (!file) {
        std::cerr << "error: cannot write " << out_path << "\n";
        status = kExitParse;
      }
    }
  }
  nalin_string_free(out);
  nalin_string_free(err);
  return status;
}
