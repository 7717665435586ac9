// Command-line front end: reads a JSON request (or an array of requests),
// hands it to the shared library and writes the JSON result.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "realtori/realtori.h"

namespace {

bool read_all(const std::string& path, std::string& text) {
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computations on real tori, Siegel spaces and their moduli"};
  std::string command;
  std::string input = "-";
  std::string output = "-";
  std::optional<double> tol, eps;
  std::optional<long long> bound;
  std::optional<unsigned long long> seed;
  int jobs = 1;
  bool list = false;

  app.add_option("command", command, "Default command for requests without a \"cmd\" field");
  app.add_option("-i,--input", input, "Request file, or - for stdin");
  app.add_option("-o,--output", output, "Result file, or - for stdout");
  app.add_option("--tol", tol, "Tolerance override");
  app.add_option("--eps", eps, "Theta truncation bound override");
  app.add_option("--bound", bound, "Search bound override (ext-equiv entries, coboundary word length)");
  app.add_option("--seed", seed, "Seed for sampled checks");
  app.add_option("--jobs", jobs, "Worker threads for batch arrays")->check(CLI::PositiveNumber);
  app.add_flag("--list-commands", list, "Print the accepted commands and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    size_t n = 0;
    const char* const* names = rt_job_commands(&n);
    for (size_t i = 0; i < n; ++i) std::cout << names[i] << "\n";
    return 0;
  }

  std::string request;
  if (!read_all(input, request)) {
    std::cerr << "realtori: cannot read " << input << "\n";
    return 2;
  }

  nlohmann::json opts = nlohmann::json::object();
  if (tol) opts["tol"] = *tol;
  if (eps) opts["eps"] = *eps;
  if (bound) opts["bound"] = *bound;
  if (seed) opts["seed"] = *seed;
  if (!command.empty()) opts["cmd"] = command;
  opts["threads"] = jobs;

  rt_result* result = nullptr;
  const rt_status status = rt_job_run(request.c_str(), opts.dump().c_str(), &result);
  if (!result) {
    std::cerr << "realtori: " << rt_last_error() << "\n";
    return status == RT_ERR_INPUT ? 2 : 1;
  }
  const int code = rt_result_exit_code(result);
  if (output == "-") {
    std::cout << rt_result_json(result);
  } else {
    std::ofstream out(output, std::ios::binary);
    out << rt_result_json(result);
    if (!out) {
      std::cerr << "realtori: cannot write " << output << "\n";
      rt_result_destroy(result);
      return 1;
    }
  }
  rt_result_destroy(result);
  return code;
}
