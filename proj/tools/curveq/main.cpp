#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "config.hpp"
#include "report.hpp"
#include "tasks.hpp"

namespace {

enum ExitCode { kSuccess = 0, kInvariantFailure = 1, kConfigError = 2 };

std::string read_config(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw curveq::app::ConfigError("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw curveq::app::ConfigError("cannot write output '" + path + "'");
  out << text;
}

// Bad input (config, expressions, curve domain, grid choice) as opposed to a
// failure of the numerics.
bool is_input_error(const curveq::Error& e) {
  using namespace curveq;
  return dynamic_cast<const app::ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
         dynamic_cast<const EvaluationError*>(&e) || dynamic_cast<const RegularityError*>(&e) ||
         dynamic_cast<const CurvatureError*>(&e) || dynamic_cast<const CurveDomainError*>(&e) ||
         dynamic_cast<const GridError*>(&e) || dynamic_cast<const TubeValidityError*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace curveq;
  using namespace curveq::app;

  CLI::App cli{"curveq: operators of a particle confined to a space curve"};
  std::string task_name, config_path, output_path, format_name;
  cli.add_option("task", task_name, "geometry | spectrum | verify | helix-check")->required();
  cli.add_option("--config", config_path, "JSON run configuration, or - for stdin")->required();
  cli.add_option("--output", output_path, "report path (default: config output.path, else stdout)");
  cli.add_option("--format", format_name, "csv | json (default: config output.format, else json)");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg;
  OutputFormat format = OutputFormat::json;
  std::string destination;
  try {
    cfg = parse_config(read_config(config_path), parse_task(task_name));
    format = format_name.empty() ? cfg.format.value_or(OutputFormat::json) : parse_format(format_name);
    destination = output_path.empty() ? cfg.output_path.value_or("") : output_path;
  } catch (const Error& e) {
    std::cerr << "curveq: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    const RunReport report = run_task(cfg);
    write_output(format == OutputFormat::json ? to_json_text(report) : to_csv_text(report), destination);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << fmt::format("curveq: {} {} in {:.3f} s\n", report.task, report.pass ? "passed" : "FAILED", seconds);
    return report.pass ? kSuccess : kInvariantFailure;
  } catch (const Error& e) {
    std::cerr << "curveq: " << e.what() << "\n";
    return is_input_error(e) ? kConfigError : kInvariantFailure;
  }
}
