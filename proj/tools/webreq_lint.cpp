// SPDX-License-Identifier: Apache-2.0
// webreq-lint: extract jQuery web API requests from JavaScript and check
// them against Swagger 2.0 specifications.
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "webreq/driver.hpp"
#include "webreq/version.hpp"

namespace {

enum class Format { Text, Json };

int run_command(const webreq::RunConfig& config, Format format) {
  const webreq::Report report = webreq::run(config);
  std::cout << (format == Format::Json ? webreq::render_json(report) : webreq::render_text(report));
  std::cout.flush();
  return webreq::exit_code(report, config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static checker for jQuery web API requests"};
  app.set_version_flag("--version", std::string(webreq::kVersion));
  app.require_subcommand(1);

  const std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}};
  const std::map<std::string, webreq::FailOn> fail_modes{{"any-mismatch", webreq::FailOn::AnyMismatch},
                                                         {"errors-only", webreq::FailOn::ErrorsOnly}};

  webreq::RunConfig extract_config;
  std::vector<std::string> extract_inputs;
  auto* extract = app.add_subcommand("extract", "Print the requests found in the inputs");
  extract->add_option("paths", extract_inputs, "JavaScript files or directories")->required();
  std::string extract_format = "text";
  extract->add_option("--format", extract_format, "Output format")
      ->transform(CLI::IsMember({"text", "json"}, CLI::ignore_case).description(""))
      ->option_text("text|json");
  extract->add_option("--max-value-set", extract_config.max_value_set, "Values kept per expression")
      ->check(CLI::PositiveNumber);
  extract->add_option("--jobs,-j", extract_config.jobs, "Worker threads (0 = all cores)");

  webreq::RunConfig check_config;
  check_config.command = webreq::RunConfig::Command::Check;
  std::vector<std::string> check_inputs;
  std::string specs;
  auto* check = app.add_subcommand("check", "Check the requests found in the inputs against specifications");
  check->add_option("paths", check_inputs, "JavaScript files or directories")->required();
  check->add_option("--specs", specs, "Directory of Swagger 2.0 JSON documents")->required();
  std::string check_format = "text";
  check->add_option("--format", check_format, "Output format")
      ->transform(CLI::IsMember({"text", "json"}, CLI::ignore_case).description(""))
      ->option_text("text|json");
  check->add_flag("--jquery-get-data-as-query", check_config.jquery_get_data_as_query,
                  "Count GET data as query parameters");
  check->add_option("--max-value-set", check_config.max_value_set, "Values kept per expression")
      ->check(CLI::PositiveNumber);
  std::string fail_on = "any-mismatch";
  check->add_option("--fail-on", fail_on, "When to exit with status 1")
      ->check(CLI::IsMember({"any-mismatch", "errors-only"}).description(""))
      ->option_text("any-mismatch|errors-only");
  check->add_option("--jobs,-j", check_config.jobs, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (extract->parsed()) {
      extract_config.inputs.assign(extract_inputs.begin(), extract_inputs.end());
      return run_command(extract_config, formats.at(extract_format));
    }
    check_config.inputs.assign(check_inputs.begin(), check_inputs.end());
    check_config.specs_dir = specs;
    check_config.fail_on = fail_modes.at(fail_on);
    return run_command(check_config, formats.at(check_format));
  } catch (const webreq::UsageError& e) {
    std::cerr << "webreq-lint: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "webreq-lint: " << e.what() << "\n";
    return 2;
  }
}
