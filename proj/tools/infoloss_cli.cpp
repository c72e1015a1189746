#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <stdexcept>

#include "infoloss/errors.hpp"
#include "infoloss/experiment.hpp"
#include "infoloss/suites.hpp"

namespace {

constexpr int kChecksFailed = 1;
constexpr int kError = 2;

infoloss::ReportFormat parse_format(const std::string& s) {
  return s == "text" ? infoloss::ReportFormat::kText : infoloss::ReportFormat::kJson;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact information-loss analysis of finite-memory discrete systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format;
  auto* analyze = app.add_subcommand("analyze", "Run every analysis listed in a config file");
  analyze->add_option("config", config_path, "YAML experiment config")->required()->check(CLI::ExistingFile);
  analyze->add_option("--format", format, "Override the config's output format")->check(CLI::IsMember({"json", "text"}));

  std::string suite_name;
  infoloss::SuiteOptions suite_opts;
  std::string suite_format = "json";
  auto* suite = app.add_subcommand("suite", "Run a randomized invariant suite");
  suite->add_option("name", suite_name, "Suite name")->required()->check(CLI::IsMember(infoloss::suite_names()));
  suite->add_option("--seed", suite_opts.seed, "Base seed")->capture_default_str();
  suite->add_option("--instances", suite_opts.instances, "Number of random instances")->capture_default_str();
  suite->add_option("--max-n", suite_opts.max_n, "Longest block for rate brackets")->capture_default_str();
  suite->add_option("--threads", suite_opts.threads, "Worker threads (0 = all cores)")->capture_default_str();
  suite->add_option("--format", suite_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string rt_path;
  std::string rt_format;
  auto* roundtrip = app.add_subcommand("roundtrip", "Simulate and reconstruct; report pass/fail and first mismatch");
  roundtrip->add_option("config", rt_path, "YAML experiment config")->required()->check(CLI::ExistingFile);
  roundtrip->add_option("--format", rt_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::vector<double> b, a;
  std::string filter_format = "json";
  auto* filter = app.add_subcommand("filter", "Differential-entropy-rate change of a stable linear filter");
  filter->add_option("--b", b, "Numerator coefficients b_0 .. b_N")->required();
  filter->add_option("--a", a, "Feedback coefficients a_1 .. a_M of y[n] = sum b_k x[n-k] + sum a_l y[n-l]");
  filter->add_option("--format", filter_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? EXIT_SUCCESS : kError;
  }

  try {
    if (analyze->parsed() || roundtrip->parsed()) {
      const bool is_rt = roundtrip->parsed();
      auto config = infoloss::load_config(is_rt ? rt_path : config_path);
      const std::string& override = is_rt ? rt_format : format;
      if (!override.empty()) config.format = parse_format(override);
      const auto report = is_rt ? infoloss::run_round_trip(config) : infoloss::run_experiment(config);
      std::cout << infoloss::render(report.document, config.format);
      return report.passed ? EXIT_SUCCESS : kChecksFailed;
    }
    if (suite->parsed()) {
      suite_opts.caps = infoloss::default_caps();
      if (std::getenv("INFOLOSS_PATH_CAP") == nullptr) suite_opts.caps.paths = infoloss::SuiteOptions{}.caps.paths;
      const auto report = infoloss::run_suite(suite_name, suite_opts);
      std::cout << infoloss::render(infoloss::suite_report_json(report), parse_format(suite_format));
      return report.all_passed() ? EXIT_SUCCESS : kChecksFailed;
    }
    if (filter->parsed()) {
      std::cout << infoloss::render(infoloss::filter_report(b, a), parse_format(filter_format));
      return EXIT_SUCCESS;
    }
  } catch (const infoloss::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return EXIT_SUCCESS;
}
