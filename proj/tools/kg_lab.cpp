// kg-lab: runs wave-packet scenarios from JSON configs and writes fields and summaries.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "kglab/version.hpp"
#include "runner.hpp"

namespace {

namespace sc = kglab::scenarios;

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kBandwidth = 3, kIo = 4 };

int report(const char* kind, const std::string& message, const std::string& field, int code) {
  nlohmann::json err = {{"error", kind}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << err.dump() << '\n';
  return code;
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const sc::ConfigError& e) {
    return report("config", e.what(), e.field(), kConfig);
  } catch (const kglab::BandwidthError& e) {
    return report("bandwidth", e.what(), {}, kBandwidth);
  } catch (const sc::IoError& e) {
    return report("io", e.what(), {}, kIo);
  } catch (const std::exception& e) {
    return report("internal", e.what(), {}, kFailure);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Klein-Gordon / Schrodinger wave-packet lab"};
  app.set_version_flag("--version", std::string(kglab::version()));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario config and write its outputs");
  std::string run_config;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  bool quiet = false;
  run->add_option("config", run_config, "Scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory, overrides the config");
  run->add_option("--format", format, "Output format, overrides the config")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("-q,--quiet", quiet, "Do not print the summary table");

  auto* list = app.add_subcommand("scenarios", "List the available scenarios");

  auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults filled in");
  std::string validate_config;
  validate->add_option("config", validate_config, "Scenario config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (list->parsed()) {
    for (const auto& info : sc::catalog()) {
      std::printf("%-20s %-11s %s\n", std::string(info.name).c_str(), std::string(info.state_key).c_str(),
                  std::string(info.summary).c_str());
    }
    return kOk;
  }

  if (validate->parsed()) {
    return guarded([&] {
      const auto config = sc::load_config(validate_config);
      std::cout << sc::config_to_json(config) << '\n';
      return int{kOk};
    });
  }

  return guarded([&] {
    const auto config = sc::load_config(run_config);
    const auto dir = out_dir ? std::filesystem::path(*out_dir) : config.output;
    const auto fmt = format ? (*format == "json" ? sc::OutputFormat::Json : sc::OutputFormat::Csv) : config.format;
    const auto result = sc::run_scenario(config);
    sc::write_outputs(result, dir, fmt);
    if (!quiet) sc::print_summary(result, std::cout);
    return int{kOk};
  });
}
