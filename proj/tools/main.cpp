#include "bdpt/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitError = 2;

bdpt::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bdpt::ConfigError("--config", "cannot open '" + path + "'");
  bdpt::Json j;
  try {
    j = bdpt::Json::parse(in);
  } catch (const bdpt::Json::parse_error& e) {
    throw bdpt::ConfigError("--config", std::string("not valid JSON: ") + e.what());
  }
  return bdpt::config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-derivative property testers over product distributions"};
  app.require_subcommand(1, 1);

  std::string config_path, epsilon, out_path, format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;

  const char* names[] = {"test", "distance", "dimred", "bloat", "hard", "bench", "axioms"};
  const char* blurbs[] = {"run a tester; exit 0 accept, 1 reject",
                          "exact distance to the property",
                          "check the dimension-reduction inequality (single function or sweep)",
                          "bloat to the uniform grid and compare distances",
                          "emit lower-bound constructions",
                          "sweep distributions and record tester queries",
                          "check the quasimetric axioms of a family"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--trials", trials, "override the trial count");
    sub->add_option("--epsilon", epsilon, "override epsilon, as p/q");
    sub->add_option("--out", out_path, "write output here instead of stdout");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    bdpt::ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (trials) {
      if (*trials < 1) throw bdpt::ConfigError("--trials", "must be at least 1");
      cfg.trials = *trials;
    }
    if (!epsilon.empty()) {
      cfg.epsilon = bdpt::rational_from_json(epsilon, "--epsilon");
      if (cfg.epsilon <= 0 || cfg.epsilon > 1) throw bdpt::ConfigError("--epsilon", "must lie in (0, 1]");
    }
    if (format.empty()) format = command == "bench" ? "csv" : "json";
    if (format == "csv" && command != "bench") throw bdpt::ConfigError("--format", "csv is only available for bench");

    bdpt::CommandResult res = bdpt::run_command(command, cfg, format);
    if (out_path.empty()) {
      std::cout << res.output;
    } else {
      std::ofstream out(out_path);
      if (!out) throw bdpt::ConfigError("--out", "cannot write '" + out_path + "'");
      out << res.output;
    }
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
