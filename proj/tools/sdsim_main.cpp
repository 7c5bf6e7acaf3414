// sdsim: command-line front end for the spectral split-step simulator and
// verification harness.  Subcommands map one-to-one onto scenario runners:
//
//   sdsim simulate    --config c.json --out dir [--strict]
//   sdsim picard      --config c.json --out dir [--strict]
//   sdsim ineq        --config c.json --out dir [--strict]
//   sdsim kappa-limit --config c.json --out dir [--strict]
//
// Exit codes: 0 success; 2 configuration/usage error; 3 a requested bound
// check failed and --strict was given; 1 unexpected runtime failure.

#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "sdm/runner.hpp"

namespace {

struct SubArgs {
  std::string config;
  std::string out;
  bool strict = false;
};

void add_common(CLI::App* sub, SubArgs& args) {
  sub->add_option("--config", args.config, "path to the run configuration JSON")->required();
  sub->add_option("--out", args.out, "output directory (overrides the config's \"out\")");
  sub->add_flag("--strict", args.strict, "exit 3 when any requested bound check fails");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral split-step simulator and verification harness for a Schrodinger "
               "equation with relaxation coupling on the flat torus and the 2-sphere"};
  app.set_version_flag("--version", sdm::kToolVersion);
  app.require_subcommand(1);

  const std::map<std::string, std::string> scenario_of = {{"simulate", "simulate"},
                                                          {"picard", "picard"},
                                                          {"ineq", "ineq"},
                                                          {"kappa-limit", "kappa_limit"}};
  SubArgs args;
  add_common(app.add_subcommand("simulate", "split-step run with diagnostics and bound checks"),
             args);
  add_common(app.add_subcommand("picard", "fixed-point iteration and existence-time sweep"),
             args);
  add_common(app.add_subcommand("ineq", "functional-inequality probes"), args);
  add_common(app.add_subcommand("kappa-limit", "relaxation-to-cubic-limit comparison"), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage problems share the configuration-error exit code
  }

  const std::string sub_name = app.get_subcommands().front()->get_name();
  try {
    sdm::RunConfig cfg = sdm::load_config(args.config);
    const std::string& expected = scenario_of.at(sub_name);
    if (cfg.scenario != expected)
      throw sdm::ConfigError("config scenario is \"" + cfg.scenario +
                             "\" but the subcommand is \"" + sub_name + "\"");
    std::string out = args.out.empty() ? cfg.out : args.out;
    sdm::RunArtifacts art = sdm::run_scenario(cfg, out);
    std::printf("%s: wrote %s (checks %s, %.0f ms)\n", sub_name.c_str(), art.out_dir.c_str(),
                art.checks_passed ? "passed" : "FAILED", art.wall_ms);
    if (args.strict && !art.checks_passed) return 3;
    return 0;
  } catch (const sdm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
