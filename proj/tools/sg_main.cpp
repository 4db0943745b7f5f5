// Experiment driver for the sine-Gordon 2-soliton laboratory.
//
// Subcommands: identities, roundtrip, nondegeneracy, stability, evolve.
// Settings come from an optional --config file (flat key = value lines) with
// trailing key=value overrides. Exit code 0 iff every threshold passed.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "sglab/config.hpp"
#include "sglab/experiments.hpp"

namespace {

int dispatch(const std::string& name, const sg::Config& cfg, const std::string& output) {
  sg::RunReport rep;
  if (name == "identities") rep = sg::run_identities(cfg);
  else if (name == "roundtrip") rep = sg::run_roundtrip(cfg);
  else if (name == "nondegeneracy") rep = sg::run_nondegeneracy(cfg);
  else if (name == "stability") rep = sg::run_stability(cfg);
  else if (name == "evolve") rep = sg::run_evolve(cfg);
  else throw std::runtime_error("unknown subcommand " + name);

  if (output.empty() || output == "-") {
    std::cout << rep.csv;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + output);
    f << rep.csv;
  }
  if (!rep.summary.empty()) std::cerr << rep.summary;
  std::cerr << (rep.failures == 0 ? "PASS" : "FAIL") << " (" << rep.failures
            << " failures)\n";
  return rep.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sine-Gordon 2-soliton laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::vector<std::string> overrides;

  const std::pair<const char*, const char*> subs[] = {
      {"identities", "closed-form identity and BT-residual suite"},
      {"roundtrip", "descent/ascent round trips with permutability checks"},
      {"nondegeneracy", "scan of the ascent pairing integral I(x1, beta)"},
      {"stability", "orbital-stability sweep with modulation"},
      {"evolve", "trajectory or modulation-track export"},
  };
  for (const auto& [name, desc] : subs) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "flat key = value settings file");
    sub->add_option("-o,--output", output, "CSV output path (default: stdout)");
    sub->add_option("overrides", overrides, "key=value overrides");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    sg::Config cfg;
    if (!config_path.empty()) cfg = sg::Config::from_file(config_path);
    for (const auto& ov : overrides) cfg.set(ov);
    const std::string name = app.get_subcommands().front()->get_name();
    cfg.validate(sg::subcommand_schema(name));
    return dispatch(name, cfg, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
