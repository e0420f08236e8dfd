// gammalab command line front end. Talks to the shared library exclusively
// through the C API in gammalab.h.

#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "gammalab.h"

int main(int argc, char** argv) {
  CLI::App app{"gammalab - nonlocal isoperimetric energy laboratory"};
  app.require_subcommand(1);

  std::string config, out_dir = ".", kernel_spec, level = "fast";
  int dim = 2;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* gamma_crit =
      app.add_subcommand("gamma-crit", "critical coupling for a kernel spec");
  gamma_crit->add_option("kernel", kernel_spec, "kernel spec, e.g. helmholtz")
      ->required();
  gamma_crit->add_option("--n", dim, "dimension (2 or 3)");

  auto* sweep = app.add_subcommand("sweep", "energy sweep over epsilons");
  sweep->add_option("--config", config, "config file")->required();
  sweep->add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("level", level, "fast or full");
  verify->add_option("--out", out_dir, "output directory");

  auto* anneal = app.add_subcommand("anneal", "volume-conserving annealing");
  anneal->add_option("--config", config, "config file")->required();
  anneal->add_option("--out", out_dir, "output directory");
  anneal->add_option("--seed", seed, "override the config seed")
      ->check([&seed_set](const std::string&) {
        seed_set = true;
        return std::string();
      });

  auto* autocorr =
      app.add_subcommand("autocorr", "radial autocorrelation of a shape");
  autocorr->add_option("--config", config, "config file")->required();
  autocorr->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (gamma_crit->parsed()) return gl_cmd_gamma_crit(kernel_spec.c_str(), dim);
  if (sweep->parsed()) return gl_cmd_sweep(config.c_str(), out_dir.c_str());
  if (verify->parsed()) return gl_cmd_verify(level.c_str(), out_dir.c_str());
  if (anneal->parsed())
    return gl_cmd_anneal(config.c_str(), out_dir.c_str(),
                         seed_set ? &seed : nullptr);
  if (autocorr->parsed()) return gl_cmd_autocorr(config.c_str(), out_dir.c_str());
  return 1;
}
