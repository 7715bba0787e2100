#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qjet/qjet.hpp"
#include "qjet/validate.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  qjet::RunnerOptions opt;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args.opt.out_dir, "output directory");
  sub->add_option("--threads", args.opt.threads, "worker threads for fans")
      ->check(CLI::PositiveNumber);
  sub->add_option("--dt", args.opt.dt_override,
                  "override integration.dt (and rootsearch probe dt)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--seed-sweep", args.opt.reverse_sweep,
                "sweep root-search continuation from high x to low");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajectory methods for the 1-D time-dependent Schrodinger "
               "equation"};
  app.require_subcommand(1);

  CommonArgs propagate_args, reference_args, interfere_args, compare_args;
  auto* propagate =
      app.add_subcommand("propagate", "integrate a fan of trajectories");
  add_common(propagate, propagate_args);
  auto* reference =
      app.add_subcommand("reference", "split-operator grid propagation");
  add_common(reference, reference_args);
  auto* interfere = app.add_subcommand(
      "interfere", "branch classification and superposition");
  add_common(interfere, interfere_args);
  auto* compare = app.add_subcommand(
      "compare", "error metrics of a trajectory method against a reference");
  add_common(compare, compare_args);
  app.add_subcommand("validate", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    auto dispatch = [](const CommonArgs& args,
                       int (*run)(const qjet::RunConfig&,
                                  const qjet::RunnerOptions&)) {
      const qjet::RunConfig cfg = qjet::parse_config_file(args.config_path);
      return run(cfg, args.opt);
    };
    if (propagate->parsed())
      return dispatch(propagate_args, &qjet::run_propagate);
    if (reference->parsed())
      return dispatch(reference_args, &qjet::run_reference);
    if (interfere->parsed())
      return dispatch(interfere_args, &qjet::run_interfere);
    if (compare->parsed()) return dispatch(compare_args, &qjet::run_compare);
    const int failures = qjet::run_validate(std::cout);
    std::cout << (failures == 0 ? "all checks passed\n"
                                : "some checks FAILED\n");
    return failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
