// Command-line driver for the experiment harness.
//
//   ocobench classify     [--dataset PATH] [--seed N] ...
//   ocobench logreg       [--dataset synthetic:ctr] ...
//   ocobench separation   [--t0 1000 --t0 10000 ...]
//   ocobench bounds-audit [--seed N]
//   ocobench generate     --dataset synthetic:sentiment --out FILE
//
// Every flag also works as a "key = value" line in a file passed with --config.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oco/data_io.hpp"
#include "oco/errors.hpp"
#include "oco/harness.hpp"

namespace {

int emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "ocobench: cannot write " << path << "\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online convex optimization benchmark: per-coordinate vs global learning rates"};
  app.set_config("--config", "", "Key-value config file; keys are the long flag names");

  oco::RunConfig config;
  std::string command;
  double radius = 0.0, scale_percoord = 0.0, scale_global = 0.0;

  app.add_option("experiment", command, "classify | logreg | separation | bounds-audit | generate")
      ->required()
      ->check(CLI::IsMember({"classify", "logreg", "separation", "bounds-audit", "generate"}));
  app.add_option("--dataset", config.dataset, "LIBSVM file (optionally gzip) or synthetic:sentiment / synthetic:ctr");
  app.add_option("--algorithms", config.algorithms, "Subset of global, per-coord, pa")->delimiter(',');
  auto* r_opt = app.add_option("--R", radius, "Box radius: F = [-R, R]^n");
  auto* spc_opt = app.add_option("--scale-percoord", scale_percoord, "Multiplier on the per-coordinate rate");
  auto* sg_opt = app.add_option("--scale-global", scale_global, "Multiplier on the global rate");
  app.add_option("--lambda", config.lambda, "L2 regularization for logreg");
  app.add_option("--seed", config.seed, "Shuffle / generator seed");
  app.add_option("--synthetic-examples", config.synthetic_examples, "Length of the synthetic CTR stream");
  app.add_option("--t0", config.t0, "Oscillation lengths for the separation experiment")->delimiter(',');
  app.add_option("--eta-min", config.eta_min, "Smallest fixed rate in the grid");
  app.add_option("--eta-max", config.eta_max, "Largest fixed rate in the grid");
  app.add_option("--eta-count", config.eta_count, "Number of log-spaced grid rates");
  app.add_option("--eps", config.eps, "Kink location of the oscillation losses");
  app.add_option("--comparator-scale", config.comparator_scale, "Rate multiplier for the comparator passes");
  app.add_option("--comparator-max-passes", config.comparator_max_passes, "Pass limit for the comparator");
  app.add_option("--comparator-tol", config.comparator_tol, "Relative change that ends the comparator passes");
  app.add_flag("--timing", config.timing, "Fill the wall_ms column (output is then not reproducible)");
  app.add_option("--out", config.out, "Output path; stdout when omitted");

  CLI11_PARSE(app, argc, argv);
  if (*r_opt) config.radius = radius;
  if (*spc_opt) config.scale_percoord = scale_percoord;
  if (*sg_opt) config.scale_global = scale_global;

  try {
    if (command == "generate") {
      if (config.dataset.rfind("synthetic:", 0) != 0) {
        throw oco::UsageError("generate needs --dataset synthetic:sentiment or synthetic:ctr");
      }
      const oco::Dataset data = oco::load_dataset(config.dataset, config.seed, config.synthetic_examples);
      std::cerr << "ocobench: generated " << data.size() << " examples, dimension " << data.dimension << "\n";
      return emit(oco::to_libsvm(data), config.out);
    }
    if (command == "classify") config.experiment = oco::Experiment::kClassify;
    if (command == "logreg") config.experiment = oco::Experiment::kLogreg;
    if (command == "separation") config.experiment = oco::Experiment::kSeparation;
    if (command == "bounds-audit") config.experiment = oco::Experiment::kBoundsAudit;

    std::cerr << "ocobench: running " << command << "\n";
    const oco::RunResult result = oco::run_experiment(config);
    for (const auto& a : result.algorithms) {
      if (a.comparator_loss && !a.comparator_converged) {
        std::cerr << "ocobench: comparator did not converge for " << a.algorithm << "\n";
      }
    }
    if (result.global_slope) std::cerr << "ocobench: global slope " << *result.global_slope << "\n";
    if (result.percoord_slope) std::cerr << "ocobench: per-coord slope " << *result.percoord_slope << "\n";
    const int written = emit(result.output, config.out);
    return result.exit_code != 0 ? result.exit_code : written;
  } catch (const oco::UsageError& e) {
    std::cerr << "ocobench: usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ocobench: " << e.what() << "\n";
    return 1;
  }
}
