#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oco/audit.hpp"
#include "oco/bounds.hpp"
#include "oco/data_io.hpp"
#include "oco/learners.hpp"
#include "oco/losses.hpp"

namespace oco {

enum class Experiment { kClassify, kLogreg, kSeparation, kBoundsAudit };

std::string to_string(Experiment e);

// Bad command-line or config values.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Experiment experiment = Experiment::kClassify;
  // A LIBSVM path, or "synthetic:sentiment" / "synthetic:ctr".
  std::string dataset;
  std::vector<std::string> algorithms;
  std::optional<double> radius;
  std::optional<double> scale_percoord;
  std::optional<double> scale_global;
  // Picked from {1e-2, 1e-3, 1e-4, 0} by progressive log-loss on the
  // synthetic CTR stream; zero won.
  double lambda = 0.0;
  std::uint64_t seed = 7;
  std::size_t synthetic_examples = 100000;
  std::vector<std::size_t> t0 = {1000, 10000, 100000};
  double eta_min = 1e-4;
  double eta_max = 1.0;
  std::size_t eta_count = 50;
  double eps = 0.01;
  double comparator_scale = 1.0;
  std::size_t comparator_max_passes = 200;
  double comparator_tol = 1e-6;
  bool timing = false;
  std::string out;

  // Fills experiment-specific defaults (R, scales, algorithms, dataset).
  RunConfig resolved() const;
  // Every field as (key, value), in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

struct SeparationPoint {
  std::size_t t0 = 0;
  std::size_t rounds = 0;
  double global_eta = 0.0;
  double global_regret = 0.0;
  double global_lower_bound = 0.0;  // proof expression at the grid-best eta
  double percoord_regret = 0.0;
  double percoord_bound = 0.0;      // sum_i D_i sqrt(2 sum_t g_{t,i}^2)
};

struct AlgorithmSummary {
  std::string algorithm;
  double scale = 0.0;
  double cumulative_loss = 0.0;
  std::optional<double> comparator_loss;
  bool comparator_converged = false;
  std::optional<double> regret;
  std::optional<double> regret_per_round;
  std::optional<double> avg_hinge_loss;
  std::optional<double> mistake_fraction;
  std::size_t comparator_passes = 0;
};

struct RunResult {
  std::string output;  // CSV or audit report
  int exit_code = 0;
  std::vector<AlgorithmSummary> algorithms;
  std::vector<SeparationPoint> separation;
  std::optional<double> global_slope;
  std::optional<double> percoord_slope;
  std::vector<PropertyResult> audit;
};

struct PassStats {
  // Examples with label * prediction <= 0; a zero prediction counts as a mistake.
  std::size_t mistakes = 0;
};

// Single progressive-validation pass. Each example is scored with the
// learner's current point and its loss recorded before the learner observes it.
PassStats progressive_pass(const std::vector<Example>& examples, Learner& learner,
                           const std::function<LossFunction(const Example&)>& loss_for, RegretLedger& ledger);

RunResult run_classify(const RunConfig& config);
RunResult run_logreg(const RunConfig& config);
RunResult run_separation(const RunConfig& config);
RunResult run_bounds_audit(const RunConfig& config);
RunResult run_experiment(const RunConfig& config);

// Ordinary least squares slope of log(y) on log(x); nullopt with < 3 points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Resolves "synthetic:..." names or loads a file.
Dataset load_dataset(const std::string& spec, std::uint64_t seed, std::size_t synthetic_examples);

}  // namespace oco
