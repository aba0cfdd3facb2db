#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "oco/core.hpp"
#include "oco/losses.hpp"

namespace oco {

// B = D^2 / (2 eta_T) + 1/2 sum_t |g_t|^2 eta_t for a non-increasing rate
// sequence. Increasing rates throw ContractViolation.
double bound_B(double diameter, std::span<const double> rates, std::span<const double> grad_norms_sq);

struct GlobalBound {
  double r_min = 0.0;     // D sqrt(sum |g_t|^2)
  double adaptive = 0.0;  // D sqrt(2 sum |g_t|^2), the guarantee of the adaptive global rate
};

GlobalBound r_min_global(double diameter, std::span<const double> grad_norms_sq);

struct PerCoordinateBound {
  double total = 0.0;
  // (i, D_i sqrt(2 sum_t g_{t,i}^2)) for every coordinate with a nonzero term.
  std::vector<std::pair<Index, double>> terms;
};

PerCoordinateBound bound_percoord(const Box& box, std::span<const SparseVector> grad_log);
// Same bound from per-coordinate squared-gradient sums, indexed by coordinate.
PerCoordinateBound bound_percoord(const Box& box, std::span<const double> coordinate_sums);

struct Dominance {
  double lhs = 0.0;  // sum_i D_i sqrt(2 sum_t g_{t,i}^2)
  double rhs = 0.0;  // D sqrt(2 sum_t |g_t|^2)
  bool holds = true;
};

Dominance check_dominance(const Box& box, std::span<const SparseVector> grad_log);

// (sum_i x_i / sqrt(sum_{j<=i} x_j), 2 sqrt(sum_i x_i)). Terms with a zero
// running sum contribute 0. Negative entries throw InvalidInput.
std::pair<double, double> sqrt_sum_lhs_rhs(std::span<const double> x);

enum class OptimumMode {
  kClosedForm,  // linear losses only
  kIterative,   // repeated passes of per-coordinate OGD
  kGrid,        // exhaustive grid, one-dimensional boxes only
};

struct IterativeOptions {
  double scale = 1.0;
  double tol_rel = 1e-6;
  std::size_t max_passes = 200;
  std::size_t grid_points = 100000;
};

struct StaticOptimum {
  std::vector<double> point;
  double loss = 0.0;
  bool converged = true;
  std::size_t passes = 0;
};

// Best fixed point in hindsight, min_{x in F} sum_t f_t(x). Closed-form ties
// (zero gradient sum on a coordinate) take the lower endpoint.
StaticOptimum static_optimum(std::span<const LossFunction> losses, const Box& box, OptimumMode mode,
                             const IterativeOptions& options = {});

struct BoundSummary {
  double b_global = 0.0;             // D sqrt(2 sum |g_t|^2)
  double r_min = 0.0;                // D sqrt(sum |g_t|^2)
  double b_percoord = 0.0;           // sum_i D_i sqrt(2 sum_t g_{t,i}^2)
  double r_min_percoord_sum = 0.0;   // b_percoord / sqrt(2)
};

// Per-round record of a single learner's run.
class RegretLedger {
 public:
  explicit RegretLedger(bool keep_gradient_log = true) : keep_log_(keep_gradient_log) {}

  void record(double loss, const SparseVector& gradient);
  void resolve(double comparator_loss, bool converged);
  // Resolved without a comparator: regret fields stay empty.
  void mark_not_applicable();

  bool resolved() const { return resolved_; }
  bool has_comparator() const { return comparator_.has_value(); }
  std::optional<double> comparator_loss() const { return comparator_; }
  bool comparator_converged() const { return converged_; }

  std::size_t rounds() const { return losses_.size(); }
  double cumulative_loss() const { return cumulative_; }
  std::optional<double> regret() const;
  std::optional<double> regret_per_round() const;

  std::span<const double> losses() const { return losses_; }
  std::span<const double> gradient_norms_sq() const { return norms_sq_; }
  std::span<const SparseVector> gradients() const { return gradients_; }
  std::span<const double> coordinate_sums() const { return coordinate_sums_; }

  BoundSummary bounds(const Box& box) const;

 private:
  bool keep_log_;
  std::vector<double> losses_;
  std::vector<double> norms_sq_;
  std::vector<SparseVector> gradients_;
  std::vector<double> coordinate_sums_;
  double cumulative_ = 0.0;
  std::optional<double> comparator_;
  bool converged_ = false;
  bool resolved_ = false;
};

}  // namespace oco
