#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oco/core.hpp"
#include "oco/losses.hpp"

namespace oco {

enum class LearnerKind {
  kFixedRate,
  kGlobalAdaptive,
  kPerCoordinate,
  kStronglyConvex,
  kPassiveAggressive,
};

std::string to_string(LearnerKind kind);

// Serializable description of a learner; echoed next to every result.
struct LearnerConfig {
  LearnerKind kind = LearnerKind::kPerCoordinate;
  double scale = 1.0;
  std::string box;
  double lambda = 0.0;
  double eta = 0.0;
  std::string strong_convexity;
  std::uint64_t seed = 0;
  std::string notes;

  // One "key=value" pair per line.
  std::string to_string() const;
};

// Per-coordinate strong-convexity constants H_i. Either a single value for
// every coordinate or an explicit vector; coordinates past its end are missing.
class StrongConvexityVector {
 public:
  StrongConvexityVector() = default;
  explicit StrongConvexityVector(std::vector<double> values) : values_(std::move(values)) {}
  static StrongConvexityVector uniform(double h);

  std::optional<double> at(Index i) const;
  std::string describe() const;

 private:
  std::vector<double> values_;
  std::optional<double> uniform_;
};

// Stateful online learner over a box. Each round the caller reads the
// current point, reveals a loss (or its subgradient), and the learner moves.
class Learner {
 public:
  explicit Learner(Box box);
  virtual ~Learner() = default;

  const Box& box() const { return box_; }
  // 1-based index of the round about to be played.
  std::size_t round() const { return round_; }

  double coordinate(Index i) const;
  // Materialized coordinates; anything past the end is 0.
  std::span<const double> dense() const { return x_; }
  SparseVector point() const { return SparseVector::from_dense(x_); }
  virtual double predict(const SparseVector& theta) const { return dot(theta, dense()); }

  // Feeds the subgradient of f at the current point.
  virtual void observe(const LossFunction& f);
  // Non-finite or out-of-box gradients throw InvalidInput and leave the state untouched.
  void update(const SparseVector& gradient);

  virtual LearnerConfig config() const = 0;

 protected:
  virtual void apply(const SparseVector& gradient) = 0;
  // Materializes coordinate i; new coordinates start at the projection of 0.
  void ensure(Index i);
  void advance() { ++round_; }
  void check_in_box() const;

  Box box_;
  std::vector<double> x_;
  std::size_t round_ = 1;
};

// x' = P(x - eta g) with a constant rate.
class FixedRateOgd final : public Learner {
 public:
  FixedRateOgd(Box box, double eta);
  double eta() const { return eta_; }
  LearnerConfig config() const override;

 private:
  void apply(const SparseVector& g) override;
  double eta_;
};

// Global adaptive rate eta_t = scale * D / sqrt(2 sum_s |g_s|^2). With
// DiameterMode::kOnline, D is estimated from the coordinates seen so far.
class GlobalAdaptiveOgd final : public Learner {
 public:
  enum class DiameterMode { kTrue, kOnline };

  GlobalAdaptiveOgd(Box box, double scale = 1.0, DiameterMode mode = DiameterMode::kOnline);

  double squared_gradient_sum() const { return sum_sq_; }
  double diameter_estimate() const;
  // Rate used by the most recent update (0 before any movement).
  double last_rate() const { return last_rate_; }
  std::size_t seen_coordinates() const { return seen_count_; }
  LearnerConfig config() const override;

 private:
  void apply(const SparseVector& g) override;

  double scale_;
  DiameterMode mode_;
  double sum_sq_ = 0.0;
  double seen_diameter_sq_ = 0.0;
  std::size_t seen_count_ = 0;
  std::vector<bool> seen_;
  double last_rate_ = 0.0;
};

// Per-coordinate rates eta_{t,i} = scale * D_i / sqrt(sum_s g_{s,i}^2).
class PerCoordinateOgd final : public Learner {
 public:
  explicit PerCoordinateOgd(Box box, double scale = 1.0);

  double accumulator(Index i) const { return i < sum_sq_.size() ? sum_sq_[i] : 0.0; }
  // Rate the next nonzero gradient on i would use if it had zero magnitude;
  // nullopt before the first nonzero gradient.
  std::optional<double> rate(Index i) const;
  LearnerConfig config() const override;

 private:
  void apply(const SparseVector& g) override;

  double scale_;
  std::vector<double> sum_sq_;
};

// Per-coordinate strongly convex rates eta_{t,i} = 1 / (H_i tau_i), where
// tau_i counts rounds with a nonzero gradient on i.
class StronglyConvexOgd final : public Learner {
 public:
  StronglyConvexOgd(Box box, StrongConvexityVector h);

  std::size_t active_rounds(Index i) const { return i < tau_.size() ? tau_[i] : 0; }
  LearnerConfig config() const override;

 private:
  void apply(const SparseVector& g) override;

  StrongConvexityVector h_;
  std::vector<std::size_t> tau_;
};

// Unconstrained Passive-Aggressive classifier, no-slack variant:
// x' = x + tau y theta, tau = hinge / |theta|^2. Only observes losses that
// carry an Example.
class PassiveAggressive final : public Learner {
 public:
  explicit PassiveAggressive(std::size_t dimension);

  void observe(const LossFunction& f) override;
  void update_example(const Example& ex);
  // Rounds with positive loss but an all-zero feature vector.
  std::size_t skipped_updates() const { return skipped_; }
  LearnerConfig config() const override;

 private:
  void apply(const SparseVector& g) override;
  std::size_t skipped_ = 0;
};

// ---------------------------------------------------------------------------
// Coordinate decomposition.

enum class SurrogateMode { kLinearized, kStronglyConvex };

// l(y) = constant + slope (y - center) + curvature / 2 (y - center)^2
struct CoordinateSurrogate {
  double constant = 0.0;
  double slope = 0.0;
  double center = 0.0;
  double curvature = 0.0;

  double operator()(double y) const {
    const double d = y - center;
    return constant + slope * d + 0.5 * curvature * d * d;
  }
  double derivative(double y) const { return slope + curvature * (y - center); }
};

struct DecompositionOptions {
  SurrogateMode mode = SurrogateMode::kLinearized;
  // Coordinate with a_i = b_i = 1 that absorbs the constant term. Without
  // one the constant is split evenly over all coordinates.
  std::optional<Index> bias;
  StrongConvexityVector h;
};

// Splits a convex f_t around the played point x_t into one surrogate per
// box coordinate. sum_i l_i(x_{t,i}) = f_t(x_t), and sum_i l_i(y_i) <= f_t(y)
// whenever f_t is convex (strongly convex w.r.t. H in kStronglyConvex mode).
std::vector<CoordinateSurrogate> decompose(double value_at_point, const SparseVector& gradient,
                                           std::span<const double> point, const Box& box,
                                           const DecompositionOptions& options);

using CoordinateLearnerFactory = std::function<std::unique_ptr<Learner>(const Box& interval, Index coord)>;

// Runs an independent one-dimensional learner per coordinate, each fed the
// derivative of its surrogate at its own point.
class CompositeLearner {
 public:
  CompositeLearner(Box box, const CoordinateLearnerFactory& factory, DecompositionOptions options);

  std::vector<double> point() const;
  const Box& box() const { return box_; }
  // Plays the round against f and returns the surrogates that were fed.
  std::vector<CoordinateSurrogate> observe(const LossFunction& f);

 private:
  Box box_;
  DecompositionOptions options_;
  std::vector<std::unique_ptr<Learner>> coordinates_;
};

}  // namespace oco
