#include "oco/learners.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "oco/errors.hpp"

namespace oco {

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kFixedRate: return "fixed";
    case LearnerKind::kGlobalAdaptive: return "global";
    case LearnerKind::kPerCoordinate: return "per-coord";
    case LearnerKind::kStronglyConvex: return "strongly-convex";
    case LearnerKind::kPassiveAggressive: return "pa";
  }
  return "unknown";
}

std::string LearnerConfig::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << oco::to_string(kind) << "\n"
     << "scale=" << scale << "\n"
     << "box=" << box << "\n"
     << "lambda=" << lambda << "\n"
     << "eta=" << eta << "\n"
     << "strong_convexity=" << strong_convexity << "\n"
     << "seed=" << seed << "\n";
  if (!notes.empty()) os << "notes=" << notes << "\n";
  return os.str();
}

StrongConvexityVector StrongConvexityVector::uniform(double h) {
  StrongConvexityVector v;
  v.uniform_ = h;
  return v;
}

std::optional<double> StrongConvexityVector::at(Index i) const {
  if (uniform_) return uniform_;
  if (i < values_.size()) return values_[i];
  return std::nullopt;
}

std::string StrongConvexityVector::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (uniform_) {
    os << *uniform_;
  } else {
    for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? " " : "") << values_[i];
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Learner::Learner(Box box) : box_(std::move(box)) {
  // Unmaterialized coordinates read as 0, so materialize everything up front
  // when some interval excludes 0.
  bool zero_inside = true;
  if (box_.is_uniform()) {
    zero_inside = box_.dimension() == 0 || (box_.lower(0) <= 0.0 && 0.0 <= box_.upper(0));
  } else {
    for (Index i = 0; i < box_.dimension() && zero_inside; ++i) {
      zero_inside = box_.lower(i) <= 0.0 && 0.0 <= box_.upper(i);
    }
  }
  if (!zero_inside && box_.dimension() > 0) ensure(box_.dimension() - 1);
}

double Learner::coordinate(Index i) const {
  if (i >= box_.dimension()) {
    throw InvalidInput("coordinate " + std::to_string(i) + " outside learner box");
  }
  return i < x_.size() ? x_[i] : 0.0;
}

void Learner::ensure(Index i) {
  if (i < x_.size()) return;
  if (i >= box_.dimension()) {
    throw InvalidInput("coordinate " + std::to_string(i) + " outside learner box");
  }
  const Index first = x_.size();
  x_.resize(i + 1);
  for (Index k = first; k <= i; ++k) x_[k] = box_.clamp(k, 0.0);
}

void Learner::observe(const LossFunction& f) { update(subgradient(f, dense())); }

void Learner::update(const SparseVector& gradient) {
  if (!gradient.all_finite()) throw InvalidInput("non-finite gradient");
  if (auto m = gradient.max_index(); m && *m >= box_.dimension()) {
    throw InvalidInput("gradient coordinate " + std::to_string(*m) + " outside learner box");
  }
  apply(gradient);
  advance();
  check_in_box();
}

void Learner::check_in_box() const {
#ifndef NDEBUG
  assert(box_.contains(x_, 0.0));
#endif
}

// ---------------------------------------------------------------------------

FixedRateOgd::FixedRateOgd(Box box, double eta) : Learner(std::move(box)), eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("fixed rate must be positive");
}

void FixedRateOgd::apply(const SparseVector& g) {
  for (const auto& [i, gi] : g) {
    ensure(i);
    x_[i] = box_.clamp(i, x_[i] - eta_ * gi);
  }
}

LearnerConfig FixedRateOgd::config() const {
  LearnerConfig c;
  c.kind = LearnerKind::kFixedRate;
  c.box = box_.describe();
  c.eta = eta_;
  return c;
}

// ---------------------------------------------------------------------------

GlobalAdaptiveOgd::GlobalAdaptiveOgd(Box box, double scale, DiameterMode mode)
    : Learner(std::move(box)), scale_(scale), mode_(mode) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("scale must be positive");
}

double GlobalAdaptiveOgd::diameter_estimate() const {
  return mode_ == DiameterMode::kTrue ? box_.diameter() : std::sqrt(seen_diameter_sq_);
}

void GlobalAdaptiveOgd::apply(const SparseVector& g) {
  sum_sq_ += g.squared_norm();
  for (const auto& [i, gi] : g) {
    if (i >= seen_.size()) seen_.resize(i + 1, false);
    if (!seen_[i]) {
      seen_[i] = true;
      ++seen_count_;
      const double d = box_.diameter(i);
      seen_diameter_sq_ += d * d;
    }
  }
  if (sum_sq_ == 0.0) return;
  last_rate_ = scale_ * diameter_estimate() / std::sqrt(2.0 * sum_sq_);
  for (const auto& [i, gi] : g) {
    ensure(i);
    x_[i] = box_.clamp(i, x_[i] - last_rate_ * gi);
  }
}

LearnerConfig GlobalAdaptiveOgd::config() const {
  LearnerConfig c;
  c.kind = LearnerKind::kGlobalAdaptive;
  c.scale = scale_;
  c.box = box_.describe();
  c.notes = mode_ == DiameterMode::kTrue ? "diameter=true" : "diameter=online";
  return c;
}

// ---------------------------------------------------------------------------

PerCoordinateOgd::PerCoordinateOgd(Box box, double scale) : Learner(std::move(box)), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("scale must be positive");
}

std::optional<double> PerCoordinateOgd::rate(Index i) const {
  const double s = accumulator(i);
  if (s == 0.0) return std::nullopt;
  return scale_ * box_.diameter(i) / std::sqrt(s);
}

void PerCoordinateOgd::apply(const SparseVector& g) {
  for (const auto& [i, gi] : g) {
    ensure(i);
    if (i >= sum_sq_.size()) sum_sq_.resize(x_.size(), 0.0);
    sum_sq_[i] += gi * gi;
    const double eta = scale_ * box_.diameter(i) / std::sqrt(sum_sq_[i]);
    x_[i] = box_.clamp(i, x_[i] - eta * gi);
  }
}

LearnerConfig PerCoordinateOgd::config() const {
  LearnerConfig c;
  c.kind = LearnerKind::kPerCoordinate;
  c.scale = scale_;
  c.box = box_.describe();
  return c;
}

// ---------------------------------------------------------------------------

StronglyConvexOgd::StronglyConvexOgd(Box box, StrongConvexityVector h)
    : Learner(std::move(box)), h_(std::move(h)) {}

void StronglyConvexOgd::apply(const SparseVector& g) {
  // Validate every active coordinate before touching state.
  for (const auto& [i, gi] : g) {
    const auto h = h_.at(i);
    if (!h || !(*h > 0.0)) {
      throw ConfigError("missing or non-positive strong convexity for coordinate " + std::to_string(i));
    }
  }
  for (const auto& [i, gi] : g) {
    ensure(i);
    if (i >= tau_.size()) tau_.resize(x_.size(), 0);
    ++tau_[i];
    const double eta = 1.0 / (*h_.at(i) * static_cast<double>(tau_[i]));
    x_[i] = box_.clamp(i, x_[i] - eta * gi);
  }
}

LearnerConfig StronglyConvexOgd::config() const {
  LearnerConfig c;
  c.kind = LearnerKind::kStronglyConvex;
  c.box = box_.describe();
  c.strong_convexity = h_.describe();
  return c;
}

// ---------------------------------------------------------------------------

PassiveAggressive::PassiveAggressive(std::size_t dimension) : Learner(Box::unbounded(dimension)) {}

void PassiveAggressive::observe(const LossFunction& f) {
  if (const auto* h = std::get_if<HingeLoss>(&f)) {
    update_example(h->example);
  } else if (const auto* l = std::get_if<LogisticLoss>(&f)) {
    update_example(l->example);
  } else {
    throw ConfigError("passive-aggressive needs a loss carrying an example");
  }
}

void PassiveAggressive::update_example(const Example& ex) {
  if (!ex.features.all_finite() || !std::isfinite(ex.label)) {
    throw InvalidInput("non-finite example");
  }
  if (auto m = ex.features.max_index(); m && *m >= box_.dimension()) {
    throw InvalidInput("example feature outside learner dimension");
  }
  const double loss = std::max(0.0, 1.0 - ex.label * predict(ex.features));
  if (loss > 0.0) {
    const double norm_sq = ex.features.squared_norm();
    if (norm_sq == 0.0) {
      ++skipped_;
    } else {
      const double tau = loss / norm_sq;
      for (const auto& [i, v] : ex.features) {
        ensure(i);
        x_[i] += tau * ex.label * v;
      }
    }
  }
  advance();
}

void PassiveAggressive::apply(const SparseVector&) {
  throw ContractViolation("passive-aggressive updates from examples, not gradients");
}

LearnerConfig PassiveAggressive::config() const {
  LearnerConfig c;
  c.kind = LearnerKind::kPassiveAggressive;
  c.box = "unconstrained";
  c.notes = "variant=PA (no slack); unconstrained; untuned";
  return c;
}

// ---------------------------------------------------------------------------

std::vector<CoordinateSurrogate> decompose(double value_at_point, const SparseVector& gradient,
                                           std::span<const double> point, const Box& box,
                                           const DecompositionOptions& options) {
  const std::size_t n = box.dimension();
  if (n == 0) throw ConfigError("decomposition over an empty box");
  if (options.bias) {
    const Index b = *options.bias;
    if (b >= n || box.lower(b) != 1.0 || box.upper(b) != 1.0) {
      throw ConfigError("bias coordinate must have a_i = b_i = 1");
    }
  }
  auto at = [&](Index i) { return i < point.size() ? point[i] : 0.0; };

  std::vector<CoordinateSurrogate> out(n);
  double linear_part = 0.0;
  for (Index i = 0; i < n; ++i) {
    out[i].center = at(i);
    out[i].slope = gradient[i];
    linear_part += out[i].slope * out[i].center;
    if (options.mode == SurrogateMode::kStronglyConvex) {
      const auto h = options.h.at(i);
      if (!h || *h < 0.0) {
        throw ConfigError("strongly convex surrogate needs H_i >= 0 at coordinate " + std::to_string(i));
      }
      out[i].curvature = *h;
    }
  }

  if (options.mode == SurrogateMode::kLinearized) {
    // l_i(y) = g_i y; whatever is left of f(x_t) is housed in the bias term.
    for (auto& s : out) s.constant = s.slope * s.center;
    const double residual = value_at_point - linear_part;
    if (options.bias) {
      // With y_bias pinned at 1 a constant is the same as extra slope.
      out[*options.bias].slope += residual;
      out[*options.bias].constant += residual;
    } else {
      for (auto& s : out) s.constant += residual / static_cast<double>(n);
    }
  } else if (options.bias) {
    out[*options.bias].constant = value_at_point;
  } else {
    for (auto& s : out) s.constant = value_at_point / static_cast<double>(n);
  }
  return out;
}

CompositeLearner::CompositeLearner(Box box, const CoordinateLearnerFactory& factory,
                                   DecompositionOptions options)
    : box_(std::move(box)), options_(std::move(options)) {
  coordinates_.reserve(box_.dimension());
  for (Index i = 0; i < box_.dimension(); ++i) {
    coordinates_.push_back(factory(box_.interval(i), i));
  }
}

std::vector<double> CompositeLearner::point() const {
  std::vector<double> x(coordinates_.size());
  for (Index i = 0; i < x.size(); ++i) x[i] = coordinates_[i]->coordinate(0);
  return x;
}

std::vector<CoordinateSurrogate> CompositeLearner::observe(const LossFunction& f) {
  const std::vector<double> x = point();
  const double value = loss_value(f, x);
  const SparseVector g = subgradient(f, x);
  auto surrogates = decompose(value, g, x, box_, options_);
  for (Index i = 0; i < coordinates_.size(); ++i) {
    SparseVector gi;
    gi.push_back(0, surrogates[i].derivative(x[i]));
    coordinates_[i]->update(gi);
  }
  return surrogates;
}

}  // namespace oco
