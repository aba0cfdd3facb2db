#include "oco/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oco/errors.hpp"
#include "oco/learners.hpp"

namespace oco {

double bound_B(double diameter, std::span<const double> rates, std::span<const double> grad_norms_sq) {
  if (rates.empty() || rates.size() != grad_norms_sq.size()) {
    throw ContractViolation("bound_B needs equal-length, non-empty sequences");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < rates.size(); ++t) {
    if (!(rates[t] > 0.0)) throw ContractViolation("bound_B rates must be positive");
    if (t > 0 && rates[t] > rates[t - 1]) {
      throw ContractViolation("bound_B rates must be non-increasing");
    }
    sum += grad_norms_sq[t] * rates[t];
  }
  return diameter * diameter / (2.0 * rates.back()) + 0.5 * sum;
}

GlobalBound r_min_global(double diameter, std::span<const double> grad_norms_sq) {
  double s = 0.0;
  for (double v : grad_norms_sq) s += v;
  return {diameter * std::sqrt(s), diameter * std::sqrt(2.0 * s)};
}

PerCoordinateBound bound_percoord(const Box& box, std::span<const double> coordinate_sums) {
  PerCoordinateBound out;
  for (Index i = 0; i < coordinate_sums.size(); ++i) {
    if (coordinate_sums[i] == 0.0) continue;
    const double term = box.diameter(i) * std::sqrt(2.0 * coordinate_sums[i]);
    out.terms.emplace_back(i, term);
    out.total += term;
  }
  return out;
}

namespace {

std::vector<double> coordinate_sums_of(std::span<const SparseVector> grad_log) {
  std::vector<double> sums;
  for (const auto& g : grad_log) {
    for (const auto& [i, v] : g) {
      if (i >= sums.size()) sums.resize(i + 1, 0.0);
      sums[i] += v * v;
    }
  }
  return sums;
}

}  // namespace

PerCoordinateBound bound_percoord(const Box& box, std::span<const SparseVector> grad_log) {
  return bound_percoord(box, coordinate_sums_of(grad_log));
}

Dominance check_dominance(const Box& box, std::span<const SparseVector> grad_log) {
  Dominance d;
  d.lhs = bound_percoord(box, grad_log).total;
  double total = 0.0;
  for (const auto& g : grad_log) total += g.squared_norm();
  d.rhs = box.diameter() * std::sqrt(2.0 * total);
  d.holds = d.lhs <= d.rhs * (1.0 + 1e-9);
  return d;
}

std::pair<double, double> sqrt_sum_lhs_rhs(std::span<const double> x) {
  double running = 0.0;
  double lhs = 0.0;
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("square-root sum needs finite non-negative inputs");
    running += v;
    if (running > 0.0) lhs += v / std::sqrt(running);
  }
  return {lhs, 2.0 * std::sqrt(running)};
}

namespace {

double total_loss(std::span<const LossFunction> losses, std::span<const double> x) {
  double s = 0.0;
  for (const auto& f : losses) s += loss_value(f, x);
  return s;
}

StaticOptimum closed_form(std::span<const LossFunction> losses, const Box& box) {
  std::vector<double> sums;
  for (const auto& f : losses) {
    const auto* lin = std::get_if<LinearLoss>(&f);
    if (!lin) throw ContractViolation("closed-form optimum requires linear losses");
    for (const auto& [i, v] : lin->g) {
      if (i >= box.dimension()) throw InvalidInput("gradient coordinate outside box");
      if (i >= sums.size()) sums.resize(i + 1, 0.0);
      sums[i] += v;
    }
  }
  StaticOptimum out;
  out.point.resize(box.dimension());
  for (Index i = 0; i < box.dimension(); ++i) {
    const double s = i < sums.size() ? sums[i] : 0.0;
    out.point[i] = s < 0.0 ? box.upper(i) : box.lower(i);
    out.loss += s * out.point[i];
  }
  out.passes = 1;
  return out;
}

StaticOptimum grid(std::span<const LossFunction> losses, const Box& box, std::size_t points) {
  if (box.dimension() != 1) throw ContractViolation("grid optimum is one-dimensional");
  if (points < 2) throw ContractViolation("grid needs at least two points");
  const double a = box.lower(0);
  const double b = box.upper(0);
  StaticOptimum out;
  out.loss = std::numeric_limits<double>::infinity();
  double x[1];
  for (std::size_t k = 0; k < points; ++k) {
    x[0] = a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1);
    const double v = total_loss(losses, x);
    if (v < out.loss) {
      out.loss = v;
      out.point = {x[0]};
    }
  }
  out.passes = 1;
  return out;
}

// Objective and summed subgradient at x in one sweep. The L2 part of
// logistic losses is added once for the whole sequence.
double batch_gradient(std::span<const LossFunction> losses, std::span<const double> x,
                      std::vector<double>& grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  double value = 0.0;
  double lambda_sum = 0.0;
  for (const auto& f : losses) {
    if (const auto* l = std::get_if<LogisticLoss>(&f)) {
      const double y = l->example.label;
      const double z = -y * dot(l->example.features, x);
      value += softplus(z);
      const double w = -y * sigmoid(z);
      for (const auto& [i, v] : l->example.features) grad.at(i) += w * v;
      lambda_sum += l->lambda;
    } else {
      value += loss_value(f, x);
      for (const auto& [i, v] : subgradient(f, x)) grad.at(i) += v;
    }
  }
  if (lambda_sum != 0.0) {
    double norm_sq = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
      grad[i] += lambda_sum * x[i];
      norm_sq += x[i] * x[i];
    }
    value += 0.5 * lambda_sum * norm_sq;
  }
  return value;
}

// Per-coordinate OGD where every pass over the data is one round whose
// gradient is the sum of the per-example subgradients.
StaticOptimum iterative(std::span<const LossFunction> losses, const Box& box, const IterativeOptions& opt) {
  PerCoordinateOgd learner(box, opt.scale);
  std::vector<double> x(box.dimension()), grad(box.dimension());
  auto sync = [&] {
    std::fill(x.begin(), x.end(), 0.0);
    std::copy(learner.dense().begin(), learner.dense().end(), x.begin());
  };
  sync();
  StaticOptimum out;
  out.converged = false;
  double previous = batch_gradient(losses, x, grad);
  out.loss = previous;
  out.point = x;
  std::vector<double> last = x, mid(x.size()), scratch(x.size());
  auto keep = [&](double value, const std::vector<double>& p) {
    if (value < out.loss) {
      out.loss = value;
      out.point = p;
    }
  };
  for (std::size_t pass = 1; pass <= opt.max_passes; ++pass) {
    learner.update(SparseVector::from_dense(grad));
    sync();
    const double current = batch_gradient(losses, x, grad);
    out.passes = pass;
    keep(current, x);
    // Equal losses on either side of the minimum look converged. The midpoint
    // of the two iterates exposes that, and is often the better point.
    for (std::size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + last[i]);
    const double middle = batch_gradient(losses, mid, scratch);
    keep(middle, mid);
    const double tol = opt.tol_rel * std::max(std::abs(current), 1e-300);
    if (std::abs(current - previous) <= tol && std::max(current, previous) - middle <= tol) {
      out.converged = true;
      break;
    }
    previous = current;
    last = x;
  }
  return out;
}

}  // namespace

StaticOptimum static_optimum(std::span<const LossFunction> losses, const Box& box, OptimumMode mode,
                             const IterativeOptions& options) {
  if (losses.empty()) throw ContractViolation("static optimum of an empty loss sequence");
  switch (mode) {
    case OptimumMode::kClosedForm: return closed_form(losses, box);
    case OptimumMode::kGrid: return grid(losses, box, options.grid_points);
    case OptimumMode::kIterative: return iterative(losses, box, options);
  }
  throw ContractViolation("unknown optimum mode");
}

// ---------------------------------------------------------------------------

void RegretLedger::record(double loss, const SparseVector& gradient) {
  losses_.push_back(loss);
  cumulative_ += loss;
  double norm_sq = 0.0;
  for (const auto& [i, v] : gradient) {
    if (i >= coordinate_sums_.size()) coordinate_sums_.resize(i + 1, 0.0);
    coordinate_sums_[i] += v * v;
    norm_sq += v * v;
  }
  norms_sq_.push_back(norm_sq);
  if (keep_log_) gradients_.push_back(gradient);
}

void RegretLedger::resolve(double comparator_loss, bool converged) {
  comparator_ = comparator_loss;
  converged_ = converged;
  resolved_ = true;
}

void RegretLedger::mark_not_applicable() {
  comparator_.reset();
  converged_ = false;
  resolved_ = true;
}

std::optional<double> RegretLedger::regret() const {
  if (!comparator_) return std::nullopt;
  return cumulative_ - *comparator_;
}

std::optional<double> RegretLedger::regret_per_round() const {
  auto r = regret();
  if (!r || losses_.empty()) return std::nullopt;
  return *r / static_cast<double>(losses_.size());
}

BoundSummary RegretLedger::bounds(const Box& box) const {
  BoundSummary b;
  const GlobalBound g = r_min_global(box.diameter(), norms_sq_);
  b.r_min = g.r_min;
  b.b_global = g.adaptive;
  b.b_percoord = bound_percoord(box, std::span<const double>(coordinate_sums_)).total;
  b.r_min_percoord_sum = b.b_percoord / std::sqrt(2.0);
  return b;
}

}  // namespace oco
