#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oco/core.hpp"

namespace oco {

// f(x) = g . x
struct LinearLoss {
  SparseVector g;
};

// f(x) = G |x_coord - eps|
struct AbsoluteLoss {
  double G = 1.0;
  double eps = 0.0;
  Index coord = 0;
};

// f(x) = max(0, 1 - y (x . theta))
struct HingeLoss {
  Example example;
};

// f(x) = log(1 + exp(-y (x . theta))) + (lambda / 2) |x|^2
struct LogisticLoss {
  Example example;
  double lambda = 0.0;
};

// f(x) = 1/2 (x - c)^T A (x - c) with A symmetric positive semidefinite,
// stored row-major over the first c.size() coordinates.
struct QuadraticLoss {
  std::vector<double> A;
  std::vector<double> center;
};

using LossFunction = std::variant<LinearLoss, AbsoluteLoss, HingeLoss, LogisticLoss, QuadraticLoss>;

double loss_value(const LossFunction& f, std::span<const double> x);
double loss_value(const LossFunction& f, const SparseVector& x);

// A member of the subdifferential at x. Kinks resolve to the zero
// contribution (hinge at margin exactly 1, absolute at x == eps).
SparseVector subgradient(const LossFunction& f, std::span<const double> x);
SparseVector subgradient(const LossFunction& f, const SparseVector& x);

std::string loss_kind(const LossFunction& f);

// Overflow-safe log(1 + exp(z)).
double softplus(double z);
// Overflow-safe 1 / (1 + exp(-z)).
double sigmoid(double z);

}  // namespace oco
