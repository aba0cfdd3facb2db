#include "oco/losses.hpp"

#include <algorithm>
#include <cmath>

namespace oco {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Uniform read access to a point stored either densely or sparsely.
struct DensePoint {
  std::span<const double> x;

  double at(Index i) const { return i < x.size() ? x[i] : 0.0; }
  double dot(const SparseVector& v) const { return oco::dot(v, x); }
  double squared_norm() const {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }
  SparseVector sparse() const { return SparseVector::from_dense(x); }
};

struct SparsePoint {
  const SparseVector& x;

  double at(Index i) const { return x[i]; }
  double dot(const SparseVector& v) const { return oco::dot(v, x); }
  double squared_norm() const { return x.squared_norm(); }
  SparseVector sparse() const { return x; }
};

template <class Point>
double value_impl(const LossFunction& f, const Point& p) {
  return std::visit(
      Overloaded{
          [&](const LinearLoss& l) { return p.dot(l.g); },
          [&](const AbsoluteLoss& l) { return l.G * std::abs(p.at(l.coord) - l.eps); },
          [&](const HingeLoss& l) {
            return std::max(0.0, 1.0 - l.example.label * p.dot(l.example.features));
          },
          [&](const LogisticLoss& l) {
            const double z = -l.example.label * p.dot(l.example.features);
            return softplus(z) + 0.5 * l.lambda * p.squared_norm();
          },
          [&](const QuadraticLoss& l) {
            const std::size_t n = l.center.size();
            std::vector<double> d(n);
            for (Index i = 0; i < n; ++i) d[i] = p.at(i) - l.center[i];
            double s = 0.0;
            for (Index i = 0; i < n; ++i) {
              for (Index j = 0; j < n; ++j) s += d[i] * l.A[i * n + j] * d[j];
            }
            return 0.5 * s;
          },
      },
      f);
}

template <class Point>
SparseVector subgradient_impl(const LossFunction& f, const Point& p) {
  return std::visit(
      Overloaded{
          [&](const LinearLoss& l) { return l.g; },
          [&](const AbsoluteLoss& l) {
            const double xi = p.at(l.coord);
            SparseVector g;
            if (xi < l.eps) g.push_back(l.coord, -l.G);
            if (xi > l.eps) g.push_back(l.coord, l.G);
            return g;
          },
          [&](const HingeLoss& l) {
            const double y = l.example.label;
            if (y * p.dot(l.example.features) < 1.0) return scaled(l.example.features, -y);
            return SparseVector{};
          },
          [&](const LogisticLoss& l) {
            const double y = l.example.label;
            const double z = -y * p.dot(l.example.features);
            SparseVector g = scaled(l.example.features, -y * sigmoid(z));
            if (l.lambda != 0.0) g = axpy(l.lambda, p.sparse(), g);
            return g;
          },
          [&](const QuadraticLoss& l) {
            const std::size_t n = l.center.size();
            std::vector<double> d(n), g(n, 0.0);
            for (Index i = 0; i < n; ++i) d[i] = p.at(i) - l.center[i];
            for (Index i = 0; i < n; ++i) {
              for (Index j = 0; j < n; ++j) g[i] += l.A[i * n + j] * d[j];
            }
            return SparseVector::from_dense(g);
          },
      },
      f);
}

}  // namespace

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double loss_value(const LossFunction& f, std::span<const double> x) {
  return value_impl(f, DensePoint{x});
}

double loss_value(const LossFunction& f, const SparseVector& x) {
  return value_impl(f, SparsePoint{x});
}

SparseVector subgradient(const LossFunction& f, std::span<const double> x) {
  return subgradient_impl(f, DensePoint{x});
}

SparseVector subgradient(const LossFunction& f, const SparseVector& x) {
  return subgradient_impl(f, SparsePoint{x});
}

std::string loss_kind(const LossFunction& f) {
  return std::visit(Overloaded{
                        [](const LinearLoss&) { return std::string("linear"); },
                        [](const AbsoluteLoss&) { return std::string("absolute"); },
                        [](const HingeLoss&) { return std::string("hinge"); },
                        [](const LogisticLoss&) { return std::string("logistic"); },
                        [](const QuadraticLoss&) { return std::string("quadratic"); },
                    },
                    f);
}

}  // namespace oco
