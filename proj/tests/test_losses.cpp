#include <cmath>
#include <vector>

#include "doctest.h"
#include "oco/losses.hpp"
#include "oco/random.hpp"

using namespace oco;

namespace {

Example make_example(double label, SparseVector features) { return Example{std::move(features), label}; }

std::vector<double> random_point(Rng& rng, std::size_t n, double radius) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-radius, radius);
  return x;
}

SparseVector random_features(Rng& rng, std::size_t n) {
  SparseVector v;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(0.6)) v.push_back(i, rng.uniform(-2.0, 2.0));
  }
  if (v.empty()) v.set(0, 1.0);
  return v;
}

// Random loss of each kind over n coordinates.
std::vector<LossFunction> random_losses(Rng& rng, std::size_t n) {
  const double y = rng.bernoulli(0.5) ? 1.0 : -1.0;
  std::vector<double> a(n * n, 0.0);
  // A = M^T M is positive semidefinite.
  std::vector<double> m(n * n);
  for (auto& v : m) v = rng.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) a[i * n + j] += m[k * n + i] * m[k * n + j];
  return {
      LinearLoss{random_features(rng, n)},
      AbsoluteLoss{rng.uniform(0.1, 3.0), rng.uniform(-1.0, 1.0), rng.below(n)},
      HingeLoss{make_example(y, random_features(rng, n))},
      LogisticLoss{make_example(y, random_features(rng, n)), rng.uniform(0.0, 0.5)},
      QuadraticLoss{a, random_point(rng, n, 1.0)},
  };
}

}  // namespace

TEST_CASE("loss value examples") {
  const Example pos = make_example(1.0, SparseVector{{0, 1.0}});
  CHECK(loss_value(HingeLoss{pos}, std::vector<double>{0.5}) == doctest::Approx(0.5));
  CHECK(loss_value(LogisticLoss{pos, 0.0}, std::vector<double>{0.0}) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(loss_value(AbsoluteLoss{1.0, 0.1, 0}, std::vector<double>{0.5}) == doctest::Approx(0.4));
  CHECK(loss_value(LinearLoss{SparseVector{{0, 2.0}, {1, -1.0}}}, std::vector<double>{1.0, 3.0}) == -1.0);
}

TEST_CASE("sparse and dense evaluation agree") {
  const LossFunction f = LogisticLoss{make_example(-1.0, SparseVector{{0, 1.0}, {2, -0.5}}), 0.1};
  const std::vector<double> dense{0.3, 0.0, 0.4};
  const SparseVector sparse{{0, 0.3}, {2, 0.4}};
  CHECK(loss_value(f, dense) == doctest::Approx(loss_value(f, sparse)).epsilon(1e-15));
  CHECK(subgradient(f, dense) == subgradient(f, sparse));
}

TEST_CASE("subgradient examples") {
  CHECK(subgradient(AbsoluteLoss{1.0, 0.1, 0}, std::vector<double>{0.0}) == SparseVector{{0, -1.0}});
  CHECK(subgradient(AbsoluteLoss{1.0, 0.1, 0}, std::vector<double>{0.5}) == SparseVector{{0, 1.0}});

  const Example pos = make_example(1.0, SparseVector{{0, 1.0}});
  CHECK(subgradient(HingeLoss{pos}, std::vector<double>{2.0}).empty());
  CHECK(subgradient(HingeLoss{pos}, std::vector<double>{0.0}) == SparseVector{{0, -1.0}});
  CHECK(subgradient(LogisticLoss{pos, 0.0}, std::vector<double>{0.0}) == SparseVector{{0, -0.5}});
}

TEST_CASE("kinks resolve to zero") {
  CHECK(subgradient(AbsoluteLoss{2.0, 0.25, 0}, std::vector<double>{0.25}).empty());
  const Example pos = make_example(1.0, SparseVector{{0, 2.0}});
  CHECK(subgradient(HingeLoss{pos}, std::vector<double>{0.5}).empty());
}

TEST_CASE("absolute loss touches only its coordinate") {
  const LossFunction f = AbsoluteLoss{3.0, 0.0, 2};
  CHECK(loss_value(f, std::vector<double>{9.0, 9.0, -1.0}) == 3.0);
  CHECK(subgradient(f, std::vector<double>{9.0, 9.0, -1.0}) == SparseVector{{2, -3.0}});
}

TEST_CASE("subgradient inequality holds for every loss kind") {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    for (const auto& f : random_losses(rng, n)) {
      const auto x = random_point(rng, n, 3.0);
      const auto y = random_point(rng, n, 3.0);
      const SparseVector g = subgradient(f, x);
      double linear = 0.0;
      for (const auto& [i, gi] : g) linear += gi * (y[i] - x[i]);
      const double lhs = loss_value(f, y);
      const double rhs = loss_value(f, x) + linear;
      CHECK_MESSAGE(lhs >= rhs - 1e-9 * (1.0 + std::abs(rhs)), loss_kind(f));
    }
  }
}

TEST_CASE("loss values are midpoint convex") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    for (const auto& f : random_losses(rng, n)) {
      const auto x = random_point(rng, n, 3.0);
      const auto y = random_point(rng, n, 3.0);
      std::vector<double> mid(n);
      for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (x[i] + y[i]);
      CHECK(loss_value(f, mid) <= 0.5 * (loss_value(f, x) + loss_value(f, y)) + 1e-12);
    }
  }
}

TEST_CASE("logistic subgradient matches central differences") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const double y = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const LossFunction f = LogisticLoss{make_example(y, random_features(rng, n)), rng.uniform(0.0, 0.1)};
    auto x = random_point(rng, n, 2.0);
    const SparseVector g = subgradient(f, x);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = 1e-6;
      const double saved = x[i];
      x[i] = saved + h;
      const double up = loss_value(f, x);
      x[i] = saved - h;
      const double down = loss_value(f, x);
      x[i] = saved;
      const double fd = (up - down) / (2.0 * h);
      CHECK(std::abs(fd - g[i]) <= 1e-5 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST_CASE("logistic loss stays finite and monotone at extreme margins") {
  const Example pos = make_example(1.0, SparseVector{{0, 1.0}});
  double previous = std::numeric_limits<double>::infinity();
  for (double m = -1e4; m <= 1e4; m += 250.0) {
    const double v = loss_value(LogisticLoss{pos, 0.0}, std::vector<double>{m});
    CHECK(std::isfinite(v));
    CHECK(v <= previous);
    previous = v;
    const SparseVector g = subgradient(LogisticLoss{pos, 0.0}, std::vector<double>{m});
    CHECK(g.all_finite());
  }
  CHECK(loss_value(LogisticLoss{pos, 0.0}, std::vector<double>{-1e4}) == doctest::Approx(1e4));
  CHECK(loss_value(LogisticLoss{pos, 0.0}, std::vector<double>{1e4}) >= 0.0);
}

TEST_CASE("softplus and sigmoid helpers") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(800.0) == doctest::Approx(800.0));
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) == 1.0);
}

TEST_CASE("quadratic loss") {
  // 1/2 (x - c)^T A (x - c) with A = diag(2, 4), c = (1, -1).
  const LossFunction f = QuadraticLoss{{2.0, 0.0, 0.0, 4.0}, {1.0, -1.0}};
  CHECK(loss_value(f, std::vector<double>{1.0, -1.0}) == 0.0);
  CHECK(loss_value(f, std::vector<double>{2.0, 0.0}) == doctest::Approx(3.0));
  CHECK(subgradient(f, std::vector<double>{2.0, 0.0}) == SparseVector{{0, 2.0}, {1, 4.0}});
}

TEST_CASE("loss kinds have names") {
  CHECK(loss_kind(LinearLoss{}) == "linear");
  CHECK(loss_kind(AbsoluteLoss{}) == "absolute");
  CHECK(loss_kind(HingeLoss{}) == "hinge");
  CHECK(loss_kind(LogisticLoss{}) == "logistic");
  CHECK(loss_kind(QuadraticLoss{}) == "quadratic");
}
