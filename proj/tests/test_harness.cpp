#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oco/harness.hpp"

using namespace oco;

namespace {

// Logs every call the harness makes, tagged with the example it concerns.
class RecordingLearner final : public Learner {
 public:
  explicit RecordingLearner(std::size_t n) : Learner(Box::uniform(-1.0, 1.0, n)) {}

  double predict(const SparseVector& theta) const override {
    events.push_back("predict " + tag(theta));
    return Learner::predict(theta);
  }
  void observe(const LossFunction& f) override {
    events.push_back("observe " + tag(std::get<HingeLoss>(f).example.features));
    Learner::observe(f);
  }
  LearnerConfig config() const override { return {}; }

  mutable std::vector<std::string> events;

 private:
  static std::string tag(const SparseVector& theta) { return std::to_string(theta.begin()->first); }
  void apply(const SparseVector& g) override {
    for (const auto& [i, gi] : g) {
      ensure(i);
      x_[i] = box_.clamp(i, x_[i] - 0.1 * gi);
    }
  }
};

RunConfig small(Experiment e) {
  RunConfig c;
  c.experiment = e;
  c.synthetic_examples = 3000;
  return c;
}

}  // namespace

TEST_CASE("progressive validation scores each example before training on it") {
  std::vector<Example> examples;
  for (std::size_t i = 0; i < 4; ++i) examples.push_back(Example{SparseVector{{i, 1.0}}, 1.0});
  RecordingLearner learner(4);
  RegretLedger ledger(false);
  const PassStats stats = progressive_pass(
      examples, learner, [](const Example& ex) -> LossFunction { return HingeLoss{ex}; }, ledger);
  const std::vector<std::string> expected{"predict 0", "observe 0", "predict 1", "observe 1",
                                          "predict 2", "observe 2", "predict 3", "observe 3"};
  CHECK(learner.events == expected);
  // Zero predictions count as mistakes.
  CHECK(stats.mistakes == 4);
  CHECK(ledger.rounds() == 4);
  CHECK(ledger.cumulative_loss() == 4.0);
}

TEST_CASE("progressive losses come from the pre-update point") {
  const std::vector<Example> same(3, Example{SparseVector{{0, 1.0}}, 1.0});
  PerCoordinateOgd learner(Box::uniform(-1.0, 1.0, 1), 1.0);
  RegretLedger ledger(false);
  progressive_pass(same, learner, [](const Example& ex) -> LossFunction { return HingeLoss{ex}; }, ledger);
  // x goes 0 -> 1 after the first example, where the margin is met.
  CHECK(ledger.losses()[0] == 1.0);
  CHECK(ledger.losses()[1] == 0.0);
  CHECK(ledger.losses()[2] == 0.0);
}

TEST_CASE("experiment defaults") {
  const RunConfig classify = small(Experiment::kClassify).resolved();
  CHECK(*classify.radius == 100.0);
  CHECK(*classify.scale_percoord == doctest::Approx(0.006));
  CHECK(*classify.scale_global == doctest::Approx(0.002));
  CHECK(classify.algorithms == std::vector<std::string>{"global", "per-coord", "pa"});
  CHECK(classify.dataset == "synthetic:sentiment");

  const RunConfig logreg = small(Experiment::kLogreg).resolved();
  CHECK(*logreg.radius == 1.0);
  CHECK(*logreg.scale_percoord == 0.1);
  CHECK(*logreg.scale_global == 0.1);
  CHECK(logreg.dataset == "synthetic:ctr");
  CHECK(logreg.lambda == 0.0);

  const RunConfig sep = small(Experiment::kSeparation).resolved();
  CHECK(sep.t0 == std::vector<std::size_t>{1000, 10000, 100000});
  CHECK(sep.eta_count == 50);
  CHECK(sep.eps == 0.01);
}

TEST_CASE("config echo covers every field") {
  const auto echo = small(Experiment::kLogreg).resolved().echo();
  std::vector<std::string> keys;
  for (const auto& [k, v] : echo) keys.push_back(k);
  for (const char* k : {"experiment", "dataset", "algorithms", "R", "scale-percoord", "scale-global", "lambda",
                        "seed", "synthetic-examples", "t0", "eta-min", "eta-max", "eta-count", "eps",
                        "comparator-scale", "comparator-max-passes", "comparator-tol", "timing", "out"}) {
    CHECK_MESSAGE(std::find(keys.begin(), keys.end(), k) != keys.end(), k);
  }
}

TEST_CASE("usage errors") {
  RunConfig none = small(Experiment::kClassify);
  none.algorithms = {""};
  CHECK_THROWS_AS(run_classify(none), UsageError);

  RunConfig unknown = small(Experiment::kClassify);
  unknown.algorithms = {"per-coord", "cw"};
  CHECK_THROWS_AS(run_classify(unknown), UsageError);

  RunConfig pa_logreg = small(Experiment::kLogreg);
  pa_logreg.algorithms = {"pa"};
  CHECK_THROWS_AS(run_logreg(pa_logreg), UsageError);

  RunConfig empty = small(Experiment::kLogreg);
  empty.synthetic_examples = 0;
  CHECK_THROWS_AS(run_logreg(empty), UsageError);

  RunConfig negative = small(Experiment::kLogreg);
  negative.lambda = -1.0;
  CHECK_THROWS_AS(run_logreg(negative), UsageError);

  RunConfig tiny = small(Experiment::kSeparation);
  tiny.t0 = {27, 7};
  CHECK_THROWS_AS(run_separation(tiny), UsageError);
}

TEST_CASE("classification run") {
  const RunResult r = run_classify(small(Experiment::kClassify));
  CHECK(r.exit_code == 0);
  REQUIRE(r.algorithms.size() == 3);
  for (const auto& a : r.algorithms) {
    CHECK(*a.mistake_fraction >= 0.0);
    CHECK(*a.mistake_fraction <= 1.0);
    CHECK_FALSE(a.regret.has_value());
  }
  CHECK(*r.algorithms[1].avg_hinge_loss < *r.algorithms[0].avg_hinge_loss);
  CHECK(r.output.find("# pa-variant = PA (no slack), unconstrained, untuned") != std::string::npos);
  CHECK(r.output == run_classify(small(Experiment::kClassify)).output);
}

TEST_CASE("logistic regression run") {
  RunConfig c = small(Experiment::kLogreg);
  const RunResult r = run_logreg(c);
  CHECK(r.exit_code == 0);
  REQUIRE(r.algorithms.size() == 2);
  for (const auto& a : r.algorithms) {
    CHECK(a.comparator_converged);
    CHECK(*a.regret_per_round == doctest::Approx(*a.regret / 3000.0));
  }
  CHECK(r.output == run_logreg(c).output);

  c.lambda = 1e-3;
  const RunResult reg = run_logreg(c);
  CHECK(reg.output.find("# lambda = 0.001") != std::string::npos);
  CHECK(reg.algorithms[0].cumulative_loss != r.algorithms[0].cumulative_loss);
}

TEST_CASE("unconverged comparator is surfaced") {
  RunConfig c = small(Experiment::kLogreg);
  c.comparator_max_passes = 1;
  c.comparator_tol = 1e-15;
  const RunResult r = run_logreg(c);
  CHECK(r.exit_code == 1);
  CHECK_FALSE(r.algorithms[0].comparator_converged);
  CHECK(r.output.find(",false,") != std::string::npos);
}

TEST_CASE("separation run on small instances") {
  RunConfig c = small(Experiment::kSeparation);
  c.t0 = {27, 216, 1000};
  c.eta_count = 20;
  const RunResult r = run_separation(c);
  CHECK(r.exit_code == 0);
  REQUIRE(r.separation.size() == 3);
  for (const auto& p : r.separation) {
    CHECK(p.percoord_regret <= p.percoord_bound);
    CHECK(p.global_regret >= p.global_lower_bound * 0.9);
  }
  CHECK(r.global_slope.has_value());
  CHECK(r.percoord_slope.has_value());
  CHECK(r.output == run_separation(c).output);

  c.t0 = {27};
  const RunResult single = run_separation(c);
  CHECK_FALSE(single.global_slope.has_value());
  CHECK(single.output.find("T0,T,C,T1,algorithm,eta,regret,lower_bound,upper_bound,slope") != std::string::npos);
  CHECK(single.output.back() == '\n');
  CHECK(single.output.find(",\n") != std::string::npos);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{10.0, 100.0, 1000.0, 10000.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.5));
  CHECK(*loglog_slope(x, y) == doctest::Approx(0.5));
  CHECK_FALSE(loglog_slope({1.0, 2.0}, {1.0, 2.0}).has_value());
  CHECK_FALSE(loglog_slope({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}).has_value());
}

TEST_CASE("dataset specs") {
  CHECK(load_dataset("synthetic:ctr", 7, 100).size() == 100);
  CHECK(load_dataset("synthetic:sentiment", 7, 100).size() == 2000);
  CHECK_THROWS(load_dataset("/nonexistent/file.libsvm", 7, 100));
}
