#include "oco/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <limits>
#include <cmath>
#include <memory>
#include <sstream>

#include "oco/adversarial.hpp"
#include "oco/errors.hpp"
#include "oco/learners.hpp"
#include "oco/losses.hpp"

namespace oco {
namespace {

using Clock = std::chrono::steady_clock;

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::unique_ptr<Learner> make_learner(const std::string& name, const Box& box, double scale_percoord,
                                      double scale_global) {
  if (name == "per-coord") return std::make_unique<PerCoordinateOgd>(box, scale_percoord);
  if (name == "global") {
    return std::make_unique<GlobalAdaptiveOgd>(box, scale_global, GlobalAdaptiveOgd::DiameterMode::kOnline);
  }
  if (name == "pa") return std::make_unique<PassiveAggressive>(box.dimension());
  throw UsageError("unknown algorithm '" + name + "'");
}

void check_algorithms(const RunConfig& c, const std::vector<std::string>& allowed) {
  if (c.algorithms.empty()) throw UsageError("empty algorithm list");
  for (const auto& a : c.algorithms) {
    if (std::find(allowed.begin(), allowed.end(), a) == allowed.end()) {
      throw UsageError("unknown algorithm '" + a + "' for " + to_string(c.experiment));
    }
  }
}

double scale_for(const std::string& algorithm, const RunConfig& c) {
  if (algorithm == "per-coord") return *c.scale_percoord;
  if (algorithm == "global") return *c.scale_global;
  return 1.0;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::kClassify: return "classify";
    case Experiment::kLogreg: return "logreg";
    case Experiment::kSeparation: return "separation";
    case Experiment::kBoundsAudit: return "bounds-audit";
  }
  return "unknown";
}

RunConfig RunConfig::resolved() const {
  RunConfig c = *this;
  switch (c.experiment) {
    case Experiment::kClassify:
      if (!c.radius) c.radius = 100.0;
      if (!c.scale_percoord) c.scale_percoord = 0.6 / *c.radius;
      if (!c.scale_global) c.scale_global = 0.2 / *c.radius;
      if (c.dataset.empty()) c.dataset = "synthetic:sentiment";
      if (c.algorithms.empty()) c.algorithms = {"global", "per-coord", "pa"};
      break;
    case Experiment::kLogreg:
      if (!c.radius) c.radius = 1.0;
      if (!c.scale_percoord) c.scale_percoord = 0.1;
      if (!c.scale_global) c.scale_global = 0.1;
      if (c.dataset.empty()) c.dataset = "synthetic:ctr";
      if (c.algorithms.empty()) c.algorithms = {"global", "per-coord"};
      break;
    case Experiment::kSeparation:
      if (!c.radius) c.radius = 1.0;
      if (!c.scale_percoord) c.scale_percoord = 1.0;
      if (c.algorithms.empty()) c.algorithms = {"global", "per-coord"};
      break;
    case Experiment::kBoundsAudit:
      break;
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  std::string t0s;
  for (std::size_t i = 0; i < t0.size(); ++i) t0s += (i ? "," : "") + std::to_string(t0[i]);
  return {
      {"experiment", to_string(experiment)},
      {"dataset", dataset},
      {"algorithms", join(algorithms)},
      {"R", opt(radius)},
      {"scale-percoord", opt(scale_percoord)},
      {"scale-global", opt(scale_global)},
      {"lambda", num(lambda)},
      {"seed", std::to_string(seed)},
      {"synthetic-examples", std::to_string(synthetic_examples)},
      {"t0", t0s},
      {"eta-min", num(eta_min)},
      {"eta-max", num(eta_max)},
      {"eta-count", std::to_string(eta_count)},
      {"eps", num(eps)},
      {"comparator-scale", num(comparator_scale)},
      {"comparator-max-passes", std::to_string(comparator_max_passes)},
      {"comparator-tol", num(comparator_tol)},
      {"timing", timing ? "true" : "false"},
      {"out", out},
  };
}

Dataset load_dataset(const std::string& spec, std::uint64_t seed, std::size_t synthetic_examples) {
  if (spec == "synthetic:sentiment") return make_sentiment_sample(SentimentOptions{});
  if (spec == "synthetic:ctr") {
    CtrOptions o;
    o.examples = synthetic_examples;
    o.seed = seed;
    if (o.examples == 0) throw UsageError("synthetic stream with zero examples");
    return make_ctr_stream(o);
  }
  return load_libsvm(spec);
}

PassStats progressive_pass(const std::vector<Example>& examples, Learner& learner,
                           const std::function<LossFunction(const Example&)>& loss_for, RegretLedger& ledger) {
  PassStats stats;
  for (const auto& ex : examples) {
    // Score first; the learner only sees the example afterwards.
    const double margin = ex.label * learner.predict(ex.features);
    if (margin <= 0.0) ++stats.mistakes;
    const LossFunction f = loss_for(ex);
    ledger.record(loss_value(f, learner.dense()), subgradient(f, learner.dense()));
    learner.observe(f);
  }
  return stats;
}

RunResult run_classify(const RunConfig& raw) {
  const RunConfig c = raw.resolved();
  check_algorithms(c, {"global", "per-coord", "pa"});
  Dataset data = shuffle(unit_scale(load_dataset(c.dataset, c.seed, c.synthetic_examples)), c.seed);
  const Box box = Box::uniform(-*c.radius, *c.radius, data.dimension);

  RunResult result;
  std::vector<RegretLedger> ledgers(c.algorithms.size(), RegretLedger(false));
  std::vector<ResultRow> rows;
  for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
    const std::string& name = c.algorithms[a];
    const auto start = Clock::now();
    auto learner = make_learner(name, box, *c.scale_percoord, *c.scale_global);
    const PassStats stats =
        progressive_pass(data.examples, *learner, [](const Example& ex) -> LossFunction { return HingeLoss{ex}; },
                         ledgers[a]);
    ledgers[a].mark_not_applicable();

    const double n = static_cast<double>(data.size());
    AlgorithmSummary s;
    s.algorithm = name;
    s.scale = scale_for(name, c);
    s.cumulative_loss = ledgers[a].cumulative_loss();
    s.avg_hinge_loss = s.cumulative_loss / n;
    s.mistake_fraction = static_cast<double>(stats.mistakes) / n;
    result.algorithms.push_back(s);

    ResultRow row;
    row.dataset = data.meta.name;
    row.algorithm = name;
    row.scale_factor = s.scale;
    row.radius = name == "pa" ? std::numeric_limits<double>::infinity() : *c.radius;
    row.seed = c.seed;
    row.ledger = &ledgers[a];
    row.avg_hinge_loss = s.avg_hinge_loss;
    row.mistake_fraction = s.mistake_fraction;
    if (c.timing) row.wall_ms = elapsed_ms(start);
    rows.push_back(row);
  }
  auto header = c.echo();
  header.emplace_back("pa-variant", "PA (no slack), unconstrained, untuned");
  header.emplace_back("preprocessing", "unit-length feature vectors, shuffled with mt19937_64");
  result.output = write_results_csv(rows, header);
  return result;
}

RunResult run_logreg(const RunConfig& raw) {
  const RunConfig c = raw.resolved();
  check_algorithms(c, {"global", "per-coord"});
  if (c.lambda < 0.0) throw UsageError("lambda must be non-negative");
  const Dataset data = load_dataset(c.dataset, c.seed, c.synthetic_examples);
  if (data.size() == 0) throw UsageError("dataset has no examples");
  const Box box = Box::uniform(-*c.radius, *c.radius, data.dimension);

  std::vector<LossFunction> losses;
  losses.reserve(data.size());
  for (const auto& ex : data.examples) losses.emplace_back(LogisticLoss{ex, c.lambda});

  IterativeOptions opt;
  opt.scale = c.comparator_scale;
  opt.max_passes = c.comparator_max_passes;
  opt.tol_rel = c.comparator_tol;
  const StaticOptimum comparator = static_optimum(losses, box, OptimumMode::kIterative, opt);

  RunResult result;
  std::vector<RegretLedger> ledgers(c.algorithms.size(), RegretLedger(false));
  std::vector<ResultRow> rows;
  for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
    const std::string& name = c.algorithms[a];
    const auto start = Clock::now();
    auto learner = make_learner(name, box, *c.scale_percoord, *c.scale_global);
    progressive_pass(data.examples, *learner,
                     [&](const Example& ex) -> LossFunction { return LogisticLoss{ex, c.lambda}; }, ledgers[a]);
    ledgers[a].resolve(comparator.loss, comparator.converged);

    AlgorithmSummary s;
    s.algorithm = name;
    s.scale = scale_for(name, c);
    s.cumulative_loss = ledgers[a].cumulative_loss();
    s.comparator_loss = comparator.loss;
    s.comparator_converged = comparator.converged;
    s.comparator_passes = comparator.passes;
    s.regret = ledgers[a].regret();
    s.regret_per_round = ledgers[a].regret_per_round();
    result.algorithms.push_back(s);

    ResultRow row;
    row.dataset = data.meta.name;
    row.algorithm = name;
    row.scale_factor = s.scale;
    row.radius = *c.radius;
    row.lambda = c.lambda;
    row.seed = c.seed;
    row.ledger = &ledgers[a];
    if (c.timing) row.wall_ms = elapsed_ms(start);
    rows.push_back(row);
  }
  auto header = c.echo();
  header.emplace_back("comparator", "per-coordinate OGD passes until relative change < comparator-tol");
  header.emplace_back("comparator-passes", std::to_string(comparator.passes));
  header.emplace_back("regret-per-round", "regret / T");
  result.output = write_results_csv(rows, header);
  result.exit_code = comparator.converged ? 0 : 1;
  return result;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

RunResult run_separation(const RunConfig& raw) {
  const RunConfig c = raw.resolved();
  check_algorithms(c, {"global", "per-coord"});
  if (c.t0.empty()) throw UsageError("separation needs at least one T0");
  for (auto t0 : c.t0) {
    if (t0 < 8) throw UsageError("T0 must be at least 8");
  }
  const auto grid = log_grid(c.eta_min, c.eta_max, c.eta_count);
  const bool want_global = std::find(c.algorithms.begin(), c.algorithms.end(), "global") != c.algorithms.end();
  const bool want_percoord =
      std::find(c.algorithms.begin(), c.algorithms.end(), "per-coord") != c.algorithms.end();

  RunResult result;
  for (auto t0 : c.t0) {
    const BadFamilyInstance inst = bad_family(t0, c.eps);
    SeparationPoint p;
    p.t0 = t0;
    p.rounds = inst.rounds();
    if (want_global) {
      const EtaSearchResult best = best_fixed_eta_regret(inst, grid);
      p.global_eta = best.eta;
      p.global_regret = best.regret;
      p.global_lower_bound = global_rate_lower_bound(inst, best.eta);
    }
    if (want_percoord) {
      PerCoordinateOgd learner(inst.box(), *c.scale_percoord);
      RegretLedger ledger(false);
      for (const auto& f : inst.losses) {
        const SparseVector g = subgradient(f, learner.dense());
        ledger.record(loss_value(f, learner.dense()), g);
        learner.update(g);
      }
      ledger.resolve(inst.comparator_loss(), true);
      p.percoord_regret = *ledger.regret();
      p.percoord_bound = ledger.bounds(inst.box()).b_percoord;
      if (p.percoord_regret > p.percoord_bound + 1e-6) result.exit_code = 1;
    }
    result.separation.push_back(p);
  }

  std::vector<double> ts, gr, pr;
  for (const auto& p : result.separation) {
    ts.push_back(static_cast<double>(p.rounds));
    gr.push_back(p.global_regret);
    pr.push_back(p.percoord_regret);
  }
  if (want_global) result.global_slope = loglog_slope(ts, gr);
  if (want_percoord) result.percoord_slope = loglog_slope(ts, pr);

  std::ostringstream os;
  for (const auto& [k, v] : c.echo()) os << "# " << k << " = " << v << "\n";
  os << "# comparator = exact (x = eps on the oscillation coordinate, x = 1 on ramps)\n";
  os << "T0,T,C,T1,algorithm,eta,regret,lower_bound,upper_bound,slope\n";
  auto slope = [](const std::optional<double>& s) { return s ? format_float(*s) : std::string(); };
  for (const auto& p : result.separation) {
    const std::size_t cube = integer_cube_root(p.t0);
    const std::string prefix = std::to_string(p.t0) + "," + std::to_string(p.rounds) + "," +
                               std::to_string(cube) + "," + std::to_string(cube) + ",";
    if (want_global) {
      os << prefix << "global," << format_float(p.global_eta) << "," << format_float(p.global_regret) << ","
         << format_float(p.global_lower_bound) << ",," << slope(result.global_slope) << "\n";
    }
    if (want_percoord) {
      os << prefix << "per-coord,," << format_float(p.percoord_regret) << ",,"
         << format_float(p.percoord_bound) << "," << slope(result.percoord_slope) << "\n";
    }
  }
  result.output = os.str();
  return result;
}

RunResult run_bounds_audit(const RunConfig& raw) {
  RunResult result;
  result.audit = oco::run_bounds_audit(raw.seed);
  std::ostringstream os;
  os << "# bounds-audit seed = " << raw.seed << "\n";
  for (const auto& r : result.audit) {
    os << format_result(r, raw.timing) << "\n";
    if (!r.passed) result.exit_code = 1;
  }
  result.output = os.str();
  return result;
}

RunResult run_experiment(const RunConfig& config) {
  switch (config.experiment) {
    case Experiment::kClassify: return run_classify(config);
    case Experiment::kLogreg: return run_logreg(config);
    case Experiment::kSeparation: return run_separation(config);
    case Experiment::kBoundsAudit: return run_bounds_audit(config);
  }
  throw UsageError("unknown experiment");
}

}  // namespace oco
