#include "oco/audit.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "oco/bounds.hpp"
#include "oco/learners.hpp"

namespace oco {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string dump_stream(const LinearStream& s) {
  std::ostringstream os;
  os.precision(17);
  os << "box=" << s.box.describe() << " T=" << s.gradients.size() << " g=";
  for (const auto& g : s.gradients) {
    os << "{";
    for (const auto& [i, v] : g) os << " " << i << ":" << v;
    os << " }";
  }
  return os.str();
}

double linear_regret(Learner& learner, const LinearStream& s) {
  double total = 0.0;
  for (const auto& g : s.gradients) {
    total += dot(g, learner.dense());
    learner.update(g);
  }
  return total - static_optimum(s.losses, s.box, OptimumMode::kClosedForm).loss;
}

double squared_sum(const LinearStream& s) {
  double t = 0.0;
  for (const auto& g : s.gradients) t += g.squared_norm();
  return t;
}

void note_failure(PropertyResult& r, const std::string& what) {
  ++r.failures;
  r.passed = false;
  if (r.counterexample.empty()) r.counterexample = what;
}

}  // namespace

LinearStream random_linear_stream(Rng& rng, std::size_t max_dim, std::size_t max_rounds, double max_diameter) {
  const std::size_t n = 1 + rng.below(max_dim);
  const std::size_t rounds = 1 + rng.below(max_rounds);
  std::vector<double> lo(n), hi(n), magnitude(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = max_diameter * (1.0 - rng.uniform());  // (0, max]
    lo[i] = -d * rng.uniform();
    hi[i] = lo[i] + d;
    magnitude[i] = std::pow(10.0, rng.uniform(-2.0, 2.0));
  }
  // Some streams drift in a fixed direction per coordinate, others are pure noise.
  std::vector<double> drift(n);
  for (auto& v : drift) v = rng.uniform(-1.0, 1.0);
  const double density = rng.uniform(0.2, 1.0);

  LinearStream s{Box(lo, hi), {}, {}};
  for (std::size_t t = 0; t < rounds; ++t) {
    SparseVector g;
    for (std::size_t i = 0; i < n; ++i) {
      if (!rng.bernoulli(density)) continue;
      g.push_back(i, magnitude[i] * (drift[i] + rng.uniform(-1.0, 1.0)));
    }
    s.gradients.push_back(g);
  }
  if (squared_sum(s) == 0.0) {
    SparseVector g;
    g.push_back(0, magnitude[0]);
    s.gradients.back() = g;
  }
  for (const auto& g : s.gradients) s.losses.emplace_back(LinearLoss{g});
  return s;
}

double golden_section_min_bound(double diameter, double grad_sq_sum, double lo, double hi) {
  auto bound = [&](double log_eta) {
    const double eta = std::exp(log_eta);
    return diameter * diameter / (2.0 * eta) + 0.5 * grad_sq_sum * eta;
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lo), b = std::log(hi);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = bound(c), fd = bound(d);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = bound(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = bound(d);
    }
  }
  return bound(0.5 * (a + b));
}

PropertyResult audit_sqrt_sum(std::uint64_t seed, std::size_t sequences) {
  PropertyResult r;
  r.name = "sqrt_sum_inequality";
  Rng rng(seed);
  const auto start = Clock::now();
  double worst = 0.0;
  std::vector<double> x;
  for (std::size_t k = 0; k < sequences; ++k) {
    x.resize(1 + rng.below(100));
    for (auto& v : x) v = rng.bernoulli(0.05) ? 0.0 : std::pow(10.0, rng.uniform(-6.0, 6.0));
    const auto [lhs, rhs] = sqrt_sum_lhs_rhs(x);
    ++r.trials;
    worst = std::max(worst, rhs > 0.0 ? lhs / rhs : 0.0);
    if (lhs > rhs * (1.0 + 1e-9)) {
      std::ostringstream os;
      os.precision(17);
      os << "lhs=" << lhs << " rhs=" << rhs << " x=";
      for (double v : x) os << v << " ";
      note_failure(r, os.str());
    }
  }
  r.seconds = seconds_since(start);
  r.detail = "max lhs/rhs = " + std::to_string(worst);
  return r;
}

PropertyResult audit_global_rate(std::uint64_t seed, std::size_t streams) {
  PropertyResult r;
  r.name = "global_rate_regret_bound";
  Rng rng(seed);
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < streams; ++k) {
    const LinearStream s = random_linear_stream(rng);
    GlobalAdaptiveOgd learner(s.box, 1.0, GlobalAdaptiveOgd::DiameterMode::kTrue);
    const double regret = linear_regret(learner, s);
    const double bound = s.box.diameter() * std::sqrt(2.0 * squared_sum(s));
    ++r.trials;
    worst = std::max(worst, regret / bound);
    if (regret > bound + 1e-6) {
      note_failure(r, "regret=" + std::to_string(regret) + " bound=" + std::to_string(bound) + " " +
                          dump_stream(s));
    }
  }
  r.seconds = seconds_since(start);
  r.detail = "max regret/bound = " + std::to_string(worst);
  return r;
}

PropertyResult audit_constant_rate_optimum(std::uint64_t seed, std::size_t streams) {
  PropertyResult r;
  r.name = "constant_rate_bound_minimum";
  Rng rng(seed);
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < streams; ++k) {
    const LinearStream s = random_linear_stream(rng);
    const double sum = squared_sum(s);
    const double r_min = r_min_global(s.box.diameter(), std::vector<double>{sum}).r_min;
    const double searched = golden_section_min_bound(s.box.diameter(), sum);
    const double rel = std::abs(searched - r_min) / r_min;
    ++r.trials;
    worst = std::max(worst, rel);
    if (rel > 1e-6) {
      note_failure(r, "golden=" + std::to_string(searched) + " r_min=" + std::to_string(r_min));
    }
  }
  r.seconds = seconds_since(start);
  std::ostringstream os;
  os << "max relative gap = " << worst;
  r.detail = os.str();
  return r;
}

PropertyResult audit_per_coordinate(std::uint64_t seed, std::size_t streams) {
  PropertyResult r;
  r.name = "per_coordinate_regret_bound";
  Rng rng(seed);
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < streams; ++k) {
    const LinearStream s = random_linear_stream(rng);
    PerCoordinateOgd learner(s.box, 1.0);
    const double regret = linear_regret(learner, s);
    const double bound = bound_percoord(s.box, std::span<const SparseVector>(s.gradients)).total;
    ++r.trials;
    worst = std::max(worst, regret / bound);
    if (regret > bound + 1e-6) {
      note_failure(r, "regret=" + std::to_string(regret) + " bound=" + std::to_string(bound) + " " +
                          dump_stream(s));
    }
  }
  r.seconds = seconds_since(start);
  r.detail = "max regret/bound = " + std::to_string(worst);
  return r;
}

PropertyResult audit_dominance(std::uint64_t seed, std::size_t streams) {
  PropertyResult r;
  r.name = "per_coordinate_bound_dominates";
  Rng rng(seed);
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < streams; ++k) {
    const LinearStream s = random_linear_stream(rng);
    const Dominance d = check_dominance(s.box, s.gradients);
    ++r.trials;
    worst = std::max(worst, d.lhs / d.rhs);
    if (!d.holds) {
      note_failure(r, "lhs=" + std::to_string(d.lhs) + " rhs=" + std::to_string(d.rhs) + " " + dump_stream(s));
    }
  }
  r.seconds = seconds_since(start);
  r.detail = "max lhs/rhs = " + std::to_string(worst);
  return r;
}

PropertyResult audit_iterative_optimum(std::uint64_t seed, std::size_t problems) {
  PropertyResult r;
  r.name = "iterative_optimum_matches_grid";
  Rng rng(seed);
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < problems; ++k) {
    // Smooth 1-D problems: L2-regularized logistic losses on scalar features.
    const double radius = rng.uniform(0.5, 3.0);
    const Box box({-radius}, {radius});
    const double lambda = rng.uniform(0.05, 0.5);
    std::vector<LossFunction> losses;
    const std::size_t rounds = 5 + rng.below(46);
    for (std::size_t t = 0; t < rounds; ++t) {
      Example ex;
      ex.features.push_back(0, rng.uniform(-2.0, 2.0));
      ex.label = rng.bernoulli(0.5) ? 1.0 : -1.0;
      losses.emplace_back(LogisticLoss{ex, lambda});
    }
    const StaticOptimum it = static_optimum(losses, box, OptimumMode::kIterative);
    const StaticOptimum gr = static_optimum(losses, box, OptimumMode::kGrid);
    const double gap = std::abs(it.loss - gr.loss);
    ++r.trials;
    worst = std::max(worst, gap);
    if (!it.converged || gap > 1e-4) {
      note_failure(r, "iterative=" + std::to_string(it.loss) + " grid=" + std::to_string(gr.loss) +
                          " converged=" + (it.converged ? "yes" : "no"));
    }
  }
  r.seconds = seconds_since(start);
  std::ostringstream os;
  os << "max |iterative - grid| = " << worst;
  r.detail = os.str();
  return r;
}

std::vector<PropertyResult> run_bounds_audit(std::uint64_t seed) {
  return {
      audit_sqrt_sum(seed),
      audit_global_rate(seed + 1),
      audit_constant_rate_optimum(seed + 1),
      audit_per_coordinate(seed + 1),
      audit_dominance(seed + 1),
      audit_iterative_optimum(seed + 2),
  };
}

std::string format_result(const PropertyResult& r, bool with_timing) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ") << r.name << " trials=" << r.trials << " failures=" << r.failures;
  if (with_timing) os << " seconds=" << r.seconds;
  os << " " << r.detail;
  if (!r.passed) os << "\n  counterexample: " << r.counterexample;
  return os.str();
}

}  // namespace oco
