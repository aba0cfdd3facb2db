#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oco/core.hpp"
#include "oco/learners.hpp"
#include "oco/losses.hpp"

namespace oco {

// T copies of f(x) = G |x_coord - eps|.
std::vector<LossFunction> oscillation_stream(double G, double eps, std::size_t rounds, Index coord = 0);

// T copies of f(x) = -G x_coord.
std::vector<LossFunction> ramp_stream(double G, std::size_t rounds, Index coord = 0);

// One oscillation subproblem of T0 rounds on coordinate 0, followed by C
// ramp subproblems of T1 rounds each on coordinates 1..C. Box is [0,1]^(C+1).
struct BadFamilyInstance {
  std::size_t t0 = 0;
  std::size_t c = 0;
  std::size_t t1 = 0;
  double eps = 0.01;
  std::vector<LossFunction> losses;

  std::size_t rounds() const { return t0 + c * t1; }
  std::size_t dimension() const { return 1 + c; }
  Box box() const { return Box::uniform(0.0, 1.0, dimension()); }
  // 0-based coordinate targeted on 1-based round t.
  Index coordinate_at(std::size_t t) const;
  // min_x sum_t f_t(x): 0 on the oscillation coordinate, -T1 per ramp.
  double comparator_loss() const { return -static_cast<double>(c * t1); }
  std::string describe() const;
};

// Canonical construction with C = T1 = floor(T0^(1/3)); needs T0 >= 8.
BadFamilyInstance bad_family(std::size_t t0, double eps = 0.01);
// Explicit sizes; C = 0 leaves only the oscillation subproblem.
BadFamilyInstance bad_family(std::size_t t0, std::size_t c, std::size_t t1, double eps);

std::size_t integer_cube_root(std::size_t v);

// Plays the learner through the instance; returns total loss minus the exact comparator.
double play_regret(Learner& learner, const BadFamilyInstance& instance);

// Lower bound (T0/2) eta + (C/2) min(T1, 1/(2 eta)) on the regret of any
// fixed global rate eta.
double global_rate_lower_bound(const BadFamilyInstance& instance, double eta);

// Log-spaced grid of `count` points over [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct EtaSearchResult {
  double eta = 0.0;
  double regret = 0.0;
  std::vector<double> regrets;  // one per grid point
};

// Fixed-rate OGD at every grid rate; returns the minimizer of measured regret.
EtaSearchResult best_fixed_eta_regret(const BadFamilyInstance& instance, std::span<const double> etas);

}  // namespace oco
