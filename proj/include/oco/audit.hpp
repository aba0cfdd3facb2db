#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "oco/core.hpp"
#include "oco/losses.hpp"
#include "oco/random.hpp"

namespace oco {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double seconds = 0.0;
  std::string detail;
  std::string counterexample;  // first failing case, empty when passed
};

// Random linear-loss stream over a random box: n <= max_dim coordinates with
// diameters in (0, max_diameter], T <= max_rounds rounds, gradient scales
// varying by orders of magnitude across coordinates. At least one gradient
// entry is nonzero.
struct LinearStream {
  Box box;
  std::vector<LossFunction> losses;
  std::vector<SparseVector> gradients;
};

LinearStream random_linear_stream(Rng& rng, std::size_t max_dim = 8, std::size_t max_rounds = 200,
                                  double max_diameter = 10.0);

// min over constant eta in [lo, hi] of B(eta) = D^2 / (2 eta) + eta S / 2,
// found by golden-section search in log(eta). S is sum_t |g_t|^2.
double golden_section_min_bound(double diameter, double grad_sq_sum, double lo = 1e-12, double hi = 1e12);

PropertyResult audit_sqrt_sum(std::uint64_t seed, std::size_t sequences = 10000);
PropertyResult audit_global_rate(std::uint64_t seed, std::size_t streams = 500);
PropertyResult audit_constant_rate_optimum(std::uint64_t seed, std::size_t streams = 500);
PropertyResult audit_per_coordinate(std::uint64_t seed, std::size_t streams = 500);
PropertyResult audit_dominance(std::uint64_t seed, std::size_t streams = 500);
PropertyResult audit_iterative_optimum(std::uint64_t seed, std::size_t problems = 20);

std::vector<PropertyResult> run_bounds_audit(std::uint64_t seed);

// Wall time is left out unless asked for, so the text is reproducible.
std::string format_result(const PropertyResult& r, bool with_timing = false);

}  // namespace oco
