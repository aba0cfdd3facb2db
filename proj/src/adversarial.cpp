#include "oco/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oco/errors.hpp"

namespace oco {

std::vector<LossFunction> oscillation_stream(double G, double eps, std::size_t rounds, Index coord) {
  if (!(G > 0.0) || !(eps > 0.0) || rounds == 0) {
    throw InvalidInput("oscillation stream needs G > 0, eps > 0, T >= 1");
  }
  return std::vector<LossFunction>(rounds, AbsoluteLoss{G, eps, coord});
}

std::vector<LossFunction> ramp_stream(double G, std::size_t rounds, Index coord) {
  if (!(G > 0.0) || rounds == 0) throw InvalidInput("ramp stream needs G > 0, T >= 1");
  SparseVector g;
  g.push_back(coord, -G);
  return std::vector<LossFunction>(rounds, LinearLoss{g});
}

std::size_t integer_cube_root(std::size_t v) {
  auto r = static_cast<std::size_t>(std::cbrt(static_cast<double>(v)));
  while (r > 0 && r * r * r > v) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= v) ++r;
  return r;
}

Index BadFamilyInstance::coordinate_at(std::size_t t) const {
  if (t == 0 || t > rounds()) throw InvalidInput("round outside instance");
  if (t <= t0) return 0;
  return (t - t0 + t1 - 1) / t1;  // ceil((t - T0) / T1)
}

std::string BadFamilyInstance::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "T0=" << t0 << " C=" << c << " T1=" << t1 << " eps=" << eps << " T=" << rounds()
     << " n=" << dimension();
  return os.str();
}

BadFamilyInstance bad_family(std::size_t t0, double eps) {
  if (t0 < 8) throw ConfigError("bad family needs T0 >= 8");
  const std::size_t c = integer_cube_root(t0);
  return bad_family(t0, c, c, eps);
}

BadFamilyInstance bad_family(std::size_t t0, std::size_t c, std::size_t t1, double eps) {
  if (t0 == 0) throw ConfigError("bad family needs T0 >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("bad family needs 0 < eps < 1");
  if (c > 0 && t1 == 0) throw ConfigError("ramp subproblems need T1 >= 1");
  BadFamilyInstance inst;
  inst.t0 = t0;
  inst.c = c;
  inst.t1 = t1;
  inst.eps = eps;
  inst.losses = oscillation_stream(1.0, eps, t0, 0);
  inst.losses.reserve(inst.rounds());
  for (std::size_t t = t0 + 1; t <= inst.rounds(); ++t) {
    SparseVector g;
    g.push_back(inst.coordinate_at(t), -1.0);
    inst.losses.emplace_back(LinearLoss{std::move(g)});
  }
  return inst;
}

double play_regret(Learner& learner, const BadFamilyInstance& instance) {
  double total = 0.0;
  for (const auto& f : instance.losses) {
    total += loss_value(f, learner.dense());
    learner.observe(f);
  }
  return total - instance.comparator_loss();
}

double global_rate_lower_bound(const BadFamilyInstance& instance, double eta) {
  const double t0 = static_cast<double>(instance.t0);
  const double c = static_cast<double>(instance.c);
  const double t1 = static_cast<double>(instance.t1);
  return 0.5 * t0 * eta + 0.5 * c * std::min(t1, 1.0 / (2.0 * eta));
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw InvalidInput("bad log grid");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return out;
}

EtaSearchResult best_fixed_eta_regret(const BadFamilyInstance& instance, std::span<const double> etas) {
  if (etas.empty()) throw InvalidInput("empty rate grid");
  EtaSearchResult result;
  result.regret = std::numeric_limits<double>::infinity();
  for (double eta : etas) {
    FixedRateOgd learner(instance.box(), eta);
    const double r = play_regret(learner, instance);
    result.regrets.push_back(r);
    if (r < result.regret) {
      result.regret = r;
      result.eta = eta;
    }
  }
  return result;
}

}  // namespace oco
