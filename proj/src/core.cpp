#include "oco/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oco/errors.hpp"

namespace oco {

SparseVector::SparseVector(std::initializer_list<Entry> entries)
    : SparseVector(from_entries(std::vector<Entry>(entries))) {}

SparseVector SparseVector::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseVector out;
  out.entries_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].first == entries[k - 1].first) {
      throw InvalidInput("duplicate sparse index " + std::to_string(entries[k].first));
    }
    if (entries[k].second != 0.0) out.entries_.push_back(entries[k]);
  }
  return out;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector out;
  for (Index i = 0; i < dense.size(); ++i) out.push_back(i, dense[i]);
  return out;
}

double SparseVector::operator[](Index i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Index key) { return e.first < key; });
  return (it != entries_.end() && it->first == i) ? it->second : 0.0;
}

void SparseVector::set(Index i, double value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Index key) { return e.first < key; });
  const bool present = it != entries_.end() && it->first == i;
  if (value == 0.0) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    entries_.insert(it, {i, value});
  }
}

void SparseVector::push_back(Index i, double value) {
  if (!entries_.empty() && entries_.back().first >= i) {
    throw InvalidInput("push_back index out of order");
  }
  if (value != 0.0) entries_.emplace_back(i, value);
}

std::optional<Index> SparseVector::max_index() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.back().first;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [i, v] : entries_) s += v * v;
  return s;
}

bool SparseVector::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return std::isfinite(e.second); });
}

double dot(const SparseVector& u, const SparseVector& v) {
  double s = 0.0;
  auto a = u.begin();
  auto b = v.begin();
  while (a != u.end() && b != v.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

double dot(const SparseVector& u, std::span<const double> dense) {
  double s = 0.0;
  for (const auto& [i, v] : u) {
    if (i < dense.size()) s += v * dense[i];
  }
  return s;
}

SparseVector axpy(double alpha, const SparseVector& u, const SparseVector& v) {
  SparseVector out;
  auto a = u.begin();
  auto b = v.begin();
  while (a != u.end() || b != v.end()) {
    if (b == v.end() || (a != u.end() && a->first < b->first)) {
      out.push_back(a->first, alpha * a->second);
      ++a;
    } else if (a == u.end() || b->first < a->first) {
      out.push_back(b->first, b->second);
      ++b;
    } else {
      out.push_back(a->first, b->second + alpha * a->second);
      ++a;
      ++b;
    }
  }
  return out;
}

SparseVector scaled(const SparseVector& u, double alpha) {
  SparseVector out;
  for (const auto& [i, v] : u) out.push_back(i, alpha * v);
  return out;
}

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : dimension_(lower.size()), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw InvalidInput("box bounds have different lengths");
  }
  for (Index i = 0; i < dimension_; ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
      throw InvalidInput("box bound a_i > b_i at coordinate " + std::to_string(i));
    }
  }
}

Box Box::uniform(double lower, double upper, std::size_t dimension) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw InvalidInput("uniform box requires lower <= upper");
  }
  Box box;
  box.dimension_ = dimension;
  box.uniform_ = true;
  box.lower_ = {lower};
  box.upper_ = {upper};
  return box;
}

Box Box::unbounded(std::size_t dimension) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return uniform(-inf, inf, dimension);
}

void Box::check_index(Index i) const {
  if (i >= dimension_) {
    throw InvalidInput("coordinate " + std::to_string(i) + " outside box of dimension " +
                       std::to_string(dimension_));
  }
}

double Box::lower(Index i) const {
  check_index(i);
  return uniform_ ? lower_[0] : lower_[i];
}

double Box::upper(Index i) const {
  check_index(i);
  return uniform_ ? upper_[0] : upper_[i];
}

double Box::diameter() const {
  if (uniform_) {
    return (upper_[0] - lower_[0]) * std::sqrt(static_cast<double>(dimension_));
  }
  double s = 0.0;
  for (Index i = 0; i < dimension_; ++i) {
    const double d = upper_[i] - lower_[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double Box::clamp(Index i, double value) const {
  return std::clamp(value, lower(i), upper(i));
}

bool Box::contains(std::span<const double> point, double tol) const {
  if (point.size() > dimension_) return false;
  for (Index i = 0; i < point.size(); ++i) {
    if (!(point[i] >= lower(i) - tol && point[i] <= upper(i) + tol)) return false;
  }
  return true;
}

Box Box::interval(Index i) const { return Box({lower(i)}, {upper(i)}); }

std::string Box::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (uniform_) {
    os << "[" << lower_[0] << "," << upper_[0] << "]^" << dimension_;
  } else {
    for (Index i = 0; i < dimension_; ++i) {
      os << (i ? " x " : "") << "[" << lower_[i] << "," << upper_[i] << "]";
    }
  }
  return os.str();
}

std::vector<double> project(std::span<const double> point, const Box& box) {
  if (point.size() > box.dimension()) {
    throw InvalidInput("point has more coordinates than the box");
  }
  std::vector<double> out(point.size());
  for (Index i = 0; i < point.size(); ++i) {
    if (!std::isfinite(point[i])) {
      throw InvalidInput("non-finite coordinate " + std::to_string(i));
    }
    out[i] = box.clamp(i, point[i]);
  }
  return out;
}

}  // namespace oco
