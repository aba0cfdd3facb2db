#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oco {

using Index = std::size_t;

// Sparse real vector over non-negative coordinate indices. Entries are kept
// sorted by index and an explicit zero is never stored, so reading an absent
// index yields 0.
class SparseVector {
 public:
  using Entry = std::pair<Index, double>;
  using const_iterator = std::vector<Entry>::const_iterator;

  SparseVector() = default;
  // Entries may come in any order; duplicates throw InvalidInput, zeros are dropped.
  SparseVector(std::initializer_list<Entry> entries);

  static SparseVector from_entries(std::vector<Entry> entries);
  static SparseVector from_dense(std::span<const double> dense);

  double operator[](Index i) const;
  // Assigning zero erases the entry.
  void set(Index i, double value);
  // Appends an entry whose index exceeds every stored index. Zero is skipped.
  void push_back(Index i, double value);

  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  std::span<const Entry> entries() const { return entries_; }
  std::optional<Index> max_index() const;

  double squared_norm() const;
  bool all_finite() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<Entry> entries_;
};

double dot(const SparseVector& u, const SparseVector& v);
// Indices beyond the end of `dense` read as zero.
double dot(const SparseVector& u, std::span<const double> dense);
// Returns v + alpha * u with exact-zero results dropped.
SparseVector axpy(double alpha, const SparseVector& u, const SparseVector& v);
SparseVector scaled(const SparseVector& u, double alpha);

// Axis-aligned box  x_{i} in [lower_i, upper_i], i < dimension.
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper);

  // [lower, upper]^dimension without materializing per-coordinate bounds.
  static Box uniform(double lower, double upper, std::size_t dimension);
  // Unconstrained R^dimension.
  static Box unbounded(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  bool is_uniform() const { return uniform_; }
  double lower(Index i) const;
  double upper(Index i) const;
  double diameter(Index i) const { return upper(i) - lower(i); }
  // Euclidean diameter sqrt(sum_i D_i^2).
  double diameter() const;
  double clamp(Index i, double value) const;
  bool contains(std::span<const double> point, double tol = 0.0) const;
  // Sub-box over a single coordinate.
  Box interval(Index i) const;
  std::string describe() const;

 private:
  Box() = default;
  void check_index(Index i) const;

  std::size_t dimension_ = 0;
  bool uniform_ = false;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Componentwise clip of a dense point onto the box. Non-finite coordinates
// throw InvalidInput.
std::vector<double> project(std::span<const double> point, const Box& box);

struct Example {
  SparseVector features;
  double label = 0.0;

  friend bool operator==(const Example&, const Example&) = default;
};

}  // namespace oco
