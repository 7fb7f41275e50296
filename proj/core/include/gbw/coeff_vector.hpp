#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace gbw {

using Index = std::int64_t;

// Index sets are kept sorted and duplicate-free throughout.
using IndexSet = std::vector<Index>;

// Scalar sign with the convention sgn(0) = +1.
inline double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

namespace sets {

IndexSet normalized(IndexSet s);
bool contains(const IndexSet& s, Index n);
bool is_subset(const IndexSet& a, const IndexSet& b);
bool disjoint(const IndexSet& a, const IndexSet& b);
IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_minus(const IndexSet& a, const IndexSet& b);
IndexSet set_intersect(const IndexSet& a, const IndexSet& b);

// A < B elementwise (max A < min B); vacuously true if either is empty.
bool strictly_below(const IndexSet& a, const IndexSet& b);

// {lo, lo+1, ..., hi}; empty when hi < lo.
IndexSet range(Index lo, Index hi);

}  // namespace sets

// Signs on a finite index set, each +1 or -1.
class SignVector {
 public:
  SignVector() = default;

  static SignVector all_plus(const IndexSet& on);
  // signs[i] pairs with on[i]; values must be +1 or -1.
  static SignVector make(const IndexSet& on, const std::vector<int>& signs);

  int at(Index n) const;  // throws std::out_of_range when n is uncovered
  bool covers(const IndexSet& s) const;
  const std::map<Index, int>& entries() const { return signs_; }
  bool operator==(const SignVector&) const = default;

 private:
  std::map<Index, int> signs_;
};

// Finitely supported coefficient sequence x ~ sum_n x_n e_n, 1-based
// indices bounded by dim_cap. Stored entries are always nonzero, so the
// key set is exactly supp(x).
class CoeffVector {
 public:
  static constexpr Index kDefaultDimCap = 1'000'000;

  CoeffVector() : dim_cap_(kDefaultDimCap) {}
  explicit CoeffVector(Index dim_cap);

  // values[i] is the coefficient of e_{i+1}; zeros are dropped.
  static CoeffVector from_dense(const std::vector<double>& values,
                                Index dim_cap = kDefaultDimCap);
  static CoeffVector from_pairs(const std::vector<std::pair<Index, double>>& items,
                                Index dim_cap = kDefaultDimCap);
  // 1_A
  static CoeffVector indicator(const IndexSet& a, Index dim_cap = kDefaultDimCap);
  // 1_{eps A}; eps must cover A
  static CoeffVector signed_indicator(const IndexSet& a, const SignVector& eps,
                                      Index dim_cap = kDefaultDimCap);
  static CoeffVector unit(Index n, Index dim_cap = kDefaultDimCap);

  double coeff(Index n) const;        // e_n^*(x); 0 off the support
  void set(Index n, double v);        // v == 0 erases the entry
  IndexSet support() const;
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double sup_norm() const;            // max_n |x_n|, 0 for the zero vector
  Index dim_cap() const { return dim_cap_; }

  const std::map<Index, double>& entries() const { return entries_; }

  CoeffVector plus(const CoeffVector& other) const;  // coefficientwise sum
  CoeffVector scaled(double c) const;

  bool operator==(const CoeffVector&) const = default;

 private:
  std::map<Index, double> entries_;
  Index dim_cap_;
};

}  // namespace gbw
