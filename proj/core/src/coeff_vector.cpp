#include "gbw/coeff_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbw {

namespace sets {

IndexSet normalized(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool contains(const IndexSet& s, Index n) {
  return std::binary_search(s.begin(), s.end(), n);
}

bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(const IndexSet& a, const IndexSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return false;
    if (*ia < *ib) ++ia; else ++ib;
  }
  return true;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_minus(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool strictly_below(const IndexSet& a, const IndexSet& b) {
  if (a.empty() || b.empty()) return true;
  return a.back() < b.front();
}

IndexSet range(Index lo, Index hi) {
  IndexSet out;
  for (Index n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

}  // namespace sets

SignVector SignVector::all_plus(const IndexSet& on) {
  SignVector v;
  for (Index n : on) v.signs_[n] = 1;
  return v;
}

SignVector SignVector::make(const IndexSet& on, const std::vector<int>& signs) {
  if (on.size() != signs.size())
    throw std::invalid_argument("SignVector: index/sign length mismatch");
  SignVector v;
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1)
      throw std::invalid_argument("SignVector: signs must be +1 or -1");
    v.signs_[on[i]] = signs[i];
  }
  return v;
}

int SignVector::at(Index n) const {
  auto it = signs_.find(n);
  if (it == signs_.end())
    throw std::out_of_range("SignVector: no sign for index " + std::to_string(n));
  return it->second;
}

bool SignVector::covers(const IndexSet& s) const {
  for (Index n : s)
    if (!signs_.count(n)) return false;
  return true;
}

CoeffVector::CoeffVector(Index dim_cap) : dim_cap_(dim_cap) {
  if (dim_cap < 1) throw std::invalid_argument("CoeffVector: dim_cap must be >= 1");
}

CoeffVector CoeffVector::from_dense(const std::vector<double>& values, Index dim_cap) {
  CoeffVector x(dim_cap);
  for (std::size_t i = 0; i < values.size(); ++i)
    x.set(static_cast<Index>(i) + 1, values[i]);
  return x;
}

CoeffVector CoeffVector::from_pairs(const std::vector<std::pair<Index, double>>& items,
                                    Index dim_cap) {
  CoeffVector x(dim_cap);
  for (const auto& [n, v] : items) x.set(n, v);
  return x;
}

CoeffVector CoeffVector::indicator(const IndexSet& a, Index dim_cap) {
  CoeffVector x(dim_cap);
  for (Index n : a) x.set(n, 1.0);
  return x;
}

CoeffVector CoeffVector::signed_indicator(const IndexSet& a, const SignVector& eps,
                                          Index dim_cap) {
  if (!eps.covers(a))
    throw std::invalid_argument("signed_indicator: signs do not cover the set");
  CoeffVector x(dim_cap);
  for (Index n : a) x.set(n, static_cast<double>(eps.at(n)));
  return x;
}

CoeffVector CoeffVector::unit(Index n, Index dim_cap) {
  CoeffVector x(dim_cap);
  x.set(n, 1.0);
  return x;
}

double CoeffVector::coeff(Index n) const {
  auto it = entries_.find(n);
  return it == entries_.end() ? 0.0 : it->second;
}

void CoeffVector::set(Index n, double v) {
  if (n < 1 || n > dim_cap_)
    throw std::invalid_argument("CoeffVector: index " + std::to_string(n) +
                                " outside [1, dim_cap]");
  if (v == 0.0)
    entries_.erase(n);
  else
    entries_[n] = v;
}

IndexSet CoeffVector::support() const {
  IndexSet s;
  s.reserve(entries_.size());
  for (const auto& [n, _] : entries_) s.push_back(n);
  return s;
}

double CoeffVector::sup_norm() const {
  double m = 0.0;
  for (const auto& [_, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

CoeffVector CoeffVector::plus(const CoeffVector& other) const {
  CoeffVector out(std::max(dim_cap_, other.dim_cap_));
  for (const auto& [n, v] : entries_) out.set(n, v);
  for (const auto& [n, v] : other.entries_) out.set(n, out.coeff(n) + v);
  return out;
}

CoeffVector CoeffVector::scaled(double c) const {
  CoeffVector out(dim_cap_);
  if (c == 0.0) return out;
  for (const auto& [n, v] : entries_) out.set(n, c * v);
  return out;
}

}  // namespace gbw
