#pragma once

#include <gmpxx.h>

#include <vector>

#include "sapcensus/types.hpp"

namespace sapcensus {

// Exact counts indexed by object length 0..nmax.  Coefficients are
// arbitrary-precision integers; signed values appear transiently inside
// inclusion-exclusion aggregates, but every final census entry is >= 0.
class CountSeries {
 public:
  explicit CountSeries(int nmax) : counts_(static_cast<size_t>(nmax) + 1) {
    if (nmax < 0) throw UsageError("series nmax must be >= 0");
  }

  int nmax() const { return static_cast<int>(counts_.size()) - 1; }

  const mpz_class& at(int len) const {
    check_index(len);
    return counts_[static_cast<size_t>(len)];
  }

  void set(int len, mpz_class v) {
    check_index(len);
    counts_[static_cast<size_t>(len)] = std::move(v);
  }

  void add(int len, const mpz_class& v) {
    check_index(len);
    counts_[static_cast<size_t>(len)] += v;
  }

  bool is_zero() const {
    for (const auto& c : counts_)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const CountSeries&, const CountSeries&) = default;

 private:
  void check_index(int len) const {
    if (len < 0 || len >= static_cast<int>(counts_.size()))
      throw UsageError("series index out of range");
  }

  std::vector<mpz_class> counts_;
};

// Pointwise exact a + sign*b.  Both series must share the same nmax.
CountSeries merge_series(const CountSeries& a, const CountSeries& b, int sign);

}  // namespace sapcensus
