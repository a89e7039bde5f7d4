#pragma once

#include <cstddef>

#include "sapcensus/series.hpp"
#include "sapcensus/sweep.hpp"
#include "sapcensus/types.hpp"

namespace sapcensus {

enum class Method { Oracle, FullTm, Skip };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Oracle: return "oracle";
    case Method::FullTm: return "tm";
    default: return "skip";
  }
}

struct CensusConfig {
  int nmax = 0;
  LatticeMode mode = LatticeMode::Sap;
  Method method = Method::FullTm;
  int k = 0;        // 0 = auto (choose_k)
  int q = -1;       // -1 = auto (nmax/k, or the tightened per-rect value)
  int jobs = 1;
  bool transpose_opt = true;   // sweep w <= h only, double off-diagonal rects
  bool tightened_q = false;    // per-rect q = (nmax - vertical lower bound)/k
  bool prune = true;
  bool allow_large = false;    // override oracle feasibility guards
  std::size_t memory_limit_bytes = kDefaultMemoryLimit;
};

struct CensusResult {
  CountSeries series;
  LatticeMode mode = LatticeMode::Sap;
  Method method = Method::FullTm;
  int nmax = 0;
  int k = 0;
  int q = 0;
  long long rects = 0;  // rectangles enumerated (after transpose reduction)
  long long tasks = 0;  // sweep/oracle invocations
  double seconds = 0.0;
  std::size_t peak_states = 0;

  explicit CensusResult(int nmax_) : series(nmax_), nmax(nmax_) {}
};

// k = round(sqrt(nmax * ln nmax)) clamped to [2, nmax-1].  Natural log; the
// asymptotically optimal choice is base-insensitive.
int choose_k(int nmax);

// Sum over all nonempty residue subsets K of {0..k-1} of
// (-1)^(|K|+1) * skip_sweep(rect, k, K, q); equals the unfiltered inscribed
// count exactly.  q < 0 selects the default nmax/k.
CountSeries inscribed_incl_excl(Rect rect, LatticeMode mode, int nmax, int k,
                                int q = -1, const SweepOptions& opt = {},
                                SweepStats* stats = nullptr);

// Whole-series counts up to config.nmax by the configured method.
// SAP: series[n] = sum of inscribed(w,h)[n] over w,h >= 1 with 2(w+h) <= n.
// SAW: series[n] = 2 * sum of inscribed(w,h)[n] over w+h <= n (degenerate
// boxes contribute the closed form 1 at length max(w,h) >= 1); series[0] = 1.
// The result is independent of jobs and scheduling.
CensusResult census(const CensusConfig& config);

}  // namespace sapcensus
