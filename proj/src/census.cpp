#include "sapcensus/census.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "sapcensus/oracle.hpp"

namespace sapcensus {

namespace {

// Subset enumeration is 2^k sweeps per rectangle; past this k the census is
// out of reach no matter the budget.
constexpr int kMaxSubsetModulus = 24;

std::vector<int> residues_of(std::uint32_t mask, int k) {
  std::vector<int> residues;
  for (int r = 0; r < k; ++r)
    if (mask >> r & 1u) residues.push_back(r);
  return residues;
}

// Sweeping a rectangle in its wide orientation keeps the boundary (and hence
// the packed-state width) small; inscribed counts are transpose-invariant.
Rect wide(Rect r) { return r.w >= r.h ? r : Rect{r.h, r.w}; }

}  // namespace

int choose_k(int nmax) {
  int k = 2;
  if (nmax >= 2) {
    const double raw = std::sqrt(double(nmax) * std::log(double(nmax)));
    k = static_cast<int>(std::llround(raw));
  }
  k = std::min(k, nmax - 1);
  return std::max(k, 2);
}

CountSeries inscribed_incl_excl(Rect rect, LatticeMode mode, int nmax, int k,
                                int q, const SweepOptions& opt,
                                SweepStats* stats) {
  require_rect(rect, mode);
  if (rect.w < 1 || rect.h < 1)
    throw UsageError("inscribed_incl_excl: rectangle must be nondegenerate");
  if (nmax < 0) throw UsageError("inscribed_incl_excl: nmax must be >= 0");
  if (k < 2) throw UsageError("inscribed_incl_excl: k must be >= 2");
  if (k > kMaxSubsetModulus)
    throw ResourceLimitError(
        "inscribed_incl_excl: 2^k residue subsets infeasible for k = " +
        std::to_string(k));
  if (q < 0) q = nmax / k;
  CountSeries total(nmax);
  SweepStats agg;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    SweepPlan plan = SweepPlan::make(rect, k, residues_of(mask, k), q);
    SweepStats st;
    const CountSeries n_k = skip_sweep(plan, mode, nmax, opt, &st);
    total = merge_series(total, n_k, std::popcount(mask) % 2 == 1 ? 1 : -1);
    agg.peak_states = std::max(agg.peak_states, st.peak_states);
    agg.max_occupied_slots =
        std::max(agg.max_occupied_slots, st.max_occupied_slots);
    agg.steps += st.steps;
  }
  if (stats) *stats = agg;
  return total;
}

CensusResult census(const CensusConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const int nmax = config.nmax;
  if (nmax < 0) throw UsageError("census: nmax must be >= 0");
  if (config.jobs < 1) throw UsageError("census: jobs must be >= 1");
  const bool sap = config.mode == LatticeMode::Sap;

  CensusResult result(nmax);
  result.mode = config.mode;
  result.method = config.method;

  auto finish = [&]() {
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return std::move(result);
  };

  if (config.method == Method::Oracle) {
    if (sap) {
      if (nmax >= 4)
        result.series = enumerate_polygons_oracle(nmax, config.allow_large);
    } else {
      if (nmax == 0)
        result.series.set(0, 1);
      else
        result.series = enumerate_walks_oracle(nmax, config.allow_large);
    }
    result.tasks = 1;
    return finish();
  }

  int k = 0;
  int global_q = 0;
  if (config.method == Method::Skip) {
    k = config.k == 0 ? choose_k(nmax) : config.k;
    if (k < 2 || k >= nmax)
      throw UsageError("census: the skip method needs 2 <= k < n");
    if (k > kMaxSubsetModulus)
      throw ResourceLimitError(
          "census: 2^k residue subsets infeasible for k = " + std::to_string(k));
    if (config.tightened_q && config.q >= 0)
      throw UsageError("census: explicit q conflicts with tightened-q");
    global_q = config.q >= 0 ? config.q : nmax / k;
    if (global_q < nmax / k)
      throw UsageError(
          "census: q below n/k would discard objects that belong in the count");
    result.k = k;
    result.q = config.tightened_q ? -1 : global_q;
  }

  // Degenerate SAW boxes hold one straight shape each; closed form, no sweep.
  long long degenerate_rects = 0;
  if (!sap) {
    result.series.add(0, 1);  // the single-vertex walk
    for (int len = 1; len <= nmax; ++len)
      result.series.add(len, 4);  // (len,0) and (0,len), times 2 directions
    degenerate_rects = config.transpose_opt ? nmax : 2LL * nmax;
  }

  struct SweepTask {
    Rect rect;  // orientation actually swept (wide)
    int coeff = 1;
    int q = 0;
    std::uint32_t mask = 0;
  };
  std::vector<SweepTask> tasks;
  long long rect_terms = 0;
  for (int w = 1; w <= nmax; ++w) {
    for (int h = 1; h <= nmax; ++h) {
      if (sap ? 2 * (w + h) > nmax : w + h > nmax) continue;
      int weight = 1;
      if (config.transpose_opt) {
        if (h < w) continue;
        if (h > w) weight = 2;
      }
      ++rect_terms;
      const Rect sweep_rect = wide(Rect{w, h});
      const int coeff = weight * (sap ? 1 : 2);
      if (config.method == Method::FullTm) {
        tasks.push_back(SweepTask{sweep_rect, coeff, 0, 0});
      } else {
        int q_rect = global_q;
        if (config.tightened_q) {
          const int lower = (sap ? 2 : 1) * std::min(w, h);
          q_rect = std::max(0, (nmax - lower) / k);
        }
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
          const int sign = std::popcount(mask) % 2 == 1 ? 1 : -1;
          tasks.push_back(SweepTask{sweep_rect, sign * coeff, q_rect, mask});
        }
      }
    }
  }
  result.rects = rect_terms + degenerate_rects;
  result.tasks = static_cast<long long>(tasks.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex merge_mu;
  std::exception_ptr first_error;
  SweepStats agg;

  auto worker = [&]() {
    CountSeries acc(nmax);
    SweepStats wstats;
    try {
      while (!abort.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        const SweepTask& task = tasks[i];
        SweepOptions opt;
        opt.prune = config.prune;
        opt.memory_limit_bytes = config.memory_limit_bytes;
        SweepStats st;
        CountSeries s(nmax);
        if (config.method == Method::FullTm) {
          s = full_sweep(task.rect, config.mode, nmax, opt, &st);
        } else {
          SweepPlan plan =
              SweepPlan::make(task.rect, k, residues_of(task.mask, k), task.q);
          s = skip_sweep(plan, config.mode, nmax, opt, &st);
        }
        for (int e = 0; e <= nmax; ++e)
          if (s.at(e) != 0) acc.add(e, s.at(e) * task.coeff);
        wstats.peak_states = std::max(wstats.peak_states, st.peak_states);
        wstats.max_occupied_slots =
            std::max(wstats.max_occupied_slots, st.max_occupied_slots);
        wstats.steps += st.steps;
      }
    } catch (...) {
      abort.store(true);
      std::lock_guard<std::mutex> lock(merge_mu);
      if (!first_error) first_error = std::current_exception();
      return;
    }
    std::lock_guard<std::mutex> lock(merge_mu);
    // Exact integer addition: any merge order yields the same series.
    for (int e = 0; e <= nmax; ++e)
      if (acc.at(e) != 0) result.series.add(e, acc.at(e));
    agg.peak_states = std::max(agg.peak_states, wstats.peak_states);
    agg.max_occupied_slots =
        std::max(agg.max_occupied_slots, wstats.max_occupied_slots);
    agg.steps += wstats.steps;
  };

  const int jobs = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(config.jobs),
                            std::max<std::size_t>(tasks.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  result.peak_states = agg.peak_states;
  return finish();
}

}  // namespace sapcensus
