#include "sapcensus/sweep.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sapcensus {

namespace {

// ---------------------------------------------------------------------------
// Packed boundary state.  2 bits per slot (00 empty, 01 open, 10 close,
// 11 free): slots 0..31 in lo, slots 32..60 in hi bits 0..57.  hi bits 58..61
// are the touch flags (top=58, bottom=59, left=60, right=61), bits 62..63 the
// endpoint count.
// ---------------------------------------------------------------------------

constexpr unsigned kEmpty = 0, kOpen = 1, kClose = 2, kFree = 3;
constexpr int kMaxSlots = 61;
constexpr int kLoSlots = 32;
constexpr int kTouchShift = 58;
constexpr std::uint64_t kFlagMask = ~((1ull << kTouchShift) - 1);  // touch+endpoints

struct Key {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    auto mix = [](std::uint64_t z) {
      z += 0x9e3779b97f4a7c15ull;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return z ^ (z >> 31);
    };
    return static_cast<std::size_t>(mix(k.lo ^ mix(k.hi)));
  }
};

inline unsigned label_at(const Key& k, int i) {
  return i < kLoSlots ? unsigned(k.lo >> (2 * i)) & 3u
                      : unsigned(k.hi >> (2 * (i - kLoSlots))) & 3u;
}

inline void set_label(Key& k, int i, unsigned lab) {
  if (i < kLoSlots) {
    const int s = 2 * i;
    k.lo = (k.lo & ~(3ull << s)) | (std::uint64_t(lab) << s);
  } else {
    const int s = 2 * (i - kLoSlots);
    k.hi = (k.hi & ~(3ull << s)) | (std::uint64_t(lab) << s);
  }
}

inline unsigned touch_bits(const Key& k) {
  return unsigned(k.hi >> kTouchShift) & 0xFu;
}

inline unsigned endpoint_count(const Key& k) { return unsigned(k.hi >> 62); }

inline void set_endpoints(Key& k, unsigned v) {
  k.hi = (k.hi & ~(3ull << 62)) | (std::uint64_t(v) << 62);
}

inline int occupied_count(const Key& k) {
  const std::uint64_t m = 0x5555555555555555ull;
  const std::uint64_t a = (k.lo | (k.lo >> 1)) & m;
  const std::uint64_t b = (k.hi | (k.hi >> 1)) & m & ((1ull << kTouchShift) - 1);
  return std::popcount(a) + std::popcount(b);
}

// Matching partner under the parenthesis rule, scanning over OPEN/CLOSE labels
// (FREE slots are transparent).
int partner_of(const Key& k, int P, int i) {
  const unsigned lab = label_at(k, i);
  int depth = 0;
  if (lab == kOpen) {
    for (int j = i + 1; j < P; ++j) {
      const unsigned l = label_at(k, j);
      if (l == kOpen) {
        ++depth;
      } else if (l == kClose) {
        if (depth == 0) return j;
        --depth;
      }
    }
  } else {
    for (int j = i - 1; j >= 0; --j) {
      const unsigned l = label_at(k, j);
      if (l == kClose) {
        ++depth;
      } else if (l == kOpen) {
        if (depth == 0) return j;
        --depth;
      }
    }
  }
  throw std::logic_error("sweep: unbalanced boundary state");
}

// ---------------------------------------------------------------------------
// Boundary layout.  Within chunk [c0..c1] (width m) of a height-h rectangle
// the boundary crosses P = h+m+1 edges.  Just before vertex (x,y) is added,
// traversal order is: right-cut rows 0..y-1, the staircase (vertical edges in
// columns c1 down to x above row y, the horizontal edge entering (x,y), then
// vertical edges in columns x-1 down to c0 below row y), and left-cut rows
// y+1..h.  The vertex's input edges sit at p = y+(c1-x) (above) and p+1
// (left); its outputs are written back to the same two positions, which is
// exactly where the next vertex's layout expects them.
// ---------------------------------------------------------------------------

struct SlotDesc {
  BoundarySegment segment;
  int index;
};

SlotDesc slot_desc_before(int i, int c0, int c1, [[maybe_unused]] int h, int x,
                          int y) {
  const int p = y + (c1 - x);
  if (i < y) return {BoundarySegment::RightCut, i};
  if (i <= p) return {BoundarySegment::CurrentRow, 2 * (c1 - (i - y))};
  if (i == p + 1) {
    if (x > c0) return {BoundarySegment::CurrentRow, 2 * x - 1};
    return {BoundarySegment::LeftCut, y};
  }
  const int lower_hi = p + 1 + (x - c0);
  if (i <= lower_hi)
    return {BoundarySegment::CurrentRow, 2 * (x - 1 - (i - (p + 2)))};
  return {BoundarySegment::LeftCut, i - lower_hi + y};
}

SlotDesc slot_desc_aligned(int i) { return {BoundarySegment::LeftCut, i}; }

// Lattice row of the crossing edge's dangling (not yet added) endpoint; lower
// bound fuel for future arcs.
int desc_row(const SlotDesc& d, int x, int y) {
  if (d.segment != BoundarySegment::CurrentRow) return d.index;
  if (d.index & 1) return y;                  // kink: enters (x,y)
  return d.index / 2 >= x ? y : y + 1;        // vertical above/below row y
}

LinkLabel to_link(unsigned lab) {
  switch (lab) {
    case kOpen: return LinkLabel::Open;
    case kClose: return LinkLabel::Close;
    default: return LinkLabel::Free;
  }
}

unsigned from_link(LinkLabel l) {
  switch (l) {
    case LinkLabel::Open: return kOpen;
    case LinkLabel::Close: return kClose;
    default: return kFree;
  }
}

// ---------------------------------------------------------------------------
// Local rules.  ctx.p/ctx.p+1 hold the input edges; emit(key, delta) receives
// each successor, harvest() fires on COMPLETE (gating already checked).
// ---------------------------------------------------------------------------

struct VertexCtx {
  int P = 0;
  int p = 0;
  bool sap = true;
  bool can_r = false;
  bool can_b = false;
  unsigned tf = 0;  // touch bits this vertex sets when it has occupied degree
};

template <typename EmitFn, typename HarvestFn>
void apply_vertex(const Key& key, const VertexCtx& ctx, EmitFn&& emit,
                  HarvestFn&& harvest) {
  const unsigned t = label_at(key, ctx.p);
  const unsigned l = label_at(key, ctx.p + 1);
  const unsigned ep = endpoint_count(key);
  auto with_touch = [&](Key k) {
    k.hi |= std::uint64_t(ctx.tf) << kTouchShift;
    return k;
  };
  const bool touches_all = (touch_bits(key) | ctx.tf) == 0xFu;

  if (t == kEmpty && l == kEmpty) {
    emit(key, 0);  // vertex stays unused; no degree, no touch change
    if (ctx.can_r && ctx.can_b) {
      Key nk = key;
      set_label(nk, ctx.p, kOpen);
      set_label(nk, ctx.p + 1, kClose);
      emit(with_touch(nk), 2);
    }
    if (!ctx.sap && ep < 2) {  // start a walk end here
      if (ctx.can_r) {
        Key nk = with_touch(key);
        set_label(nk, ctx.p, kFree);
        set_endpoints(nk, ep + 1);
        emit(nk, 1);
      }
      if (ctx.can_b) {
        Key nk = with_touch(key);
        set_label(nk, ctx.p + 1, kFree);
        set_endpoints(nk, ep + 1);
        emit(nk, 1);
      }
    }
    return;
  }

  Key base = key;
  set_label(base, ctx.p, kEmpty);
  set_label(base, ctx.p + 1, kEmpty);

  if ((t == kEmpty) != (l == kEmpty)) {
    const unsigned lab = t != kEmpty ? t : l;
    const int in_pos = t != kEmpty ? ctx.p : ctx.p + 1;
    if (ctx.can_r) {
      Key nk = base;
      set_label(nk, ctx.p, lab);
      emit(with_touch(nk), 1);
    }
    if (ctx.can_b) {
      Key nk = base;
      set_label(nk, ctx.p + 1, lab);
      emit(with_touch(nk), 1);
    }
    if (!ctx.sap && ep < 2) {  // terminate the walk at this vertex
      if (lab == kFree) {
        // completes the single path; other components could never rejoin
        if (occupied_count(key) == 1 && touches_all && ep + 1 == 2) harvest();
      } else {
        Key nk = with_touch(base);
        set_label(nk, partner_of(key, ctx.P, in_pos), kFree);
        set_endpoints(nk, ep + 1);
        emit(nk, 0);
      }
    }
    return;
  }

  // Both inputs occupied: vertex degree 2, outputs stay empty.
  if (t == kOpen && partner_of(key, ctx.P, ctx.p) == ctx.p + 1) {
    // Joining matched partners closes a loop: the finished polygon if nothing
    // else dangles, otherwise a dead sub-loop (and always dead in SAW mode).
    if (ctx.sap && occupied_count(key) == 2 && touches_all) harvest();
    return;
  }
  if (t == kFree && l == kFree) {
    if (!ctx.sap && occupied_count(key) == 2 && touches_all && ep == 2)
      harvest();
    return;
  }
  const int j1 = t != kFree ? partner_of(key, ctx.P, ctx.p) : -1;
  const int j2 = l != kFree ? partner_of(key, ctx.P, ctx.p + 1) : -1;
  Key nk = base;
  if (j1 >= 0 && j2 >= 0) {
    // two paren arcs merge: their remaining ends become one pair
    set_label(nk, std::min(j1, j2), kOpen);
    set_label(nk, std::max(j1, j2), kClose);
  } else if (j1 >= 0) {
    set_label(nk, j1, kFree);  // paren arc merged with a free-ended one
  } else if (j2 >= 0) {
    set_label(nk, j2, kFree);
  }
  emit(with_touch(nk), 0);
}

// ---------------------------------------------------------------------------
// The sweep engine: chunked boundary advance over a PackedMap of states.
// ---------------------------------------------------------------------------

using Coeffs = std::vector<mpz_class>;
using PackedMap = std::unordered_map<Key, Coeffs, KeyHash>;

class Engine {
 public:
  Engine(Rect rect, LatticeMode mode, int nmax,
         std::vector<std::pair<int, int>> chunks, std::vector<int> stops, int q,
         const SweepOptions& opt, SweepStats* stats)
      : rect_(rect),
        sap_(mode == LatticeMode::Sap),
        nmax_(nmax),
        chunks_(std::move(chunks)),
        stops_(std::move(stops)),
        q_(q),
        opt_(opt),
        stats_(stats),
        result_(nmax) {
    if (nmax_ < 0) throw UsageError("sweep: nmax must be >= 0");
    int max_m = 0;
    for (const auto& c : chunks_) max_m = std::max(max_m, c.second - c.first + 1);
    if (rect_.h + max_m + 1 > kMaxSlots)
      throw ResourceLimitError(
          "sweep: boundary needs " + std::to_string(rect_.h + max_m + 1) +
          " slots, packed-state capacity is " + std::to_string(kMaxSlots));
    per_state_bytes_ = 88 + static_cast<std::size_t>(nmax_ + 1) * 24;
  }

  CountSeries run() {
    PackedMap cur;
    {
      Coeffs one(static_cast<std::size_t>(nmax_) + 1);
      one[0] = 1;
      cur.emplace(Key{}, std::move(one));
    }
    int prev_P = rect_.h + (chunks_[0].second - chunks_[0].first + 1) + 1;
    for (std::size_t ci = 0; ci < chunks_.size(); ++ci) {
      const int c0 = chunks_[ci].first;
      const int c1 = chunks_[ci].second;
      const int m = c1 - c0 + 1;
      const int P = rect_.h + m + 1;
      const bool final_chunk = ci + 1 == chunks_.size();
      if (ci > 0) remap(cur, prev_P, m);
      prev_P = P;
      for (int y = 0; y <= rect_.h; ++y)
        for (int x = c0; x <= c1; ++x)
          step(cur, static_cast<int>(ci), c0, c1, m, P, x, y, final_chunk);
      if (!final_chunk) align(cur, c1, P);
    }
    if (stats_) *stats_ = local_stats_;
    return std::move(result_);
  }

 private:
  bool is_stop(int cut) const {
    return std::binary_search(stops_.begin(), stops_.end(), cut);
  }

  unsigned touch_flags(int x, int y) const {
    return (y == 0 ? 1u : 0u) | (y == rect_.h ? 2u : 0u) |
           (x == 0 ? 4u : 0u) | (x == rect_.w ? 8u : 0u);
  }

  // Remap aligned states (labels in slots 0..h) into the next chunk's layout:
  // new slot m+j holds old slot j, staircase slots start empty.
  void remap(PackedMap& cur, int old_P, int m) {
    PackedMap next;
    next.reserve(cur.size());
    for (auto& [key, coeffs] : cur) {
      for (int j = rect_.h + 1; j < old_P; ++j)
        if (label_at(key, j) != kEmpty)
          throw std::logic_error("sweep: non-cut slot occupied at alignment");
      Key nk;
      nk.hi = key.hi & kFlagMask;
      for (int j = 0; j <= rect_.h; ++j) {
        const unsigned lab = label_at(key, j);
        if (lab != kEmpty) set_label(nk, m + j, lab);
      }
      auto [it, inserted] = next.try_emplace(nk, Coeffs{});
      if (inserted) {
        it->second = std::move(coeffs);
      } else {
        for (int e = 0; e <= nmax_; ++e) it->second[static_cast<std::size_t>(e)] += coeffs[static_cast<std::size_t>(e)];
      }
    }
    cur = std::move(next);
  }

  void step(PackedMap& cur, int ci, int c0, int c1, int m, int P, int x, int y,
            bool final_chunk) {
    const int p = y + (c1 - x);
    VertexCtx ctx{P, p, sap_, x < rect_.w, y < rect_.h, touch_flags(x, y)};

    // Far-endpoint rows in the layout the successors live in (next vertex or
    // aligned), used by the admissible completion-distance prune.
    const bool want_rows = opt_.prune && sap_;
    std::array<int, kMaxSlots> rows{};
    if (want_rows) {
      int nx = 0, ny = 0;
      bool aligned = false;
      if (x < c1) {
        nx = x + 1;
        ny = y;
      } else if (y < rect_.h) {
        nx = c0;
        ny = y + 1;
      } else {
        aligned = true;
      }
      for (int i = 0; i < P; ++i) {
        if (aligned)
          rows[static_cast<std::size_t>(i)] = std::min(i, rect_.h);
        else
          rows[static_cast<std::size_t>(i)] =
              desc_row(slot_desc_before(i, c0, c1, rect_.h, nx, ny), nx, ny);
      }
    }
    const int even_nmax = nmax_ & ~1;

    PackedMap next;
    next.reserve(cur.size() + cur.size() / 2);

    auto emit = [&](const Key& nk, int delta) {
      int dmin = 0;
      if (want_rows) {
        std::array<int, kMaxSlots> occ{};
        int cnt = 0;
        for (int i = 0; i < P; ++i)
          if (label_at(nk, i) != kEmpty) occ[static_cast<std::size_t>(cnt++)] = rows[static_cast<std::size_t>(i)];
        if (cnt & 1)
          throw std::logic_error("sweep: odd occupied slots in polygon state");
        std::sort(occ.begin(), occ.begin() + cnt);
        for (int i = 0; i + 1 < cnt; i += 2) dmin += occ[static_cast<std::size_t>(i) + 1] - occ[static_cast<std::size_t>(i)];
      }
      Coeffs* tgt = nullptr;
      const Coeffs& src = *src_;
      for (int e = 0; e + delta <= nmax_; ++e) {
        if (mpz_sgn(src[static_cast<std::size_t>(e)].get_mpz_t()) == 0) continue;
        const int ee = e + delta;
        if (want_rows) {
          const int total = ee + dmin;
          if (total + (total & 1) > even_nmax) break;  // only worsens as e grows
        }
        if (!tgt) {
          auto [it, inserted] = next.try_emplace(nk, Coeffs{});
          if (inserted) it->second.assign(static_cast<std::size_t>(nmax_) + 1, mpz_class());
          tgt = &it->second;
        }
        (*tgt)[static_cast<std::size_t>(ee)] += src[static_cast<std::size_t>(e)];
      }
    };
    auto harvest = [&]() {
      const Coeffs& src = *src_;
      for (int e = 0; e <= nmax_; ++e) {
        if (mpz_sgn(src[static_cast<std::size_t>(e)].get_mpz_t()) == 0) continue;
        if (sap_ && (e & 1))
          throw std::logic_error("sweep: odd-length polygon completion");
        result_.add(e, src[static_cast<std::size_t>(e)]);
      }
    };

    for (auto& [key, coeffs] : cur) {
      src_ = &coeffs;
      apply_vertex(key, ctx, emit, harvest);
    }

    const std::size_t estimate = (cur.size() + next.size()) * per_state_bytes_;
    if (estimate > opt_.memory_limit_bytes)
      throw ResourceLimitError(
          "sweep: estimated state memory " + std::to_string(estimate) +
          " bytes exceeds limit " + std::to_string(opt_.memory_limit_bytes));
    cur = std::move(next);

    // The right cut's crossings only accumulate until the boundary passes it,
    // so states already over q at an upcoming stop can be dropped now.
    if (opt_.eager_filter && !final_chunk && x == c1 && y < rect_.h &&
        is_stop(c1)) {
      std::erase_if(cur, [&](const auto& kv) {
        int cnt = 0;
        for (int i = 0; i <= y; ++i)
          if (label_at(kv.first, i) != kEmpty) ++cnt;
        return cnt > q_;
      });
    }

    ++local_stats_.steps;
    local_stats_.peak_states = std::max(local_stats_.peak_states, cur.size());
    int max_occ = 0;
    for (const auto& kv : cur) max_occ = std::max(max_occ, occupied_count(kv.first));
    local_stats_.max_occupied_slots =
        std::max(local_stats_.max_occupied_slots, max_occ);
    if (opt_.step_observer) {
      StepInfo info;
      info.chunk_index = ci;
      info.chunk_width = m;
      info.x = x;
      info.y = y;
      info.live_states = cur.size();
      info.max_occupied_slots = max_occ;
      opt_.step_observer(info);
    }
  }

  StateMap to_public(const PackedMap& cur, int P) const {
    StateMap out;
    out.reserve(cur.size());
    for (const auto& [key, coeffs] : cur) {
      std::vector<CrossingSlot> slots;
      for (int i = 0; i < P; ++i) {
        const unsigned lab = label_at(key, i);
        if (lab == kEmpty) continue;
        if (i > rect_.h)
          throw std::logic_error("sweep: non-cut slot occupied at alignment");
        const SlotDesc d = slot_desc_aligned(i);
        slots.push_back(CrossingSlot{d.segment, d.index, to_link(lab)});
      }
      const unsigned tb = touch_bits(key);
      BoundarySignature sig = encode_signature(
          std::move(slots),
          {(tb & 1) != 0, (tb & 2) != 0, (tb & 4) != 0, (tb & 8) != 0},
          static_cast<int>(endpoint_count(key)));
      CountSeries ser(nmax_);
      for (int e = 0; e <= nmax_; ++e) ser.set(e, coeffs[static_cast<std::size_t>(e)]);
      out.emplace(std::move(sig), std::move(ser));
    }
    return out;
  }

  // End of a non-final chunk: the boundary aligns with cut `cut`; filter if it
  // is a stop, exposing before/after to the observer.
  void align(PackedMap& cur, int cut, int P) {
    const bool filtering = is_stop(cut);
    StateMap before;
    if (opt_.aligned_observer || opt_.validate) before = to_public(cur, P);
    if (filtering) {
      std::erase_if(cur,
                    [&](const auto& kv) { return occupied_count(kv.first) > q_; });
    }
    if (opt_.aligned_observer) {
      if (filtering) {
        StateMap after = to_public(cur, P);
        opt_.aligned_observer(cut, before, after);
      } else {
        opt_.aligned_observer(cut, before, before);
      }
    }
  }

  Rect rect_;
  bool sap_;
  int nmax_;
  std::vector<std::pair<int, int>> chunks_;
  std::vector<int> stops_;
  int q_;
  const SweepOptions& opt_;
  SweepStats* stats_;
  CountSeries result_;
  SweepStats local_stats_;
  std::size_t per_state_bytes_ = 0;
  const Coeffs* src_ = nullptr;
};

std::vector<std::pair<int, int>> chunks_from_stops(int w,
                                                   const std::vector<int>& stops) {
  std::vector<std::pair<int, int>> chunks;
  int prev = 0;
  for (int s : stops) {
    chunks.emplace_back(prev, s);
    prev = s + 1;
  }
  chunks.emplace_back(prev, w);
  return chunks;
}

}  // namespace

SweepPlan SweepPlan::make(Rect rect, int k, std::vector<int> residues, int q) {
  if (rect.w < 1 || rect.h < 1)
    throw UsageError("SweepPlan: rectangle must have w >= 1 and h >= 1");
  if (k < 2) throw UsageError("SweepPlan: k must be >= 2");
  if (q < 0) throw UsageError("SweepPlan: q must be >= 0");
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  if (residues.empty()) throw UsageError("SweepPlan: residue set must be nonempty");
  for (int r : residues)
    if (r < 0 || r >= k)
      throw UsageError("SweepPlan: residues must lie in 0..k-1");
  SweepPlan plan;
  plan.rect = rect;
  plan.k = k;
  plan.residues = std::move(residues);
  plan.q = q;
  for (int c = 0; c + 1 < rect.w; ++c)
    if (std::binary_search(plan.residues.begin(), plan.residues.end(), c % k))
      plan.stops.push_back(c);
  for (std::size_t i = 1; i < plan.stops.size(); ++i)
    if (plan.stops[i] - plan.stops[i - 1] > k)
      throw std::logic_error("SweepPlan: stop spacing exceeds k");
  plan.chunks = chunks_from_stops(rect.w, plan.stops);
  return plan;
}

std::vector<Vertex> SweepPlan::chunk_order() const {
  std::vector<Vertex> order;
  order.reserve(static_cast<std::size_t>(rect.w + 1) * (rect.h + 1));
  for (const auto& [c0, c1] : chunks)
    for (int y = 0; y <= rect.h; ++y)
      for (int x = c0; x <= c1; ++x) order.push_back(Vertex{x, y});
  return order;
}

CountSeries full_sweep(Rect rect, LatticeMode mode, int nmax,
                       const SweepOptions& opt, SweepStats* stats) {
  require_rect(rect, mode);
  if (nmax < 0) throw UsageError("full_sweep: nmax must be >= 0");
  if (mode == LatticeMode::Saw && (rect.w == 0 || rect.h == 0)) {
    // Degenerate boxes hold exactly the one straight path (or the lone vertex).
    CountSeries out(nmax);
    const int len = std::max(rect.w, rect.h);
    if (len <= nmax) out.set(len, 1);
    if (stats) *stats = SweepStats{};
    return out;
  }
  std::vector<std::pair<int, int>> chunks;
  for (int c = 0; c <= rect.w; ++c) chunks.emplace_back(c, c);
  Engine engine(rect, mode, nmax, std::move(chunks), {}, 0, opt, stats);
  return engine.run();
}

CountSeries skip_sweep(const SweepPlan& plan, LatticeMode mode, int nmax,
                       const SweepOptions& opt, SweepStats* stats) {
  require_rect(plan.rect, mode);
  if (plan.rect.w < 1 || plan.rect.h < 1)
    throw UsageError("skip_sweep: rectangle must be nondegenerate");
  Engine engine(plan.rect, mode, nmax, plan.chunks, plan.stops, plan.q, opt,
                stats);
  return engine.run();
}

StateMap cut_filter(const StateMap& states, int cut, int q) {
  if (cut < 0) throw UsageError("cut_filter: cut index must be >= 0");
  if (q < 0) throw UsageError("cut_filter: q must be >= 0");
  StateMap out;
  for (const auto& [sig, series] : states) {
    int crossings = 0;
    for (const auto& slot : sig.slots)
      if (slot.segment != BoundarySegment::CurrentRow) ++crossings;
    if (crossings <= q) out.emplace(sig, series);
  }
  return out;
}

bool prune_state(const BoundarySignature& sig, int edges_used, LatticeMode mode,
                 int nmax, const SweepPosition& pos) {
  if (edges_used > nmax) return false;
  if (mode == LatticeMode::Saw) return true;  // free ends void the pairing bound
  std::vector<int> occ_rows;
  occ_rows.reserve(sig.slots.size());
  for (const auto& slot : sig.slots) {
    if (pos.aligned || slot.segment != BoundarySegment::CurrentRow)
      occ_rows.push_back(slot.index);
    else
      occ_rows.push_back(desc_row({slot.segment, slot.index}, pos.next.x,
                                  pos.next.y));
  }
  if (occ_rows.size() % 2 != 0)
    throw UsageError("prune_state: polygon states need evenly many slots");
  std::sort(occ_rows.begin(), occ_rows.end());
  int dmin = 0;
  for (std::size_t i = 0; i + 1 < occ_rows.size(); i += 2)
    dmin += occ_rows[i + 1] - occ_rows[i];
  const int total = edges_used + dmin;
  return total + (total & 1) <= (nmax & ~1);
}

std::vector<UpdateCase> enumerate_local_cases(std::optional<LinkLabel> t_in,
                                              std::optional<LinkLabel> l_in,
                                              LatticeMode mode, bool can_right,
                                              bool can_below,
                                              int endpoints_placed,
                                              bool inputs_are_partners) {
  const bool sap = mode == LatticeMode::Sap;
  if (sap && ((t_in && *t_in == LinkLabel::Free) ||
              (l_in && *l_in == LinkLabel::Free)))
    throw UsageError("enumerate_local_cases: FREE labels are SAW-only");
  if (sap && endpoints_placed != 0)
    throw UsageError("enumerate_local_cases: endpoints are SAW-only");
  std::vector<UpdateCase> cases;
  auto add = [&](std::optional<LinkLabel> r, std::optional<LinkLabel> b,
                 int delta, UpdateEvent ev) {
    cases.push_back(UpdateCase{t_in, l_in, r, b, delta, ev});
  };

  if (!t_in && !l_in) {
    add(std::nullopt, std::nullopt, 0, UpdateEvent::None);
    if (can_right && can_below)
      add(LinkLabel::Open, LinkLabel::Close, 2, UpdateEvent::None);
    if (!sap && endpoints_placed < 2) {
      if (can_right) add(LinkLabel::Free, std::nullopt, 1, UpdateEvent::None);
      if (can_below) add(std::nullopt, LinkLabel::Free, 1, UpdateEvent::None);
    }
    return cases;
  }
  if (t_in.has_value() != l_in.has_value()) {
    const LinkLabel lab = t_in ? *t_in : *l_in;
    if (can_right) add(lab, std::nullopt, 1, UpdateEvent::None);
    if (can_below) add(std::nullopt, lab, 1, UpdateEvent::None);
    if (!sap && endpoints_placed < 2)
      add(std::nullopt, std::nullopt, 0,
          lab == LinkLabel::Free ? UpdateEvent::Complete : UpdateEvent::None);
    return cases;
  }
  // both occupied
  if (inputs_are_partners) {
    if (*t_in != LinkLabel::Open || *l_in != LinkLabel::Close)
      throw UsageError("enumerate_local_cases: partners must be (OPEN, CLOSE)");
    if (sap) add(std::nullopt, std::nullopt, 0, UpdateEvent::Complete);
    // SAW: closing a loop is never legal; no cases.
    return cases;
  }
  if (*t_in == LinkLabel::Free && *l_in == LinkLabel::Free) {
    add(std::nullopt, std::nullopt, 0, UpdateEvent::Complete);
    return cases;
  }
  add(std::nullopt, std::nullopt, 0, UpdateEvent::None);
  return cases;
}

VertexUpdateResult vertex_update(const BoundarySignature& sig,
                                 const CountSeries& series, Vertex v, Rect rect,
                                 LatticeMode mode, int chunk_c0, int chunk_c1) {
  require_rect(rect, mode);
  if (rect.w < 1 || rect.h < 1)
    throw UsageError("vertex_update: rectangle must be nondegenerate");
  if (chunk_c0 < 0 || chunk_c0 > chunk_c1 || chunk_c1 > rect.w)
    throw UsageError("vertex_update: chunk out of range");
  if (v.x < chunk_c0 || v.x > chunk_c1 || v.y < 0 || v.y > rect.h)
    throw UsageError("vertex_update: vertex outside the chunk");
  if (mode == LatticeMode::Sap && sig.endpoints_placed != 0)
    throw UsageError("vertex_update: endpoints are SAW-only");
  const int nmax = series.nmax();
  const int m = chunk_c1 - chunk_c0 + 1;
  const int P = rect.h + m + 1;
  if (P > kMaxSlots)
    throw ResourceLimitError("vertex_update: boundary exceeds packed capacity");

  // Place the signature's slots on the current layout.
  Key key;
  for (const auto& slot : sig.slots) {
    int found = -1;
    for (int i = 0; i < P; ++i) {
      const SlotDesc d =
          slot_desc_before(i, chunk_c0, chunk_c1, rect.h, v.x, v.y);
      if (d.segment == slot.segment && d.index == slot.index) {
        found = i;
        break;
      }
    }
    if (found < 0)
      throw UsageError("vertex_update: slot not on this boundary layout");
    if (slot.segment == BoundarySegment::LeftCut && chunk_c0 == 0)
      throw UsageError("vertex_update: left-cut edges leave the rectangle");
    if (slot.segment == BoundarySegment::RightCut && chunk_c1 == rect.w)
      throw UsageError("vertex_update: right-cut edges leave the rectangle");
    if (label_at(key, found) != kEmpty)
      throw UsageError("vertex_update: duplicate slot position");
    set_label(key, found, from_link(slot.label));
  }
  key.hi |= std::uint64_t((sig.touch_top ? 1u : 0u) | (sig.touch_bottom ? 2u : 0u) |
                          (sig.touch_left ? 4u : 0u) | (sig.touch_right ? 8u : 0u))
            << kTouchShift;
  set_endpoints(key, static_cast<unsigned>(sig.endpoints_placed));

  const int p = v.y + (chunk_c1 - v.x);
  VertexCtx ctx{P,
                p,
                mode == LatticeMode::Sap,
                v.x < rect.w,
                v.y < rect.h,
                (v.y == 0 ? 1u : 0u) | (v.y == rect.h ? 2u : 0u) |
                    (v.x == 0 ? 4u : 0u) | (v.x == rect.w ? 8u : 0u)};

  // Successors live in the next vertex's layout.
  int nx = 0, ny = 0;
  bool aligned = false;
  if (v.x < chunk_c1) {
    nx = v.x + 1;
    ny = v.y;
  } else if (v.y < rect.h) {
    nx = chunk_c0;
    ny = v.y + 1;
  } else {
    aligned = true;
  }

  VertexUpdateResult out(nmax);
  auto emit = [&](const Key& nk, int delta) {
    std::vector<CrossingSlot> slots;
    for (int i = 0; i < P; ++i) {
      const unsigned lab = label_at(nk, i);
      if (lab == kEmpty) continue;
      const SlotDesc d = aligned
                             ? slot_desc_aligned(i)
                             : slot_desc_before(i, chunk_c0, chunk_c1, rect.h,
                                                nx, ny);
      slots.push_back(CrossingSlot{d.segment, d.index, to_link(lab)});
    }
    const unsigned tb = touch_bits(nk);
    BoundarySignature nsig = encode_signature(
        std::move(slots),
        {(tb & 1) != 0, (tb & 2) != 0, (tb & 4) != 0, (tb & 8) != 0},
        static_cast<int>(endpoint_count(nk)));
    CountSeries shifted(nmax);
    bool any = false;
    for (int e = 0; e + delta <= nmax; ++e) {
      if (series.at(e) == 0) continue;
      shifted.set(e + delta, series.at(e));
      any = true;
    }
    if (any) out.successors.emplace_back(std::move(nsig), std::move(shifted));
  };
  auto harvest = [&]() {
    for (int e = 0; e <= nmax; ++e) out.completions.add(e, series.at(e));
  };
  apply_vertex(key, ctx, emit, harvest);
  return out;
}

}  // namespace sapcensus
