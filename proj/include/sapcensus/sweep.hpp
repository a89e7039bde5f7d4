#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sapcensus/series.hpp"
#include "sapcensus/signature.hpp"
#include "sapcensus/types.hpp"

namespace sapcensus {

// Plan for a column-skipping sweep: advance the boundary chunk by chunk,
// stop (align) at every cut whose index is congruent mod k to a residue in K,
// and discard states carrying more than q crossings at each stop.
struct SweepPlan {
  Rect rect;
  int k = 0;
  std::vector<int> residues;  // sorted, nonempty subset of {0..k-1}
  int q = 0;
  std::vector<int> stops;     // cuts in 0..w-2 with index mod k in residues
  // Inclusive vertex-column ranges between consecutive stops; their union
  // covers columns 0..w in order.
  std::vector<std::pair<int, int>> chunks;

  static SweepPlan make(Rect rect, int k, std::vector<int> residues, int q);

  // Vertex visitation sequence: chunks in order; within a chunk rows top to
  // bottom, each row's chunk columns left to right.
  std::vector<Vertex> chunk_order() const;
};

struct SweepStats {
  std::size_t peak_states = 0;
  int max_occupied_slots = 0;
  long long steps = 0;
};

// Snapshot handed to the per-step observer (after the step's transitions and
// any eager filtering).
struct StepInfo {
  int chunk_index = 0;
  int chunk_width = 0;  // m
  int x = 0;
  int y = 0;
  std::size_t live_states = 0;
  int max_occupied_slots = 0;
};

inline constexpr std::size_t kDefaultMemoryLimit = std::size_t(4) << 30;

struct SweepOptions {
  bool prune = true;
  // Discard states already exceeding q crossings at the upcoming stop cut as
  // soon as the excess crossing appears, instead of only at the stop.  Safe
  // (crossings at a fixed cut only accumulate until the boundary passes it)
  // and required for the 2q+m+1 slot bound to hold throughout a chunk.
  bool eager_filter = true;
  // Re-validate every state through the public signature encoder whenever the
  // boundary aligns with a cut.
  bool validate = false;
  std::size_t memory_limit_bytes = kDefaultMemoryLimit;
  std::function<void(const StepInfo&)> step_observer;
  // Called at every aligned cut with the states before and after filtering
  // (identical objects when no filter applies there).
  std::function<void(int cut, const StateMap& before, const StateMap& after)>
      aligned_observer;
};

// Exact inscribed counts for rect at all lengths <= nmax, classical
// column-by-column order, no filtering.  SAW mode accepts degenerate rects
// (closed-form result); SAP mode requires w,h >= 1.
CountSeries full_sweep(Rect rect, LatticeMode mode, int nmax,
                       const SweepOptions& opt = {}, SweepStats* stats = nullptr);

// The N_K series for plan.rect: inscribed objects whose crossing count is
// <= plan.q at every stop cut.  Chunked boundary advance with cut filtering
// at each stop.
CountSeries skip_sweep(const SweepPlan& plan, LatticeMode mode, int nmax,
                       const SweepOptions& opt = {}, SweepStats* stats = nullptr);

// Keeps exactly the states with at most q occupied cut-segment slots.  The
// baseline use is at an aligned boundary (all slots LEFT_CUT crossings of
// `cut`); the cut argument is that contextual cut index.  CURRENT_ROW slots
// are ignored by the count.
StateMap cut_filter(const StateMap& states, int cut, int q);

// Where the boundary currently stands: the chunk being swept and the next
// vertex to be added, or aligned=true between chunks (all slots cut slots).
// Needed to place CURRENT_ROW slots on a lattice row.
struct SweepPosition {
  int chunk_c0 = 0;
  int chunk_c1 = 0;
  Vertex next{0, 0};
  bool aligned = false;
};

// True = state may still reach a completion of length <= nmax; false = provably
// dead and safe to drop.  Bounds used: (a) edges_used > nmax; in SAP mode also
// (b) edges_used plus the adjacent-pair row-gap sum over the sorted
// far-endpoint rows of all occupied slots exceeds nmax, and (c) even-length
// parity.  SAW mode uses (a) only (free ends can terminate anywhere, so the
// pairing bound does not apply).
bool prune_state(const BoundarySignature& sig, int edges_used, LatticeMode mode,
                 int nmax, const SweepPosition& pos);

enum class UpdateEvent { None, Complete };

// One structural case of the local vertex-update rule table: input edge
// occupancy (above, left), output occupancy (right, below), interior edges
// added, and whether the case can complete an object.
struct UpdateCase {
  std::optional<LinkLabel> t_in;
  std::optional<LinkLabel> l_in;
  std::optional<LinkLabel> r_out;
  std::optional<LinkLabel> b_out;
  int delta_edges = 0;
  UpdateEvent event = UpdateEvent::None;
};

// Every legal local transition for the given input pair.  can_right/can_below
// are false when the corresponding output edge would leave the rectangle;
// inputs_are_partners distinguishes the two both-occupied paren cases.
std::vector<UpdateCase> enumerate_local_cases(std::optional<LinkLabel> t_in,
                                              std::optional<LinkLabel> l_in,
                                              LatticeMode mode, bool can_right,
                                              bool can_below,
                                              int endpoints_placed,
                                              bool inputs_are_partners);

struct VertexUpdateResult {
  std::vector<std::pair<BoundarySignature, CountSeries>> successors;
  CountSeries completions;

  explicit VertexUpdateResult(int nmax) : completions(nmax) {}
};

// Applies the local rules for adding vertex v to a single state.  The chunk
// bounds identify the boundary layout the signature's slots live in; v must
// be the next vertex of that layout.  Successor series are shifted by each
// case's delta_edges (coefficients pushed past series.nmax() drop);
// completions collects COMPLETE contributions (gated on touch flags and, in
// SAW mode, both endpoints placed).
VertexUpdateResult vertex_update(const BoundarySignature& sig,
                                 const CountSeries& series, Vertex v, Rect rect,
                                 LatticeMode mode, int chunk_c0, int chunk_c1);

}  // namespace sapcensus
