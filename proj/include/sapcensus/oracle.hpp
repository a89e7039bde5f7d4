#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sapcensus/series.hpp"
#include "sapcensus/types.hpp"

namespace sapcensus {

// Backtracking enumerators used as ground truth for the sweep methods.
// Feasibility guards (cost grows like mu^n): SAP lengths are refused above 26
// and SAW lengths above 20 unless allow_large is set.

struct OracleConfig {
  int nmax = 0;
  LatticeMode mode = LatticeMode::Sap;
  bool allow_large = false;
};

// counts[n] = c_n, directed n-step self-avoiding walks from the origin (all
// four first steps counted, no symmetry reduction); counts[0] = 1.
CountSeries enumerate_walks_oracle(int nmax, bool allow_large = false);

// counts[n] = p_n, self-avoiding polygons of perimeter n up to translation
// (undirected, unrooted; no rotation/reflection identification).  Enumerates
// rooted directed closed walks and divides by 2n.
CountSeries enumerate_polygons_oracle(int nmax, bool allow_large = false);

// counts[n] = number of undirected objects of length n whose bounding box is
// exactly rect (touching all four sides).  SAW mode accepts degenerate rects:
// Rect(w,0)/Rect(0,h) hold the single straight path, Rect(0,0) the
// single-vertex length-0 walk.
CountSeries inscribed_oracle(Rect rect, LatticeMode mode, int nmax,
                             bool allow_large = false);

// An undirected lattice edge with lexicographically ordered endpoints.
using Edge = std::pair<Vertex, Vertex>;
using EdgeList = std::vector<Edge>;

// Low-level inscribed enumerator: invokes visit exactly once per undirected
// inscribed object with its edge set.  Lets tests apply arbitrary predicates
// (e.g. per-cut crossing thresholds) to independently recompute filtered
// counts.
void enumerate_inscribed(Rect rect, LatticeMode mode, int nmax,
                         const std::function<void(const EdgeList&)>& visit,
                         bool allow_large = false);

}  // namespace sapcensus
