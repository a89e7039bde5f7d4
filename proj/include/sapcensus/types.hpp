#pragma once

#include <stdexcept>

namespace sapcensus {

// Which family of lattice objects is being counted: closed self-avoiding
// polygons (even lengths >= 4) or open self-avoiding walks (any length >= 1).
enum class LatticeMode { Sap, Saw };

inline const char* mode_name(LatticeMode m) {
  return m == LatticeMode::Sap ? "sap" : "saw";
}

// Lattice vertex.  x is the column (grows rightward), y the row (grows
// downward; row 0 is the top).
struct Vertex {
  int x = 0;
  int y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Bounding box measured in edges: vertices live on the (w+1) x (h+1) grid
// [0..w] x [0..h].  A vertical cut c (0 <= c <= w-1) separates vertex columns
// c and c+1; horizontal edge (c,y)-(c+1,y) crosses exactly cut c.
struct Rect {
  int w = 0;
  int h = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Caller-correctable problems: invalid arguments, violated preconditions,
// feasibility guards tripped without the override flag.  Mapped to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configured resource budgets exceeded (memory cap, packed-state capacity).
// Mapped to exit 3.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_rect(Rect r, LatticeMode mode) {
  if (r.w < 0 || r.h < 0)
    throw UsageError("rectangle dimensions must be nonnegative");
  if (mode == LatticeMode::Sap && (r.w < 1 || r.h < 1))
    throw UsageError("polygon rectangles need w >= 1 and h >= 1");
}

}  // namespace sapcensus
