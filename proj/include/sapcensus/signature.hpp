#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sapcensus/series.hpp"
#include "sapcensus/types.hpp"

namespace sapcensus {

// How a crossing edge connects inside the swept region: OPEN/CLOSE are the
// earlier/later ends of a matched (non-crossing) arc pair; FREE is an arc
// whose other end is a walk endpoint in the interior (SAW mode only).
enum class LinkLabel : std::uint8_t { Open, Close, Free };

// Boundary region of a crossing edge.  Traversal order runs topmost boundary
// end first: RIGHT_CUT rows ascending, then the CURRENT_ROW staircase from
// right to left, then LEFT_CUT rows ascending.
enum class BoundarySegment : std::uint8_t { RightCut, CurrentRow, LeftCut };

// One occupied crossing edge on the sweep boundary.
//
// index semantics: cut segments use the row of the horizontal crossing edge.
// CURRENT_ROW uses a doubled column coordinate so every staircase crossing is
// distinct: a vertical edge in column c sits at 2c, and the single horizontal
// kink edge entering vertex column x sits at 2x-1.  Along the staircase the
// doubled index strictly decreases.
struct CrossingSlot {
  BoundarySegment segment = BoundarySegment::LeftCut;
  int index = 0;
  LinkLabel label = LinkLabel::Open;
  friend bool operator==(const CrossingSlot&, const CrossingSlot&) = default;
};

// Canonical transfer-matrix state key: the occupied crossing slots in boundary
// traversal order, the four wall-touch flags, and how many walk endpoints have
// been placed (always 0 in SAP mode).  Interior edge totals are NOT part of
// the key; they index the CountSeries a StateMap maps each signature to.
struct BoundarySignature {
  std::vector<CrossingSlot> slots;
  bool touch_top = false;
  bool touch_bottom = false;
  bool touch_left = false;
  bool touch_right = false;
  int endpoints_placed = 0;

  // Canonical compact byte encoding: equal signatures <=> equal bytes.
  std::vector<std::uint8_t> packed() const;

  friend bool operator==(const BoundarySignature&, const BoundarySignature&) =
      default;
};

struct SignatureHash {
  std::size_t operator()(const BoundarySignature& sig) const;
};

using StateMap = std::unordered_map<BoundarySignature, CountSeries, SignatureHash>;

// Validates and canonicalizes a signature.  Rejects: slots out of strict
// traversal order, unbalanced parenthesis structure over OPEN/CLOSE labels,
// more FREE slots than endpoints_placed (which also bars FREE from SAP
// signatures, where endpoints_placed is 0), endpoints_placed outside 0..2.
BoundarySignature encode_signature(std::vector<CrossingSlot> slots,
                                   std::array<bool, 4> touch /*top,bottom,left,right*/,
                                   int endpoints_placed);

// Index of the slot matched with slot i under the non-crossing matching.
// Fixed-point-free involution on OPEN/CLOSE slots; error for FREE or
// out-of-range i.
int match_partner(const BoundarySignature& sig, int i);

// True if a comes strictly before b in boundary traversal order.
bool traversal_less(const CrossingSlot& a, const CrossingSlot& b);

}  // namespace sapcensus
