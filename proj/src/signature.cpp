#include "sapcensus/signature.hpp"

#include <string>

namespace sapcensus {

bool traversal_less(const CrossingSlot& a, const CrossingSlot& b) {
  if (a.segment != b.segment)
    return static_cast<int>(a.segment) < static_cast<int>(b.segment);
  // Cut slots run top to bottom; the current-row staircase runs right to
  // left, i.e. by decreasing doubled column coordinate.
  if (a.segment == BoundarySegment::CurrentRow) return a.index > b.index;
  return a.index < b.index;
}

std::vector<std::uint8_t> BoundarySignature::packed() const {
  std::vector<std::uint8_t> out;
  out.reserve(slots.size() * 4 + 2);
  unsigned flags = (touch_top ? 1u : 0u) | (touch_bottom ? 2u : 0u) |
                   (touch_left ? 4u : 0u) | (touch_right ? 8u : 0u);
  out.push_back(static_cast<std::uint8_t>(flags |
                                          (unsigned(endpoints_placed) << 4)));
  out.push_back(static_cast<std::uint8_t>(slots.size()));
  for (const auto& s : slots) {
    out.push_back(static_cast<std::uint8_t>(
        (unsigned(s.segment) << 2) | unsigned(s.label)));
    out.push_back(static_cast<std::uint8_t>(s.index & 0xff));
    out.push_back(static_cast<std::uint8_t>((s.index >> 8) & 0xff));
  }
  return out;
}

std::size_t SignatureHash::operator()(const BoundarySignature& sig) const {
  // FNV-1a over the canonical byte encoding.
  std::size_t h = 1469598103934665603ull;
  for (std::uint8_t b : sig.packed()) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

BoundarySignature encode_signature(std::vector<CrossingSlot> slots,
                                   std::array<bool, 4> touch,
                                   int endpoints_placed) {
  if (endpoints_placed < 0 || endpoints_placed > 2)
    throw UsageError("encode_signature: endpoints_placed must be 0..2");
  int depth = 0;
  int free_count = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].index < 0)
      throw UsageError("encode_signature: negative slot index");
    if (i > 0 && !traversal_less(slots[i - 1], slots[i]))
      throw UsageError("encode_signature: slots not in strict traversal order");
    switch (slots[i].label) {
      case LinkLabel::Open:
        ++depth;
        break;
      case LinkLabel::Close:
        if (depth == 0)
          throw UsageError("encode_signature: unbalanced parenthesis structure");
        --depth;
        break;
      case LinkLabel::Free:
        ++free_count;
        break;
    }
  }
  if (depth != 0)
    throw UsageError("encode_signature: unbalanced parenthesis structure");
  if (free_count > endpoints_placed)
    throw UsageError("encode_signature: FREE slots exceed endpoints_placed");
  BoundarySignature sig;
  sig.slots = std::move(slots);
  sig.touch_top = touch[0];
  sig.touch_bottom = touch[1];
  sig.touch_left = touch[2];
  sig.touch_right = touch[3];
  sig.endpoints_placed = endpoints_placed;
  return sig;
}

int match_partner(const BoundarySignature& sig, int i) {
  const int n = static_cast<int>(sig.slots.size());
  if (i < 0 || i >= n) throw UsageError("match_partner: slot index out of range");
  const LinkLabel lab = sig.slots[static_cast<std::size_t>(i)].label;
  if (lab == LinkLabel::Free)
    throw UsageError("match_partner: FREE slots have no partner");
  int depth = 0;
  if (lab == LinkLabel::Open) {
    for (int j = i + 1; j < n; ++j) {
      LinkLabel l = sig.slots[static_cast<std::size_t>(j)].label;
      if (l == LinkLabel::Open) {
        ++depth;
      } else if (l == LinkLabel::Close) {
        if (depth == 0) return j;
        --depth;
      }
    }
  } else {
    for (int j = i - 1; j >= 0; --j) {
      LinkLabel l = sig.slots[static_cast<std::size_t>(j)].label;
      if (l == LinkLabel::Close) {
        ++depth;
      } else if (l == LinkLabel::Open) {
        if (depth == 0) return j;
        --depth;
      }
    }
  }
  throw UsageError("match_partner: unbalanced signature");
}

}  // namespace sapcensus
