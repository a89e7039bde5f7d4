#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "sapcensus/series.hpp"
#include "sapcensus/signature.hpp"
#include "sapcensus/types.hpp"

using namespace sapcensus;

namespace {

// Aligned-boundary slots from a label string: '(' OPEN, ')' CLOSE, 'f' FREE,
// one cut crossing per row starting at row 0.
std::vector<CrossingSlot> cut_slots(const std::string& labels) {
  std::vector<CrossingSlot> slots;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    LinkLabel lab = LinkLabel::Free;
    if (labels[i] == '(') lab = LinkLabel::Open;
    if (labels[i] == ')') lab = LinkLabel::Close;
    slots.push_back(
        CrossingSlot{BoundarySegment::LeftCut, static_cast<int>(i), lab});
  }
  return slots;
}

BoundarySignature cut_sig(const std::string& labels, int endpoints = 0) {
  return encode_signature(cut_slots(labels), {false, false, false, false},
                          endpoints);
}

}  // namespace

TEST_CASE("count series starts at zero and supports set/add") {
  CountSeries s(6);
  CHECK(s.nmax() == 6);
  for (int n = 0; n <= 6; ++n) CHECK(s.at(n) == 0);
  CHECK(s.is_zero());
  s.set(4, 3);
  s.add(4, 2);
  s.add(6, 1);
  CHECK(s.at(4) == 5);
  CHECK(s.at(6) == 1);
  CHECK_FALSE(s.is_zero());
  CountSeries t(6);
  t.set(4, 5);
  t.set(6, 1);
  CHECK(s == t);
}

TEST_CASE("merge_series adds and subtracts pointwise") {
  CountSeries a(8), zero(8), b(8), c(8);
  a.set(4, 1);
  CHECK(merge_series(a, zero, 1) == a);  // identity

  b.set(4, 1);
  CountSeries sum = merge_series(a, b, 1);
  CHECK(sum.at(4) == 2);  // {4:1} + {4:1} = {4:2}

  a = CountSeries(8);
  a.set(8, 7);
  c.set(8, 5);
  CountSeries diff = merge_series(a, c, -1);
  CHECK(diff.at(8) == 2);  // {8:7} - {8:5} = {8:2}

  CountSeries other(9);
  CHECK_THROWS_AS(merge_series(a, other, 1), UsageError);
  CHECK_THROWS_AS(merge_series(a, c, 2), UsageError);
  CHECK_THROWS_AS(merge_series(a, c, 0), UsageError);
}

TEST_CASE("signed merges may go negative and come back") {
  CountSeries a(4), b(4);
  b.set(4, 3);
  CountSeries neg = merge_series(a, b, -1);
  CHECK(neg.at(4) == -3);
  CHECK(merge_series(neg, b, 1).at(4) == 0);
}

TEST_CASE("rectangle validation by mode") {
  CHECK_NOTHROW(require_rect(Rect{1, 1}, LatticeMode::Sap));
  CHECK_NOTHROW(require_rect(Rect{3, 2}, LatticeMode::Sap));
  CHECK_THROWS_AS(require_rect(Rect{0, 1}, LatticeMode::Sap), UsageError);
  CHECK_THROWS_AS(require_rect(Rect{1, 0}, LatticeMode::Sap), UsageError);
  CHECK_NOTHROW(require_rect(Rect{0, 0}, LatticeMode::Saw));
  CHECK_NOTHROW(require_rect(Rect{0, 3}, LatticeMode::Saw));
  CHECK_THROWS_AS(require_rect(Rect{-1, 2}, LatticeMode::Saw), UsageError);
}

TEST_CASE("empty signature is the unique identity state") {
  const BoundarySignature a =
      encode_signature({}, {false, false, false, false}, 0);
  const BoundarySignature b =
      encode_signature({}, {false, false, false, false}, 0);
  CHECK(a.slots.empty());
  CHECK(a == b);
  CHECK(a.packed() == b.packed());
  CHECK(SignatureHash{}(a) == SignatureHash{}(b));
  const BoundarySignature touched =
      encode_signature({}, {true, false, false, false}, 0);
  CHECK_FALSE(a == touched);
  CHECK(a.packed() != touched.packed());
}

TEST_CASE("\"()(())\" pairs up as (1,2), (3,6), (4,5)") {
  const BoundarySignature sig = cut_sig("()(())");
  CHECK(match_partner(sig, 0) == 1);
  CHECK(match_partner(sig, 1) == 0);
  CHECK(match_partner(sig, 2) == 5);
  CHECK(match_partner(sig, 5) == 2);
  CHECK(match_partner(sig, 3) == 4);
  CHECK(match_partner(sig, 4) == 3);
}

TEST_CASE("\"()\" pairs its two slots") {
  const BoundarySignature sig = cut_sig("()");
  CHECK(match_partner(sig, 0) == 1);
}

TEST_CASE("unbalanced or crossing-impossible strings are rejected") {
  CHECK_THROWS_AS(cut_sig("(()"), UsageError);
  CHECK_THROWS_AS(cut_sig(")("), UsageError);
  CHECK_THROWS_AS(cut_sig("("), UsageError);
  CHECK_THROWS_AS(cut_sig("())("), UsageError);
  CHECK_NOTHROW(cut_sig("(())"));
  CHECK_NOTHROW(cut_sig("()()"));
}

TEST_CASE("FREE slots are capped by endpoint credits (and barred from SAP)") {
  CHECK_THROWS_AS(cut_sig("f", 0), UsageError);  // SAP-style signature
  CHECK_NOTHROW(cut_sig("f", 1));
  CHECK_NOTHROW(cut_sig("ff", 2));
  CHECK_THROWS_AS(cut_sig("ff", 1), UsageError);
  CHECK_THROWS_AS(cut_sig("", 3), UsageError);
  CHECK_THROWS_AS(cut_sig("", -1), UsageError);
  // Terminated walks: endpoints placed without surviving FREE slots.
  CHECK_NOTHROW(cut_sig("()", 2));
}

TEST_CASE("FREE slots are transparent to the matching") {
  const BoundarySignature sig = cut_sig("(f)", 1);
  CHECK(match_partner(sig, 0) == 2);
  CHECK(match_partner(sig, 2) == 0);
  CHECK_THROWS_AS(match_partner(sig, 1), UsageError);   // FREE has no partner
  CHECK_THROWS_AS(match_partner(sig, 3), UsageError);   // out of range
  CHECK_THROWS_AS(match_partner(sig, -1), UsageError);
}

TEST_CASE("slots must follow strict boundary traversal order") {
  // Cut rows ascending.
  std::vector<CrossingSlot> bad = {
      {BoundarySegment::LeftCut, 2, LinkLabel::Open},
      {BoundarySegment::LeftCut, 1, LinkLabel::Close}};
  CHECK_THROWS_AS(
      encode_signature(bad, {false, false, false, false}, 0), UsageError);

  // Duplicate position.
  std::vector<CrossingSlot> dup = {
      {BoundarySegment::LeftCut, 1, LinkLabel::Open},
      {BoundarySegment::LeftCut, 1, LinkLabel::Close}};
  CHECK_THROWS_AS(
      encode_signature(dup, {false, false, false, false}, 0), UsageError);

  // Current-row staircase runs right-to-left: doubled index descending.
  std::vector<CrossingSlot> stair = {
      {BoundarySegment::CurrentRow, 5, LinkLabel::Open},
      {BoundarySegment::CurrentRow, 4, LinkLabel::Close}};
  CHECK_NOTHROW(encode_signature(stair, {false, false, false, false}, 0));
  std::vector<CrossingSlot> stair_bad = {
      {BoundarySegment::CurrentRow, 4, LinkLabel::Open},
      {BoundarySegment::CurrentRow, 5, LinkLabel::Close}};
  CHECK_THROWS_AS(
      encode_signature(stair_bad, {false, false, false, false}, 0), UsageError);

  // Segment order: right cut, then current row, then left cut.
  std::vector<CrossingSlot> segs = {
      {BoundarySegment::RightCut, 0, LinkLabel::Open},
      {BoundarySegment::CurrentRow, 3, LinkLabel::Open},
      {BoundarySegment::CurrentRow, 2, LinkLabel::Close},
      {BoundarySegment::LeftCut, 1, LinkLabel::Close}};
  CHECK_NOTHROW(encode_signature(segs, {false, false, false, false}, 0));
  std::vector<CrossingSlot> segs_bad = {
      {BoundarySegment::CurrentRow, 3, LinkLabel::Open},
      {BoundarySegment::RightCut, 0, LinkLabel::Close}};
  CHECK_THROWS_AS(
      encode_signature(segs_bad, {false, false, false, false}, 0), UsageError);
}

TEST_CASE("traversal_less orders segments and staircase correctly") {
  const CrossingSlot rc{BoundarySegment::RightCut, 3, LinkLabel::Open};
  const CrossingSlot cr_hi{BoundarySegment::CurrentRow, 6, LinkLabel::Open};
  const CrossingSlot cr_lo{BoundarySegment::CurrentRow, 1, LinkLabel::Open};
  const CrossingSlot lc{BoundarySegment::LeftCut, 0, LinkLabel::Open};
  CHECK(traversal_less(rc, cr_hi));
  CHECK(traversal_less(cr_hi, cr_lo));  // staircase: descending doubled index
  CHECK(traversal_less(cr_lo, lc));
  CHECK_FALSE(traversal_less(cr_lo, cr_hi));
  CHECK_FALSE(traversal_less(lc, rc));
  CHECK_FALSE(traversal_less(rc, rc));
}

TEST_CASE("packed bytes are canonical for every field") {
  const BoundarySignature base = cut_sig("()");
  BoundarySignature other = cut_sig("()");
  CHECK(base.packed() == other.packed());

  CHECK(base.packed() != cut_sig("(())").packed());
  CHECK(base.packed() != cut_sig("()", 2).packed());
  const BoundarySignature touched =
      encode_signature(cut_slots("()"), {false, true, false, false}, 0);
  CHECK(base.packed() != touched.packed());
  // Same labels at different rows or on a different segment differ too.
  std::vector<CrossingSlot> shifted = {
      {BoundarySegment::LeftCut, 1, LinkLabel::Open},
      {BoundarySegment::LeftCut, 2, LinkLabel::Close}};
  CHECK(base.packed() !=
        encode_signature(shifted, {false, false, false, false}, 0).packed());
  std::vector<CrossingSlot> right = {
      {BoundarySegment::RightCut, 0, LinkLabel::Open},
      {BoundarySegment::RightCut, 1, LinkLabel::Close}};
  CHECK(base.packed() !=
        encode_signature(right, {false, false, false, false}, 0).packed());
}

TEST_CASE("match_partner is a fixed-point-free involution (fuzz)") {
  std::mt19937 rng(20260823);
  for (int iter = 0; iter < 300; ++iter) {
    // Random balanced parenthesis string with optional FREE insertions.
    std::string labels;
    const int pairs = static_cast<int>(rng() % 6);
    int open = 0, placed = 0;
    while (static_cast<int>(labels.size()) < 2 * pairs) {
      const bool can_open = placed < pairs;
      const bool can_close = open > 0;
      if (can_open && (!can_close || rng() % 2 == 0)) {
        labels.push_back('(');
        ++open;
        ++placed;
      } else {
        labels.push_back(')');
        --open;
      }
    }
    int endpoints = static_cast<int>(rng() % 3);
    int frees = endpoints == 0 ? 0 : static_cast<int>(rng() % (endpoints + 1));
    for (int f = 0; f < frees; ++f)
      labels.insert(labels.begin() + static_cast<long>(rng() % (labels.size() + 1)), 'f');

    const BoundarySignature sig = cut_sig(labels, endpoints);
    for (int i = 0; i < static_cast<int>(sig.slots.size()); ++i) {
      if (sig.slots[static_cast<std::size_t>(i)].label == LinkLabel::Free) {
        CHECK_THROWS_AS(match_partner(sig, i), UsageError);
        continue;
      }
      const int j = match_partner(sig, i);
      CHECK(j != i);
      CHECK(match_partner(sig, j) == i);
      const bool i_open =
          sig.slots[static_cast<std::size_t>(i)].label == LinkLabel::Open;
      CHECK((i_open ? i < j : j < i));
    }
  }
}
