#include "sapcensus/series.hpp"

namespace sapcensus {

CountSeries merge_series(const CountSeries& a, const CountSeries& b, int sign) {
  if (a.nmax() != b.nmax())
    throw UsageError("merge_series: series lengths differ");
  if (sign != 1 && sign != -1)
    throw UsageError("merge_series: sign must be +1 or -1");
  CountSeries out = a;
  for (int n = 0; n <= b.nmax(); ++n) {
    if (sign > 0)
      out.add(n, b.at(n));
    else
      out.set(n, out.at(n) - b.at(n));
  }
  return out;
}

}  // namespace sapcensus
