#pragma once

#include <cmath>
#include <string>

#include "chanscale/core.hpp"
#include "chanscale/errors.hpp"

namespace chanscale::detail {

// These helpers take raw storage of the concrete Vec/Mat types; Mat is row-major, so
// pointer order equals the flattened joint order (inputs before outputs, last
// coordinate fastest).

template <typename Scalar>
void requireNonnegative(const Scalar* values, Index n, const std::string& what) {
  for (Index i = 0; i < n; ++i)
    if (!(values[i] >= 0) || std::isnan(static_cast<double>(values[i])))
      throw StructuralError(what + ": negative or NaN entry at flat index " + std::to_string(i));
}

// Sequential sum in flat order; the reduction order is pinned so repeated runs agree
// bit for bit.
template <typename Scalar>
Scalar sequentialSum(const Scalar* values, Index n) {
  Scalar total = 0;
  for (Index i = 0; i < n; ++i) total += values[i];
  return total;
}

template <typename Scalar>
Scalar checkedNormalizer(Scalar sum, const std::string& what) {
  if (!(std::abs(static_cast<double>(sum) - 1.0) <= kNormalizationSlack))
    throw StructuralError(what + ": mass sums to " + std::to_string(static_cast<double>(sum)) +
                          ", outside the 1e-12 slack around 1");
  return sum;
}

}  // namespace chanscale::detail
