#pragma once

#include <string>
#include <vector>

#include "chanscale/projection.hpp"

namespace chanscale {

namespace detail {

inline void requireShape(const ProductSpace& space, Index inputs, Index outputs, const char* what) {
  if (space.inputFactors() != inputs || space.outputFactors() != outputs)
    throw StructuralError(std::string(what) + ": needs " + std::to_string(inputs) + " input and " +
                          std::to_string(outputs) + " output factors, got " +
                          std::to_string(space.inputFactors()) + "/" +
                          std::to_string(space.outputFactors()));
}

}  // namespace detail

// Divergence from the exponential family generated by the given subsets, reference
// point k0 = uniform. The value is details-bearing: the full solver result rides along.
template <typename Scalar>
RiProjection<Scalar> divergenceFromFamily(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                          const std::vector<MarginalSpec>& specs,
                                          const SolverOptions& opts) {
  return riProject(k, specs, Channel<Scalar>::uniform(k.space()), p, opts);
}

// Pairwise synergy d2: distance from the family where each output interaction involves
// at most one input. Two inputs, one output.
template <typename Scalar>
RiProjection<Scalar> synergyD2(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                               const SolverOptions& opts) {
  detail::requireShape(k.space(), 2, 1, "synergyD2");
  return divergenceFromFamily(p, k, {MarginalSpec({0}, {0}), MarginalSpec({1}, {0})}, opts);
}

// Complexity c1: parallel-pair family, each y_i tied to its own x_i.
template <typename Scalar>
RiProjection<Scalar> complexityC1(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                  const SolverOptions& opts) {
  detail::requireShape(k.space(), 2, 2, "complexityC1");
  return divergenceFromFamily(p, k, {MarginalSpec({0}, {0}), MarginalSpec({1}, {1})}, opts);
}

// Complexity c2: c1's family enlarged by unconditioned output correlations, which
// restores the mutual-information upper bound.
template <typename Scalar>
RiProjection<Scalar> complexityC2(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                  const SolverOptions& opts) {
  detail::requireShape(k.space(), 2, 2, "complexityC2");
  return divergenceFromFamily(
      p, k, {MarginalSpec({0}, {0}), MarginalSpec({1}, {1}), MarginalSpec({}, {0, 1})}, opts);
}

}  // namespace chanscale
