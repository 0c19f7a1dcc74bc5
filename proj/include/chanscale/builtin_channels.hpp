#pragma once

#include <array>
#include <cmath>
#include <string>

#include "chanscale/channel.hpp"
#include "chanscale/distributions.hpp"
#include "chanscale/marginals.hpp"

namespace chanscale {

enum class GateKind { Xor, And };

// Deterministic two-input binary gate, optionally mixed with the uniform row:
// row = (1-noise) * point mass + noise * uniform.
template <typename Scalar = double>
Channel<Scalar> makeGate(GateKind kind, Scalar noise = 0) {
  if (!(noise >= 0 && noise <= 1)) throw StructuralError("makeGate: noise must lie in [0,1]");
  ProductSpace space({2, 2}, {2});
  Mat<Scalar> rows(4, 2);
  for (Index x = 0; x < 4; ++x) {
    const Index x1 = x / 2, x2 = x % 2;
    const Index hot = kind == GateKind::Xor ? (x1 ^ x2) : (x1 & x2);
    rows(x, hot) = 1 - noise / 2;
    rows(x, 1 - hot) = noise / 2;
  }
  return Channel<Scalar>(std::move(space), std::move(rows));
}

// Two-point value codes for the interaction family inputs/outputs. The default signed
// levels are the reference encoding; {0,1} is the alternative swept in tests.
template <typename Scalar = double>
struct InteractionParams {
  Scalar alpha = 1;
  Scalar beta = 2;
  std::array<Scalar, 2> inputLevels{Scalar(-1), Scalar(1)};
  std::array<Scalar, 2> outputLevels{Scalar(-1), Scalar(1)};
};

// k(x; y1,y2) proportional to exp((alpha x1 x2 + beta x3)(y1 - y2)) on coded values.
// with_x3=false drops the beta term and the third input (the control channel).
template <typename Scalar = double>
Channel<Scalar> makeInteractionChannel(const InteractionParams<Scalar>& params, bool withX3) {
  const std::vector<Index> inputs = withX3 ? std::vector<Index>{2, 2, 2} : std::vector<Index>{2, 2};
  ProductSpace space(inputs, {2, 2});
  Mat<Scalar> rows(space.inputSize(), 4);
  for (Index x = 0; x < space.inputSize(); ++x) {
    const std::vector<Index> xc = space.decodeInput(x);
    Scalar field = params.alpha * params.inputLevels[xc[0]] * params.inputLevels[xc[1]];
    if (withX3) field += params.beta * params.inputLevels[xc[2]];
    Scalar z = 0;
    for (Index y = 0; y < 4; ++y) {
      const Scalar w1 = params.outputLevels[y / 2];
      const Scalar w2 = params.outputLevels[y % 2];
      rows(x, y) = std::exp(field * (w1 - w2));
      z += rows(x, y);
    }
    rows.row(x) /= z;
  }
  return Channel<Scalar>(std::move(space), std::move(rows));
}

// The 3-input interaction channel averaged over its third input under the uniform
// input distribution: the two-input example instance the complexity measures run on.
template <typename Scalar = double>
Channel<Scalar> makeMarginalizedInteraction(const InteractionParams<Scalar>& params) {
  Channel<Scalar> full = makeInteractionChannel(params, true);
  InputDistribution<Scalar> p = InputDistribution<Scalar>::uniform(full.space());
  return channelMarginal(p, full, MarginalSpec({0, 1}, {0, 1}));
}

}  // namespace chanscale
