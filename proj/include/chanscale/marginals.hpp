#pragma once

#include <string>
#include <utility>

#include "chanscale/channel.hpp"
#include "chanscale/core.hpp"
#include "chanscale/distributions.hpp"
#include "chanscale/errors.hpp"
#include "chanscale/product_space.hpp"

namespace chanscale {

namespace detail {

inline void requireSameSpace(const ProductSpace& a, const ProductSpace& b, const char* what) {
  if (!(a == b)) throw StructuralError(std::string(what) + ": operands live on different spaces");
}

}  // namespace detail

// pk(x,y) = p(x) k(x;y).
template <typename Scalar>
JointDistribution<Scalar> compose(const InputDistribution<Scalar>& p, const Channel<Scalar>& k) {
  detail::requireSameSpace(p.space(), k.space(), "compose");
  Mat<Scalar> cells = k.rows().colwise() * p.probs();
  return JointDistribution<Scalar>(k.space(), std::move(cells));
}

template <typename Scalar>
struct Disintegration {
  InputDistribution<Scalar> input;
  Channel<Scalar> channel;
};

// Recover (p, k) from a joint with strictly positive X-marginal. The offending row is
// named if some x carries no mass.
template <typename Scalar>
Disintegration<Scalar> disintegrate(const JointDistribution<Scalar>& q) {
  const Index nx = q.space().inputSize();
  const Index ny = q.space().outputSize();
  Vec<Scalar> px(nx);
  for (Index x = 0; x < nx; ++x) {
    px[x] = detail::sequentialSum(q.cells().data() + x * ny, ny);
    if (!(static_cast<double>(px[x]) > kPositivityFloor))
      throw DegenerateInputError("disintegrate: X-marginal vanishes at x=" + std::to_string(x), x);
  }
  Mat<Scalar> rows = q.cells().colwise() / px;
  return {InputDistribution<Scalar>(q.space(), std::move(px)),
          Channel<Scalar>(q.space(), std::move(rows))};
}

// Sum q over the unselected factors: qbar(x_I, y_J) = sum q(x, y). Accumulation runs in
// flattened cell order.
template <typename Scalar>
JointDistribution<Scalar> jointMarginal(const JointDistribution<Scalar>& q,
                                        const MarginalIndexer& indexer) {
  const ProductSpace& red = indexer.reducedSpace();
  Mat<Scalar> cells = Mat<Scalar>::Zero(red.inputSize(), red.outputSize());
  for (Index x = 0; x < q.space().inputSize(); ++x)
    for (Index y = 0; y < q.space().outputSize(); ++y)
      cells(indexer.inputGroup(x), indexer.outputGroup(y)) += q(x, y);
  return JointDistribution<Scalar>(red, std::move(cells));
}

template <typename Scalar>
JointDistribution<Scalar> jointMarginal(const JointDistribution<Scalar>& q, const MarginalSpec& spec) {
  return jointMarginal(q, MarginalIndexer(q.space(), spec));
}

// p restricted to the selected input factors, as a distribution on the reduced space.
template <typename Scalar>
InputDistribution<Scalar> inputMarginal(const InputDistribution<Scalar>& p,
                                        const MarginalIndexer& indexer) {
  const ProductSpace& red = indexer.reducedSpace();
  Vec<Scalar> probs = Vec<Scalar>::Zero(red.inputSize());
  for (Index x = 0; x < p.space().inputSize(); ++x) probs[indexer.inputGroup(x)] += p(x);
  return InputDistribution<Scalar>(red, std::move(probs));
}

template <typename Scalar>
InputDistribution<Scalar> inputMarginal(const InputDistribution<Scalar>& p, const MarginalSpec& spec) {
  return inputMarginal(p, MarginalIndexer(p.space(), spec));
}

// Marginal channel k(x_I; y_J) = sum_{x_{I^c}} p(x_{I^c} | x_I) sum_{y_{J^c}} k(x; y).
// Depends on p through the conditional; with I = {} this is the single-row channel
// averaging over all of X under p.
template <typename Scalar>
Channel<Scalar> channelMarginal(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                const MarginalIndexer& indexer) {
  detail::requireSameSpace(p.space(), k.space(), "channelMarginal");
  const ProductSpace& red = indexer.reducedSpace();
  Mat<Scalar> num = Mat<Scalar>::Zero(red.inputSize(), red.outputSize());
  Vec<Scalar> pI = Vec<Scalar>::Zero(red.inputSize());
  for (Index x = 0; x < k.space().inputSize(); ++x) {
    const Index gx = indexer.inputGroup(x);
    pI[gx] += p(x);
    for (Index y = 0; y < k.space().outputSize(); ++y) num(gx, indexer.outputGroup(y)) += p(x) * k(x, y);
  }
  Mat<Scalar> rows = num.colwise() / pI;
  return Channel<Scalar>(red, std::move(rows));
}

template <typename Scalar>
Channel<Scalar> channelMarginal(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                const MarginalSpec& spec) {
  return channelMarginal(p, k, MarginalIndexer(k.space(), spec));
}

}  // namespace chanscale
