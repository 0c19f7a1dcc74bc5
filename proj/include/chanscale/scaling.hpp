#pragma once

#include <string>
#include <utility>

#include "chanscale/channel.hpp"
#include "chanscale/distributions.hpp"
#include "chanscale/marginals.hpp"
#include "chanscale/product_space.hpp"

namespace chanscale {

namespace detail {

// Scaling ratio with the 0/0 := 0 convention: a prescribed zero silently kills the
// cells it covers; prescribed mass over a vanished marginal has no finite preimage.
template <typename Scalar>
Scalar scalingFactor(Scalar prescribed, Scalar current, const char* what, Index cell,
                     const ProductSpace& reduced) {
  if (prescribed == 0) return 0;
  if (current == 0) {
    const Index gx = cell / reduced.outputSize();
    const Index gy = cell % reduced.outputSize();
    throw InfeasibleScalingError(std::string(what) + ": prescribed mass on reduced cell (x_I=" +
                                     std::to_string(gx) + ", y_J=" + std::to_string(gy) +
                                     ") whose current marginal is zero",
                                 cell);
  }
  return prescribed / current;
}

}  // namespace detail

// Classical proportional fitting step: q'(x,y) = q(x,y) qbar(x_I,y_J) / q(x_I,y_J).
template <typename Scalar>
JointDistribution<Scalar> jointScale(const JointDistribution<Scalar>& q, const MarginalIndexer& indexer,
                                     const JointDistribution<Scalar>& prescribed) {
  const ProductSpace& red = indexer.reducedSpace();
  detail::requireSameSpace(prescribed.space(), red, "jointScale: prescribed marginal");
  const Index nx = q.space().inputSize();
  const Index ny = q.space().outputSize();

  Mat<Scalar> marg = Mat<Scalar>::Zero(red.inputSize(), red.outputSize());
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y) marg(indexer.inputGroup(x), indexer.outputGroup(y)) += q(x, y);

  Mat<Scalar> factor(red.inputSize(), red.outputSize());
  for (Index c = 0; c < factor.size(); ++c)
    factor.data()[c] =
        detail::scalingFactor(prescribed.cells().data()[c], marg.data()[c], "jointScale", c, red);

  Mat<Scalar> cells(nx, ny);
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y) cells(x, y) = q(x, y) * factor(indexer.inputGroup(x), indexer.outputGroup(y));
  return JointDistribution<Scalar>(q.space(), std::move(cells));
}

template <typename Scalar>
JointDistribution<Scalar> jointScale(const JointDistribution<Scalar>& q, const MarginalSpec& spec,
                                     const JointDistribution<Scalar>& prescribed) {
  return jointScale(q, MarginalIndexer(q.space(), spec), prescribed);
}

// Input-only variant (I = all inputs, no outputs): rescale rows so the X-marginal
// becomes p.
template <typename Scalar>
JointDistribution<Scalar> jointScaleToInput(const JointDistribution<Scalar>& q,
                                            const InputDistribution<Scalar>& p) {
  detail::requireSameSpace(q.space(), p.space(), "jointScaleToInput");
  const Index nx = q.space().inputSize();
  const Index ny = q.space().outputSize();
  Mat<Scalar> cells(nx, ny);
  for (Index x = 0; x < nx; ++x) {
    const Scalar mass = detail::sequentialSum(q.cells().data() + x * ny, ny);
    if (mass == 0)
      throw InfeasibleScalingError(
          "jointScaleToInput: prescribed mass on input row x=" + std::to_string(x) +
              " whose current marginal is zero",
          x);
    cells.row(x) = q.cells().row(x) * (p(x) / mass);
  }
  return JointDistribution<Scalar>(q.space(), std::move(cells));
}

// Unnormalized channel scaling: k(x,y) kbar(x_I;y_J) / k(x_I;y_J). Rows need not sum
// to one afterwards; see normalizeRows.
template <typename Scalar>
NonnegativeKernel<Scalar> ijScaleRaw(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                     const Channel<Scalar>& kbarMarg, const MarginalIndexer& indexer) {
  const ProductSpace& red = indexer.reducedSpace();
  detail::requireSameSpace(kbarMarg.space(), red, "ijScaleRaw: prescribed marginal");
  const Channel<Scalar> cur = channelMarginal(p, k, indexer);

  Mat<Scalar> factor(red.inputSize(), red.outputSize());
  for (Index c = 0; c < factor.size(); ++c)
    factor.data()[c] =
        detail::scalingFactor(kbarMarg.rows().data()[c], cur.rows().data()[c], "ijScaleRaw", c, red);

  const Index nx = k.space().inputSize();
  const Index ny = k.space().outputSize();
  Mat<Scalar> values(nx, ny);
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y)
      values(x, y) = k(x, y) * factor(indexer.inputGroup(x), indexer.outputGroup(y));
  return NonnegativeKernel<Scalar>(k.space(), std::move(values));
}

template <typename Scalar>
NonnegativeKernel<Scalar> ijScaleRaw(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                     const Channel<Scalar>& kbarMarg, const MarginalSpec& spec) {
  return ijScaleRaw(p, k, kbarMarg, MarginalIndexer(k.space(), spec));
}

template <typename Scalar>
struct RowNormalization {
  Channel<Scalar> channel;
  NormalizationVector<Scalar> zeta;
};

template <typename Scalar>
RowNormalization<Scalar> normalizeRows(const NonnegativeKernel<Scalar>& raw) {
  const Index nx = raw.space().inputSize();
  const Index ny = raw.space().outputSize();
  Vec<Scalar> z(nx);
  for (Index x = 0; x < nx; ++x) {
    z[x] = detail::sequentialSum(raw.values().data() + x * ny, ny);
    if (!(z[x] > 0))
      throw DegenerateRowError("normalizeRows: row x=" + std::to_string(x) + " has zero mass", x);
  }
  Mat<Scalar> rows = raw.values().colwise() / z;
  return {Channel<Scalar>(raw.space(), std::move(rows)), NormalizationVector<Scalar>{std::move(z)}};
}

// One full scaling step of the channel algorithm.
template <typename Scalar>
Channel<Scalar> normalizedIjScale(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                  const Channel<Scalar>& kbarMarg, const MarginalIndexer& indexer) {
  return normalizeRows(ijScaleRaw(p, k, kbarMarg, indexer)).channel;
}

template <typename Scalar>
Channel<Scalar> normalizedIjScale(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                  const Channel<Scalar>& kbarMarg, const MarginalSpec& spec) {
  return normalizedIjScale(p, k, kbarMarg, MarginalIndexer(k.space(), spec));
}

}  // namespace chanscale
