#pragma once

#include <string>
#include <utility>

#include "chanscale/core.hpp"
#include "chanscale/detail/validate.hpp"
#include "chanscale/errors.hpp"
#include "chanscale/product_space.hpp"

namespace chanscale {

// Strictly positive distribution over the input part X of a space. Entries must exceed
// the positivity floor; the total must be 1 within the slack and is renormalized
// exactly at construction.
template <typename Scalar>
class InputDistribution {
 public:
  InputDistribution(ProductSpace space, Vec<Scalar> probs)
      : space_(std::move(space)), probs_(std::move(probs)) {
    if (probs_.size() != space_.inputSize())
      throw StructuralError("InputDistribution: expected " + std::to_string(space_.inputSize()) +
                            " entries, got " + std::to_string(probs_.size()));
    for (Index x = 0; x < probs_.size(); ++x)
      if (!(static_cast<double>(probs_[x]) > kPositivityFloor))
        throw StructuralError("InputDistribution: entry at x=" + std::to_string(x) +
                              " is not strictly positive (floor 1e-15)");
    probs_ /= detail::checkedNormalizer(detail::sequentialSum(probs_.data(), probs_.size()),
                                        "InputDistribution");
  }

  static InputDistribution uniform(ProductSpace space) {
    Vec<Scalar> v = Vec<Scalar>::Constant(space.inputSize(), Scalar(1) / Scalar(space.inputSize()));
    return InputDistribution(std::move(space), std::move(v));
  }

  const ProductSpace& space() const { return space_; }
  const Vec<Scalar>& probs() const { return probs_; }
  Scalar operator()(Index x) const { return probs_[x]; }

 private:
  ProductSpace space_;
  Vec<Scalar> probs_;
};

// Joint distribution over X x Y, stored as an |X| x |Y| row-major array; the linear
// storage order is the flattened joint order. Entries are nonnegative; the total is 1
// within the slack and renormalized exactly at construction.
template <typename Scalar>
class JointDistribution {
 public:
  JointDistribution(ProductSpace space, Mat<Scalar> cells)
      : space_(std::move(space)), cells_(std::move(cells)) {
    if (cells_.rows() != space_.inputSize() || cells_.cols() != space_.outputSize())
      throw StructuralError("JointDistribution: expected " + std::to_string(space_.inputSize()) + "x" +
                            std::to_string(space_.outputSize()) + " cells, got " +
                            std::to_string(cells_.rows()) + "x" + std::to_string(cells_.cols()));
    detail::requireNonnegative(cells_.data(), cells_.size(), "JointDistribution");
    cells_ /= detail::checkedNormalizer(detail::sequentialSum(cells_.data(), cells_.size()),
                                        "JointDistribution");
  }

  const ProductSpace& space() const { return space_; }
  const Mat<Scalar>& cells() const { return cells_; }
  Scalar operator()(Index x, Index y) const { return cells_(x, y); }

 private:
  ProductSpace space_;
  Mat<Scalar> cells_;
};

using InputDistributiond = InputDistribution<double>;
using JointDistributiond = JointDistribution<double>;

}  // namespace chanscale
